//! Brute-force reference implementations.
//!
//! Every function here rescans the raw corpus records. Tokens come from a
//! regular expression rather than the engine's tokenizer, section scopes are
//! resolved by walking parent links upward, and buckets are computed from
//! calendar fields. Results are plain values so tests can compare them with
//! engine output field by field.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use npswatch_corpus::{Corpus, Forum, Granularity, SourceKind};
use regex::Regex;

/// Tokens of `text` under the shared grammar, via a regular expression.
pub fn tokens(text: &str) -> Vec<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"[\p{L}\p{N}]+(?:-[\p{L}\p{N}]+)*").expect("valid regex"));
    re.find_iter(text)
        .map(|m| m.as_str().to_lowercase())
        .filter(|t| t.chars().count() >= 2 && t.chars().any(|c| c.is_alphabetic()))
        .collect()
}

/// First day of the bucket holding `ts`.
pub fn bucket_start(ts: DateTime<Utc>, g: Granularity) -> NaiveDate {
    let d = ts.date_naive();
    match g {
        Granularity::Day => d,
        Granularity::Week => {
            let w = d.iso_week();
            NaiveDate::from_isoywd_opt(w.year(), w.week(), chrono::Weekday::Mon).expect("valid iso week")
        }
        Granularity::Month => NaiveDate::from_ymd_opt(d.year(), d.month(), 1).expect("valid month"),
    }
}

fn next_start(d: NaiveDate, g: Granularity) -> NaiveDate {
    match g {
        Granularity::Day => d.succ_opt().expect("in range"),
        Granularity::Week => d + chrono::Duration::days(7),
        Granularity::Month => {
            let (y, m) = if d.month() == 12 { (d.year() + 1, 1) } else { (d.year(), d.month() + 1) };
            NaiveDate::from_ymd_opt(y, m, 1).expect("valid month")
        }
    }
}

/// One indexed document as seen by the oracle.
#[derive(Debug, Clone)]
pub struct Doc {
    pub id: String,
    pub source: SourceKind,
    pub forum: Option<String>,
    pub section: Option<String>,
    pub shop: Option<u32>,
    pub timestamp: DateTime<Utc>,
    pub text: String,
    pub tokens: HashSet<String>,
}

/// Every post, tweet and listing of `corpus`.
pub fn documents(corpus: &Corpus) -> Vec<Doc> {
    let mut out = Vec::new();
    for p in &corpus.posts {
        let thread = corpus.threads.iter().find(|t| t.id == p.thread_id).expect("post has a thread");
        let forum = corpus.forums.iter().find(|f| f.id == thread.forum_id).expect("thread has a forum");
        out.push(Doc {
            id: p.id.clone(),
            source: forum.source.clone(),
            forum: Some(forum.id.clone()),
            section: Some(thread.section_id.clone()),
            shop: None,
            timestamp: p.created_at,
            text: p.text.clone(),
            tokens: tokens(&p.text).into_iter().collect(),
        });
    }
    for t in &corpus.tweets {
        out.push(Doc {
            id: t.id.clone(),
            source: SourceKind::Microblog,
            forum: None,
            section: None,
            shop: None,
            timestamp: t.created_at,
            text: t.text.clone(),
            tokens: tokens(&t.text).into_iter().collect(),
        });
    }
    for s in &corpus.snapshots {
        for l in &s.listings {
            out.push(Doc {
                id: String::new(),
                source: SourceKind::Shop,
                forum: None,
                section: None,
                shop: Some(s.shop_id),
                timestamp: s.captured_at.and_hms_opt(0, 0, 0).expect("midnight").and_utc(),
                text: l.name.clone(),
                tokens: tokens(&l.name).into_iter().collect(),
            });
        }
    }
    out
}

/// Whether section `id` lies at or below `ancestor`, by walking parents.
pub fn is_under(forum: &Forum, id: &str, ancestor: &str) -> bool {
    let mut current = Some(id.to_string());
    while let Some(c) = current {
        if c == ancestor {
            return true;
        }
        current = forum.sections.iter().find(|s| s.id == c).and_then(|s| s.parent_id.clone());
    }
    false
}

fn in_scope(corpus: &Corpus, doc: &Doc, source: &SourceKind, section: Option<&str>) -> bool {
    if doc.source != *source {
        return false;
    }
    match (section, &doc.forum, &doc.section) {
        (None, _, _) => true,
        (Some(want), Some(forum), Some(have)) => {
            let forum = corpus.forums.iter().find(|f| &f.id == forum).expect("forum exists");
            is_under(forum, have, want)
        }
        _ => false,
    }
}

/// (documents containing `term`, all documents) for one scope and bucket.
pub fn term_count(
    corpus: &Corpus,
    docs: &[Doc],
    term: &str,
    source: &SourceKind,
    section: Option<&str>,
    g: Granularity,
    start: NaiveDate,
) -> (u64, u64) {
    let mut with = 0;
    let mut total = 0;
    for d in docs {
        if in_scope(corpus, d, source, section) && bucket_start(d.timestamp, g) == start {
            total += 1;
            if d.tokens.contains(term) {
                with += 1;
            }
        }
    }
    (with, total)
}

/// A trend point: (bucket start, docs with term, docs total, normalized).
pub type TrendRow = (NaiveDate, u64, u64, f64);

/// Zero-filled trend over the span of all documents of `source`.
pub fn trend(
    corpus: &Corpus,
    docs: &[Doc],
    term: &str,
    source: &SourceKind,
    section: Option<&str>,
    g: Granularity,
) -> Vec<TrendRow> {
    let times: Vec<DateTime<Utc>> = docs.iter().filter(|d| d.source == *source).map(|d| d.timestamp).collect();
    let (Some(first), Some(last)) = (times.iter().min(), times.iter().max()) else { return Vec::new() };
    let mut with: HashMap<NaiveDate, u64> = HashMap::new();
    let mut total: HashMap<NaiveDate, u64> = HashMap::new();
    for d in docs.iter().filter(|d| in_scope(corpus, d, source, section)) {
        let b = bucket_start(d.timestamp, g);
        *total.entry(b).or_default() += 1;
        if d.tokens.contains(term) {
            *with.entry(b).or_default() += 1;
        }
    }
    let mut out = Vec::new();
    let end = bucket_start(*last, g);
    let mut b = bucket_start(*first, g);
    while b <= end {
        let w = with.get(&b).copied().unwrap_or(0);
        let t = total.get(&b).copied().unwrap_or(0);
        out.push((b, w, t, w as f64 / t.max(1) as f64));
        b = next_start(b, g);
    }
    out
}

/// Trend rows for each depth-`depth` section of `forum`, in listed order.
pub fn horizon(
    corpus: &Corpus,
    docs: &[Doc],
    term: &str,
    forum_id: &str,
    depth: u32,
    g: Granularity,
) -> Vec<(String, Vec<TrendRow>)> {
    let forum = corpus.forums.iter().find(|f| f.id == forum_id).expect("forum exists");
    forum
        .sections
        .iter()
        .filter(|s| s.depth == depth)
        .map(|s| (s.id.clone(), trend(corpus, docs, term, &forum.source, Some(&s.id), g)))
        .collect()
}

/// Pairwise co-occurrence by scanning every token pair of every document.
pub fn cooccurrence(
    corpus: &Corpus,
    docs: &[Doc],
    term: &str,
    source: &SourceKind,
    section: Option<&str>,
    top_n: usize,
    stopwords: &HashSet<String>,
) -> Vec<(String, u64)> {
    let mut weights: BTreeMap<String, u64> = BTreeMap::new();
    for d in docs.iter().filter(|d| in_scope(corpus, d, source, section)) {
        let toks: Vec<&String> = d.tokens.iter().collect();
        let mut seen: HashSet<&String> = HashSet::new();
        for a in &toks {
            for b in &toks {
                if a.as_str() == term && b.as_str() != term && !stopwords.contains(b.as_str()) && seen.insert(b) {
                    *weights.entry((*b).clone()).or_default() += 1;
                }
            }
        }
    }
    let mut out: Vec<(String, u64)> = weights.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out.truncate(top_n);
    out
}

/// Terms of `source` first seen strictly after midnight of `cutoff` with at
/// least `min_count` documents, excluding `excluded`.
pub fn neologisms(
    docs: &[Doc],
    source: &SourceKind,
    cutoff: NaiveDate,
    min_count: u64,
    top_n: usize,
    excluded: &HashSet<String>,
) -> Vec<(String, u64, DateTime<Utc>)> {
    let cutoff = cutoff.and_hms_opt(0, 0, 0).expect("midnight").and_utc();
    let mut stats: BTreeMap<&str, (u64, DateTime<Utc>)> = BTreeMap::new();
    for d in docs.iter().filter(|d| d.source == *source) {
        for t in &d.tokens {
            let e = stats.entry(t.as_str()).or_insert((0, d.timestamp));
            e.0 += 1;
            e.1 = e.1.min(d.timestamp);
        }
    }
    let mut out: Vec<(String, u64, DateTime<Utc>)> = stats
        .into_iter()
        .filter(|(t, (n, first))| *first > cutoff && *n >= min_count && !excluded.contains(*t))
        .map(|(t, (n, first))| (t.to_string(), n, first))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out.truncate(top_n);
    out
}

/// Treemap node as recomputed by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub own: u64,
    pub subtree: u64,
    pub children: Vec<Node>,
}

/// Post counts per section of `forum`, aggregated up the tree.
pub fn treemap(corpus: &Corpus, forum_id: &str) -> Node {
    let forum = corpus.forums.iter().find(|f| f.id == forum_id).expect("forum exists");
    let section_of: HashMap<&str, &str> =
        corpus.threads.iter().filter(|t| t.forum_id == forum_id).map(|t| (t.id.as_str(), t.section_id.as_str())).collect();
    let mut own: HashMap<&str, u64> = HashMap::new();
    for p in &corpus.posts {
        if let Some(s) = section_of.get(p.thread_id.as_str()) {
            *own.entry(s).or_default() += 1;
        }
    }
    fn build(forum: &Forum, id: &str, own: &HashMap<&str, u64>) -> Node {
        let children: Vec<Node> = forum
            .sections
            .iter()
            .filter(|s| s.parent_id.as_deref() == Some(id))
            .map(|s| build(forum, &s.id, own))
            .collect();
        let mine = own.get(id).copied().unwrap_or(0);
        // Subtree total counted directly rather than summed from children.
        let subtree = own.iter().filter(|(s, _)| is_under(forum, s, id)).map(|(_, n)| n).sum();
        Node { id: id.to_string(), own: mine, subtree, children }
    }
    let root = forum.sections.iter().find(|s| s.parent_id.is_none()).expect("forum has a root");
    build(forum, &root.id, &own)
}

/// A gazetteer row: (place name, ISO code, is a country name).
pub type Place<'a> = (&'a str, &'a str, bool);

/// Country code of `location`: country names beat city names; within a kind
/// the longest match wins; matches must sit on word boundaries.
pub fn resolve_location(location: &str, gazetteer: &[Place]) -> String {
    let hay: Vec<char> = location.to_lowercase().chars().collect();
    let boundary = |i: usize| i == 0 || i >= hay.len() || !hay[i].is_alphanumeric();
    let mut best: Option<(bool, usize, &str)> = None;
    for &(name, code, country) in gazetteer {
        let needle: Vec<char> = name.to_lowercase().chars().collect();
        if needle.is_empty() || needle.len() > hay.len() {
            continue;
        }
        let found = (0..=hay.len() - needle.len()).any(|i| {
            hay[i..i + needle.len()] == needle[..]
                && (i == 0 || boundary(i - 1))
                && boundary(i + needle.len())
        });
        if found {
            let key = (country, needle.len(), code);
            let better = match best {
                None => true,
                Some((c, l, k)) => (key.0, key.1) > (c, l) || ((key.0, key.1) == (c, l) && code < k),
            };
            if better {
                best = Some(key);
            }
        }
    }
    best.map_or_else(|| "UNKNOWN".to_string(), |(_, _, code)| code.to_string())
}

/// Users of `forum` per resolved country.
pub fn geo(corpus: &Corpus, forum_id: &str, gazetteer: &[Place]) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for u in corpus.users.iter().filter(|u| u.forum_id == forum_id) {
        let code = u.location_raw.as_deref().map_or_else(|| "UNKNOWN".to_string(), |l| resolve_location(l, gazetteer));
        *out.entry(code).or_default() += 1;
    }
    out
}

/// Posts per author or per thread in `forum`, sorted ascending.
pub fn activity(corpus: &Corpus, forum_id: &str, per_thread: bool) -> Vec<u64> {
    let threads: HashSet<&str> =
        corpus.threads.iter().filter(|t| t.forum_id == forum_id).map(|t| t.id.as_str()).collect();
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for p in corpus.posts.iter().filter(|p| threads.contains(p.thread_id.as_str())) {
        let key = if per_thread { p.thread_id.as_str() } else { p.author_id.as_str() };
        *counts.entry(key).or_default() += 1;
    }
    let mut v: Vec<u64> = counts.into_values().collect();
    v.sort_unstable();
    v
}

/// A substance row: (tweets, posts per forum, shop ids, first source and time).
pub type SubstanceRow = (u64, BTreeMap<String, u64>, BTreeSet<u32>, Option<(SourceKind, DateTime<Utc>)>);

/// Per-substance counts for a lexicon given as alias lists.
pub fn substance(docs: &[Doc], aliases: &[&str], priority: &[SourceKind], forums: &[&str]) -> SubstanceRow {
    let hit = |d: &Doc| aliases.iter().any(|a| d.tokens.contains(*a));
    let tweets = docs.iter().filter(|d| d.source == SourceKind::Microblog && hit(d)).count() as u64;
    let mut posts: BTreeMap<String, u64> = forums.iter().map(|f| (f.to_string(), 0)).collect();
    let mut shops = BTreeSet::new();
    let mut first: Option<(SourceKind, DateTime<Utc>)> = None;
    for d in docs.iter().filter(|d| hit(d)) {
        if let Some(f) = &d.forum {
            *posts.entry(f.clone()).or_default() += 1;
        }
        if let Some(s) = d.shop {
            shops.insert(s);
        }
        let rank = |s: &SourceKind| priority.iter().position(|p| p == s).unwrap_or(priority.len());
        first = match first {
            None => Some((d.source.clone(), d.timestamp)),
            Some((s, t)) if d.timestamp < t || (d.timestamp == t && rank(&d.source) < rank(&s)) => {
                Some((d.source.clone(), d.timestamp))
            }
            keep => keep,
        };
    }
    (tweets, posts, shops, first)
}

/// Host names of absolute http(s) links, lowercased, without "www.".
pub fn link_domains(text: &str) -> BTreeSet<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"(?i)\bhttps?://([A-Za-z0-9.-]+)").expect("valid regex"));
    re.captures_iter(text)
        .map(|c| c[1].trim_end_matches('.').to_lowercase())
        .map(|h| h.strip_prefix("www.").map(str::to_string).unwrap_or(h))
        .filter(|h| h.contains('.'))
        .collect()
}

/// Link domains per group: each forum id, "tweets", and "shops".
pub fn link_groups(corpus: &Corpus, shop_domains: &[&str]) -> BTreeMap<String, BTreeSet<String>> {
    let mut groups: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for f in &corpus.forums {
        groups.insert(f.id.clone(), BTreeSet::new());
    }
    for p in &corpus.posts {
        let thread = corpus.threads.iter().find(|t| t.id == p.thread_id).expect("post has a thread");
        groups.get_mut(&thread.forum_id).expect("forum group").extend(link_domains(&p.text));
    }
    let tweets = corpus.tweets.iter().flat_map(|t| link_domains(&t.text)).collect();
    groups.insert("tweets".into(), tweets);
    groups.insert("shops".into(), shop_domains.iter().map(|d| d.to_lowercase()).collect());
    groups
}
