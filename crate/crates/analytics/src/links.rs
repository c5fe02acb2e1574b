//! Overlap between the link domains of forums, tweets and shops.

use std::collections::{BTreeMap, BTreeSet};

use npswatch_corpus::Corpus;
use npswatch_ingest::extract_links;
use serde::{Deserialize, Serialize};

/// Group name for the domains linked from tweets.
pub const TWEETS_GROUP: &str = "tweets";
/// Group name for the configured shop domains.
pub const SHOPS_GROUP: &str = "shops";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkPair {
    pub a: String,
    pub b: String,
    pub domains_a: u64,
    pub domains_b: u64,
    pub intersection: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkOverlapReport {
    /// Group name → distinct linked domains. Groups are each forum id,
    /// `tweets` and `shops`.
    pub groups: BTreeMap<String, BTreeSet<String>>,
    /// Every unordered pair of groups, `a < b`.
    pub pairs: Vec<LinkPair>,
}

impl LinkOverlapReport {
    pub fn pair(&self, a: &str, b: &str) -> Option<&LinkPair> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.pairs.iter().find(|p| p.a == a && p.b == b)
    }
}

fn normalize_domain(d: &str) -> String {
    let d = d.trim().trim_end_matches('.').to_lowercase();
    d.strip_prefix("www.").map(str::to_string).unwrap_or(d)
}

/// Domains linked from each forum's posts and from tweets, compared with the
/// shop domains and with each other.
pub fn link_overlap<S: AsRef<str>>(corpus: &Corpus, shop_domains: &[S]) -> LinkOverlapReport {
    let mut groups: BTreeMap<String, BTreeSet<String>> =
        corpus.forums.iter().map(|f| (f.id.clone(), BTreeSet::new())).collect();
    let threads = corpus.threads_by_id();
    for p in &corpus.posts {
        if let Some(t) = threads.get(p.thread_id.as_str()) {
            groups.entry(t.forum_id.clone()).or_default().extend(extract_links(&p.text).into_iter().map(|l| l.domain));
        }
    }
    groups.insert(
        TWEETS_GROUP.into(),
        corpus.tweets.iter().flat_map(|t| extract_links(&t.text)).map(|l| l.domain).collect(),
    );
    groups.insert(SHOPS_GROUP.into(), shop_domains.iter().map(|d| normalize_domain(d.as_ref())).collect());
    let names: Vec<&String> = groups.keys().collect();
    let mut pairs = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            let (da, db) = (&groups[*a], &groups[*b]);
            pairs.push(LinkPair {
                a: a.to_string(),
                b: b.to_string(),
                domains_a: da.len() as u64,
                domains_b: db.len() as u64,
                intersection: da.intersection(db).cloned().collect(),
            });
        }
    }
    LinkOverlapReport { groups, pairs }
}
