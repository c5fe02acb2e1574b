use std::collections::{BTreeMap, HashMap, HashSet};

use chrono::{DateTime, Utc};
use npswatch_corpus::{bucket_of, midnight, tokenize, Corpus, Forum, Granularity, SourceKind, TimeBucket};
use serde::{Deserialize, Serialize};

use crate::{IndexError, WordList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocKind {
    Post,
    Tweet,
    Listing,
}

/// Where and when a document was written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocMeta {
    pub id: String,
    pub kind: DocKind,
    pub source: SourceKind,
    pub forum: Option<String>,
    pub section: Option<String>,
    pub shop_id: Option<u32>,
    pub timestamp: DateTime<Utc>,
}

/// One term occurrence record, as exposed to callers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc_id: String,
    pub source: SourceKind,
    pub section_id: Option<String>,
    pub bucket: TimeBucket,
    pub timestamp: DateTime<Utc>,
    /// Times the term occurs in the document.
    pub occurrences: u32,
}

/// Documents in one (source, section, bucket) cell. Every document is
/// counted, including ones with no tokens at all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketTotal {
    pub source: SourceKind,
    pub section: Option<String>,
    pub bucket: TimeBucket,
    pub docs: u64,
}

/// A query restriction: one source, optionally narrowed to a section and
/// everything below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scope {
    pub source: SourceKind,
    pub section: Option<String>,
}

impl Scope {
    pub fn source(source: SourceKind) -> Self {
        Scope { source, section: None }
    }

    pub fn section(source: SourceKind, section: impl Into<String>) -> Self {
        Scope { source, section: Some(section.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TermEntry {
    term: String,
    /// (document index, occurrences), ascending by document.
    postings: Vec<(u32, u32)>,
    /// Earliest document timestamp per source, ordered by source.
    first_seen: Vec<(SourceKind, DateTime<Utc>)>,
}

/// Per-source view of a vocabulary term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermStat<'a> {
    pub term: &'a str,
    pub first_seen: DateTime<Utc>,
    /// Distinct documents of the source containing the term.
    pub documents: u64,
}

/// Immutable inverted index. Build with [`TermIndex::build`]; persist with
/// [`crate::write_artifact`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "IndexBody")]
pub struct TermIndex {
    forums: Vec<Forum>,
    /// Sorted by (timestamp, id).
    docs: Vec<DocMeta>,
    /// Sorted by term.
    terms: Vec<TermEntry>,
    totals: Vec<BucketTotal>,
    #[serde(skip)]
    lookup: HashMap<String, u32>,
    /// Document index → ascending term ids.
    #[serde(skip)]
    forward: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct IndexBody {
    forums: Vec<Forum>,
    docs: Vec<DocMeta>,
    terms: Vec<TermEntry>,
    totals: Vec<BucketTotal>,
}

impl From<IndexBody> for TermIndex {
    fn from(b: IndexBody) -> Self {
        TermIndex::assemble(b.forums, b.docs, b.terms, b.totals)
    }
}

impl PartialEq for TermIndex {
    fn eq(&self, other: &Self) -> bool {
        self.forums == other.forums
            && self.docs == other.docs
            && self.terms == other.terms
            && self.totals == other.totals
    }
}

struct Resolved<'a> {
    source: &'a SourceKind,
    sections: Option<HashSet<&'a str>>,
}

impl Resolved<'_> {
    fn includes(&self, doc: &DocMeta) -> bool {
        doc.source == *self.source
            && match &self.sections {
                None => true,
                Some(set) => doc.section.as_deref().is_some_and(|s| set.contains(s)),
            }
    }

    fn includes_total(&self, t: &BucketTotal) -> bool {
        t.source == *self.source
            && match &self.sections {
                None => true,
                Some(set) => t.section.as_deref().is_some_and(|s| set.contains(s)),
            }
    }
}

impl TermIndex {
    /// Indexes every post, tweet and shop listing of `corpus`.
    pub fn build(corpus: &Corpus) -> TermIndex {
        let forums_by_id: HashMap<&str, &Forum> = corpus.forums.iter().map(|f| (f.id.as_str(), f)).collect();
        let threads = corpus.threads_by_id();
        let mut raw: Vec<(DocMeta, &str)> = Vec::new();
        for p in &corpus.posts {
            let thread = threads.get(p.thread_id.as_str());
            let forum = thread.and_then(|t| forums_by_id.get(t.forum_id.as_str()));
            let source = forum.map(|f| f.source.clone()).unwrap_or_else(|| SourceKind::Other("forum-unknown".into()));
            raw.push((
                DocMeta {
                    id: p.id.clone(),
                    kind: DocKind::Post,
                    source,
                    forum: thread.map(|t| t.forum_id.clone()),
                    section: thread.map(|t| t.section_id.clone()),
                    shop_id: None,
                    timestamp: p.created_at,
                },
                p.text.as_str(),
            ));
        }
        for t in &corpus.tweets {
            raw.push((
                DocMeta {
                    id: t.id.clone(),
                    kind: DocKind::Tweet,
                    source: SourceKind::Microblog,
                    forum: None,
                    section: None,
                    shop_id: None,
                    timestamp: t.created_at,
                },
                t.text.as_str(),
            ));
        }
        for s in &corpus.snapshots {
            for (i, l) in s.listings.iter().enumerate() {
                raw.push((
                    DocMeta {
                        id: listing_doc_id(s.shop_id, s.captured_at, i),
                        kind: DocKind::Listing,
                        source: SourceKind::Shop,
                        forum: None,
                        section: None,
                        shop_id: Some(s.shop_id),
                        timestamp: midnight(s.captured_at),
                    },
                    l.name.as_str(),
                ));
            }
        }
        raw.sort_by(|a, b| (a.0.timestamp, &a.0.id).cmp(&(b.0.timestamp, &b.0.id)));

        let mut by_term: BTreeMap<String, Vec<(u32, u32)>> = BTreeMap::new();
        let mut totals: BTreeMap<(SourceKind, Option<String>, TimeBucket), u64> = BTreeMap::new();
        for (i, (meta, text)) in raw.iter().enumerate() {
            let mut counts: BTreeMap<String, u32> = BTreeMap::new();
            for tok in tokenize(text) {
                *counts.entry(tok).or_default() += 1;
            }
            for (term, n) in counts {
                by_term.entry(term).or_default().push((i as u32, n));
            }
            for g in Granularity::ALL {
                let key = (meta.source.clone(), meta.section.clone(), bucket_of(meta.timestamp, g));
                *totals.entry(key).or_default() += 1;
            }
        }
        let docs: Vec<DocMeta> = raw.into_iter().map(|(m, _)| m).collect();
        let terms = by_term
            .into_iter()
            .map(|(term, postings)| {
                let mut first: BTreeMap<SourceKind, DateTime<Utc>> = BTreeMap::new();
                for &(d, _) in &postings {
                    let doc = &docs[d as usize];
                    first.entry(doc.source.clone()).or_insert(doc.timestamp);
                }
                TermEntry { term, postings, first_seen: first.into_iter().collect() }
            })
            .collect();
        let totals = totals
            .into_iter()
            .map(|((source, section, bucket), docs)| BucketTotal { source, section, bucket, docs })
            .collect();
        TermIndex::assemble(corpus.forums.clone(), docs, terms, totals)
    }

    fn assemble(forums: Vec<Forum>, docs: Vec<DocMeta>, terms: Vec<TermEntry>, totals: Vec<BucketTotal>) -> Self {
        let lookup = terms.iter().enumerate().map(|(i, t)| (t.term.clone(), i as u32)).collect();
        let mut forward = vec![Vec::new(); docs.len()];
        for (tid, t) in terms.iter().enumerate() {
            for &(d, _) in &t.postings {
                forward[d as usize].push(tid as u32);
            }
        }
        TermIndex { forums, docs, terms, totals, lookup, forward }
    }

    pub fn forums(&self) -> &[Forum] {
        &self.forums
    }

    pub fn forum(&self, id: &str) -> Result<&Forum, IndexError> {
        self.forums.iter().find(|f| f.id == id).ok_or_else(|| IndexError::UnknownForum(id.to_string()))
    }

    pub fn docs(&self) -> &[DocMeta] {
        &self.docs
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn vocabulary_size(&self) -> usize {
        self.terms.len()
    }

    /// Vocabulary in sorted order.
    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.term.as_str())
    }

    pub fn totals(&self) -> &[BucketTotal] {
        &self.totals
    }

    /// Sources with at least one document, with their document counts.
    pub fn sources(&self) -> BTreeMap<SourceKind, u64> {
        let mut out = BTreeMap::new();
        for d in &self.docs {
            *out.entry(d.source.clone()).or_default() += 1;
        }
        out
    }

    /// Earliest and latest document timestamps of `source`.
    pub fn source_span(&self, source: &SourceKind) -> Option<(DateTime<Utc>, DateTime<Utc>)> {
        let mut it = self.docs.iter().filter(|d| d.source == *source);
        let first = it.next()?.timestamp;
        let last = it.next_back().map(|d| d.timestamp).unwrap_or(first);
        Some((first, last))
    }

    fn entry(&self, term: &str) -> Option<&TermEntry> {
        self.lookup.get(term).map(|&i| &self.terms[i as usize])
    }

    fn resolve<'a>(&'a self, scope: &'a Scope) -> Result<Resolved<'a>, IndexError> {
        let sections = match &scope.section {
            None => None,
            Some(section) => {
                let forum = self
                    .forums
                    .iter()
                    .filter(|f| f.source == scope.source)
                    .find(|f| f.section(section).is_some())
                    .ok_or_else(|| IndexError::UnknownSection {
                        source_tag: scope.source.to_string(),
                        section: section.clone(),
                    })?;
                Some(forum.descendants(section).into_iter().map(|s| s.id.as_str()).collect())
            }
        };
        let known = self.forums.iter().any(|f| f.source == scope.source)
            || self.docs.iter().any(|d| d.source == scope.source);
        if !known {
            return Err(IndexError::UnknownSource(scope.source.to_string()));
        }
        Ok(Resolved { source: &scope.source, sections })
    }

    /// Validates a scope without running a query.
    pub fn check_scope(&self, scope: &Scope) -> Result<(), IndexError> {
        self.resolve(scope).map(|_| ())
    }

    /// All postings of `term`, in document order.
    pub fn postings(&self, term: &str) -> Vec<Posting> {
        let Some(e) = self.entry(term) else { return Vec::new() };
        e.postings
            .iter()
            .map(|&(d, n)| {
                let doc = &self.docs[d as usize];
                Posting {
                    doc_id: doc.id.clone(),
                    source: doc.source.clone(),
                    section_id: doc.section.clone(),
                    bucket: bucket_of(doc.timestamp, Granularity::Month),
                    timestamp: doc.timestamp,
                    occurrences: n,
                }
            })
            .collect()
    }

    /// (documents containing `term`, all documents) in `scope` during `bucket`.
    pub fn term_count(&self, term: &str, scope: &Scope, bucket: TimeBucket) -> Result<(u64, u64), IndexError> {
        let r = self.resolve(scope)?;
        let with = self.entry(term).map_or(0, |e| {
            e.postings
                .iter()
                .filter(|&&(d, _)| {
                    let doc = &self.docs[d as usize];
                    r.includes(doc) && bucket.contains(doc.timestamp)
                })
                .count() as u64
        });
        let total = self
            .totals
            .iter()
            .filter(|t| t.bucket == bucket && r.includes_total(t))
            .map(|t| t.docs)
            .sum();
        Ok((with, total))
    }

    /// Raw number of times `term` occurs in `scope` during `bucket`.
    pub fn occurrence_count(&self, term: &str, scope: &Scope, bucket: TimeBucket) -> Result<u64, IndexError> {
        let r = self.resolve(scope)?;
        Ok(self.entry(term).map_or(0, |e| {
            e.postings
                .iter()
                .filter(|&&(d, _)| {
                    let doc = &self.docs[d as usize];
                    r.includes(doc) && bucket.contains(doc.timestamp)
                })
                .map(|&(_, n)| n as u64)
                .sum()
        }))
    }

    /// Documents containing `term` per bucket, for buckets where it occurs.
    pub fn term_series(&self, term: &str, scope: &Scope, g: Granularity) -> Result<BTreeMap<TimeBucket, u64>, IndexError> {
        let r = self.resolve(scope)?;
        let mut out = BTreeMap::new();
        if let Some(e) = self.entry(term) {
            for &(d, _) in &e.postings {
                let doc = &self.docs[d as usize];
                if r.includes(doc) {
                    *out.entry(bucket_of(doc.timestamp, g)).or_default() += 1;
                }
            }
        }
        Ok(out)
    }

    /// All documents per bucket, for buckets that have any.
    pub fn total_series(&self, scope: &Scope, g: Granularity) -> Result<BTreeMap<TimeBucket, u64>, IndexError> {
        let r = self.resolve(scope)?;
        let mut out = BTreeMap::new();
        for t in self.totals.iter().filter(|t| t.bucket.granularity == g && r.includes_total(t)) {
            *out.entry(t.bucket).or_default() += t.docs;
        }
        Ok(out)
    }

    /// Terms co-occurring with `term` in `scope`, weighted by the number of
    /// documents containing both. `term` itself and `stopwords` are
    /// excluded; ties are broken alphabetically.
    pub fn cooccurrence(
        &self,
        term: &str,
        scope: &Scope,
        top_n: usize,
        stopwords: &WordList,
    ) -> Result<Vec<(String, u64)>, IndexError> {
        let r = self.resolve(scope)?;
        let Some(&tid) = self.lookup.get(term) else { return Ok(Vec::new()) };
        let mut weights: HashMap<u32, u64> = HashMap::new();
        for &(d, _) in &self.terms[tid as usize].postings {
            if !r.includes(&self.docs[d as usize]) {
                continue;
            }
            for &other in &self.forward[d as usize] {
                if other != tid {
                    *weights.entry(other).or_default() += 1;
                }
            }
        }
        let mut out: Vec<(String, u64)> = weights
            .into_iter()
            .map(|(t, w)| (self.terms[t as usize].term.as_str(), w))
            .filter(|(t, _)| !stopwords.contains(t))
            .map(|(t, w)| (t.to_string(), w))
            .collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out.truncate(top_n);
        Ok(out)
    }

    /// Timestamp of the earliest document of `source` containing `term`.
    pub fn first_occurrence(&self, term: &str, source: &SourceKind) -> Option<DateTime<Utc>> {
        self.entry(term)?.first_seen.iter().find(|(s, _)| s == source).map(|&(_, ts)| ts)
    }

    /// Documents containing at least one of `terms`, in document order.
    pub fn docs_with_any(&self, terms: &[&str]) -> Vec<&DocMeta> {
        let mut ids: Vec<u32> = terms
            .iter()
            .filter_map(|t| self.entry(t))
            .flat_map(|e| e.postings.iter().map(|&(d, _)| d))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().map(|d| &self.docs[d as usize]).collect()
    }

    /// Every term occurring in `source`, with its first appearance there and
    /// its document frequency within the source.
    pub fn term_stats<'a>(&'a self, source: &'a SourceKind) -> impl Iterator<Item = TermStat<'a>> + 'a {
        self.terms.iter().filter_map(move |e| {
            let first_seen = e.first_seen.iter().find(|(s, _)| s == source)?.1;
            let documents =
                e.postings.iter().filter(|&&(d, _)| self.docs[d as usize].source == *source).count() as u64;
            Some(TermStat { term: &e.term, first_seen, documents })
        })
    }
}

/// Document id given to the `index`-th listing of a shop snapshot.
pub fn listing_doc_id(shop_id: u32, captured_at: chrono::NaiveDate, index: usize) -> String {
    format!("shop-{shop_id}/{captured_at}/{index}")
}
