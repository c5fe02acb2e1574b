//! Vocabulary analyses: neologisms, first-seen attribution and substance
//! summaries.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, NaiveDate, Utc};
use npswatch_corpus::{midnight, SourceKind, SubstanceEntry};
use npswatch_textindex::{DocKind, TermIndex, WordList};
use serde::{Deserialize, Serialize};

use crate::AnalyticsError;

/// Default minimum document count for a neologism.
pub const DEFAULT_MIN_COUNT: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neologism {
    pub term: String,
    /// Documents of the source containing the term.
    pub total_count: u64,
    pub first_seen_at: DateTime<Utc>,
}

/// Terms of `source` whose first occurrence there is strictly after midnight
/// UTC at the start of `cutoff`, that occur in at least `min_count`
/// documents, and that are neither stopwords nor in `background`. Sorted by
/// count, most frequent first, then alphabetically.
pub fn neologisms(
    index: &TermIndex,
    source: &SourceKind,
    cutoff: NaiveDate,
    min_count: u64,
    top_n: usize,
    stopwords: &WordList,
    background: &WordList,
) -> Vec<Neologism> {
    let cutoff = midnight(cutoff);
    let mut out: Vec<Neologism> = index
        .term_stats(source)
        .filter(|s| s.first_seen > cutoff && s.documents >= min_count)
        .filter(|s| !stopwords.contains(s.term) && !background.contains(s.term))
        .map(|s| Neologism { term: s.term.to_string(), total_count: s.documents, first_seen_at: s.first_seen })
        .collect();
    out.sort_by(|a, b| b.total_count.cmp(&a.total_count).then_with(|| a.term.cmp(&b.term)));
    out.truncate(top_n);
    out
}

/// Default tie-break order for first-seen attribution.
pub fn default_source_priority() -> Vec<SourceKind> {
    vec![SourceKind::ForumBluelightLike, SourceKind::ForumDrugsforumLike, SourceKind::Microblog, SourceKind::Shop]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstSeen {
    pub source: SourceKind,
    pub at: DateTime<Utc>,
}

/// The source holding the earliest occurrence of any alias of `entry`.
/// Simultaneous occurrences go to the source listed first in `priority`;
/// sources not listed come after, ordered by tag.
pub fn first_seen(index: &TermIndex, entry: &SubstanceEntry, priority: &[SourceKind]) -> Result<FirstSeen, AnalyticsError> {
    let rank = |s: &SourceKind| priority.iter().position(|p| p == s).unwrap_or(priority.len());
    let sources: BTreeSet<SourceKind> = index.docs().iter().map(|d| d.source.clone()).collect();
    entry
        .aliases()
        .iter()
        .flat_map(|alias| sources.iter().filter_map(move |s| index.first_occurrence(alias, s).map(|at| (at, s))))
        .min_by(|a, b| (a.0, rank(a.1), a.1).cmp(&(b.0, rank(b.1), b.1)))
        .map(|(at, s)| FirstSeen { source: s.clone(), at })
        .ok_or_else(|| AnalyticsError::NeverSeen(entry.canonical_name().to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstanceSummaryRow {
    pub substance: String,
    /// Tweets mentioning any alias.
    pub tweet_count: u64,
    /// Posts mentioning any alias, for every forum (zero included).
    pub post_counts: BTreeMap<String, u64>,
    /// Shops with a listing whose name mentions an alias.
    pub shop_ids: BTreeSet<u32>,
    /// `None` when the substance occurs nowhere.
    pub first_seen: Option<FirstSeen>,
}

/// One row per lexicon entry, in lexicon order. Alias matching uses the
/// index tokens, so listing names and post text match the same way.
pub fn substance_summary(index: &TermIndex, lexicon: &[SubstanceEntry], priority: &[SourceKind]) -> Vec<SubstanceSummaryRow> {
    lexicon
        .iter()
        .map(|entry| {
            let aliases: Vec<&str> = entry.aliases().iter().map(String::as_str).collect();
            let docs = index.docs_with_any(&aliases);
            let mut post_counts: BTreeMap<String, u64> = index.forums().iter().map(|f| (f.id.clone(), 0)).collect();
            let mut tweet_count = 0;
            let mut shop_ids = BTreeSet::new();
            for d in docs {
                match d.kind {
                    DocKind::Post => *post_counts.entry(d.forum.clone().unwrap_or_default()).or_default() += 1,
                    DocKind::Tweet => tweet_count += 1,
                    DocKind::Listing => shop_ids.extend(d.shop_id),
                }
            }
            SubstanceSummaryRow {
                substance: entry.canonical_name().to_string(),
                tweet_count,
                post_counts,
                shop_ids,
                first_seen: first_seen(index, entry, priority).ok(),
            }
        })
        .collect()
}
