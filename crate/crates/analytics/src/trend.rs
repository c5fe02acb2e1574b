//! Normalised term frequency over time.

use npswatch_corpus::{bucket_of, Granularity, TimeBucket};
use npswatch_textindex::{Scope, TermIndex};
use serde::{Deserialize, Serialize};

use crate::AnalyticsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub bucket: TimeBucket,
    pub docs_with_term: u64,
    pub docs_total: u64,
    /// `docs_with_term / max(docs_total, 1)`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub term: String,
    pub scope: Scope,
    pub granularity: Granularity,
    pub points: Vec<TrendPoint>,
}

impl TrendSeries {
    /// The point with the highest normalised frequency; the earliest wins ties.
    pub fn peak(&self) -> Option<&TrendPoint> {
        self.points.iter().fold(None, |best: Option<&TrendPoint>, p| match best {
            Some(b) if b.normalized >= p.normalized => Some(b),
            _ => Some(p),
        })
    }
}

/// Documents in `scope` containing `term`, per bucket, relative to all
/// documents in the scope. Buckets run without gaps from the first to the
/// last document of the scope's source, so series for sections of one
/// source line up; empty buckets report zeros.
pub fn trend(index: &TermIndex, term: &str, scope: &Scope, granularity: Granularity) -> Result<TrendSeries, AnalyticsError> {
    let with = index.term_series(term, scope, granularity)?;
    let totals = index.total_series(scope, granularity)?;
    let points = match index.source_span(&scope.source) {
        None => Vec::new(),
        Some((first, last)) => TimeBucket::range(bucket_of(first, granularity), bucket_of(last, granularity))
            .into_iter()
            .map(|bucket| {
                let docs_with_term = with.get(&bucket).copied().unwrap_or(0);
                let docs_total = totals.get(&bucket).copied().unwrap_or(0);
                TrendPoint { bucket, docs_with_term, docs_total, normalized: docs_with_term as f64 / docs_total.max(1) as f64 }
            })
            .collect(),
    };
    Ok(TrendSeries { term: term.to_string(), scope: scope.clone(), granularity, points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonRow {
    pub section_id: String,
    pub section_name: String,
    pub series: TrendSeries,
}

/// One trend series per section at a given depth of a forum's tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonSet {
    pub term: String,
    pub forum: String,
    pub depth: u32,
    pub rows: Vec<HorizonRow>,
}

/// Trend of `term` in every depth-`depth` section of `forum`, each section
/// including its descendants, in tree order.
pub fn horizon(
    index: &TermIndex,
    term: &str,
    forum: &str,
    depth: u32,
    granularity: Granularity,
) -> Result<HorizonSet, AnalyticsError> {
    let f = index.forum(forum).map_err(|_| AnalyticsError::UnknownForum(forum.to_string()))?;
    let max = f.max_depth();
    if depth < 1 || depth > max {
        return Err(AnalyticsError::InvalidDepth { forum: forum.to_string(), depth, max });
    }
    let rows = f
        .sections_at_depth(depth)
        .into_iter()
        .map(|s| {
            let scope = Scope::section(f.source.clone(), s.id.clone());
            Ok(HorizonRow {
                section_id: s.id.clone(),
                section_name: s.name.clone(),
                series: trend(index, term, &scope, granularity)?,
            })
        })
        .collect::<Result<_, AnalyticsError>>()?;
    Ok(HorizonSet { term: term.to_string(), forum: forum.to_string(), depth, rows })
}
