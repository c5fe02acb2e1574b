//! Query parameters and the computations behind each endpoint. The HTTP
//! handlers and the `analyze` command both call these functions, so their
//! outputs are identical.

use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use clap::Args;
use npswatch_analytics::{
    activity_histogram, default_gazetteer, geo_distribution, horizon, link_overlap, neologisms, substance_summary,
    treemap, trend, ActivityMetric, AnalyticsError, GeoDistribution, HorizonSet, LinkOverlapReport, Neologism,
    SubstanceSummaryRow, TreemapNode, TrendSeries, DEFAULT_MIN_COUNT,
};
use npswatch_corpus::{Corpus, Granularity, SourceKind, SubstanceEntry};
use npswatch_heavytail::{model_ordering, DistFitReport, Sample};
use npswatch_textindex::{background_dictionary, stopwords, IndexError, Scope, TermIndex};
use serde::{Deserialize, Serialize};

use crate::{ApiError, Config, ServiceError, Store};

/// Largest page any list endpoint returns.
pub const MAX_PAGE: usize = 1_000;
/// Page size when `top` is not given.
pub const DEFAULT_PAGE: usize = 100;

/// One immutable view of the store: the corpus, its index and the
/// configuration they were loaded with.
#[derive(Debug)]
pub struct Generation {
    pub corpus: Corpus,
    pub index: TermIndex,
    pub config: Config,
    pub lexicon: Vec<SubstanceEntry>,
    pub loaded_at: DateTime<Utc>,
}

impl Generation {
    /// Loads the corpus from the store's records and the index from its
    /// artifact.
    pub fn load(store: &Store) -> Result<Self, ServiceError> {
        Ok(Generation {
            corpus: store.corpus()?,
            index: store.read_index()?,
            config: store.config()?,
            lexicon: crate::ops::lexicon(store)?,
            loaded_at: Utc::now(),
        })
    }
}

/// A slice of a longer ranked list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page<T> {
    /// Length of the full list.
    pub total: usize,
    pub offset: usize,
    pub items: Vec<T>,
}

impl<T> Page<T> {
    fn of(all: Vec<T>, offset: Option<usize>, top: Option<usize>) -> Self {
        let total = all.len();
        let offset = offset.unwrap_or(0);
        let top = top.unwrap_or(DEFAULT_PAGE).min(MAX_PAGE);
        Page { total, offset, items: all.into_iter().skip(offset).take(top).collect() }
    }
}

fn parse<T: FromStr>(name: &str, value: &str) -> Result<T, ApiError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| ApiError::bad_request("invalid_parameter", format!("{name}: {e}")))
}

fn term(value: &str) -> Result<String, ApiError> {
    let t = value.trim().to_lowercase();
    if t.is_empty() {
        return Err(ApiError::bad_request("invalid_parameter", "term: must not be empty"));
    }
    Ok(t)
}

fn scope(source: &str, section: &Option<String>) -> Result<Scope, ApiError> {
    let source: SourceKind = parse("source", source)?;
    Ok(match section {
        Some(s) => Scope::section(source, s.clone()),
        None => Scope::source(source),
    })
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        let code = match &e {
            AnalyticsError::Index(IndexError::UnknownSection { .. }) => "unknown_section",
            AnalyticsError::Index(IndexError::UnknownSource(_)) => "unknown_source",
            AnalyticsError::Index(IndexError::UnknownForum(_)) | AnalyticsError::UnknownForum(_) => "unknown_forum",
            AnalyticsError::NeverSeen(_) => "never_seen",
            AnalyticsError::InvalidDepth { .. } => return ApiError::bad_request("invalid_depth", e.to_string()),
            AnalyticsError::InvalidGazetteer { .. } => return ApiError::internal(),
        };
        ApiError::not_found(code, e.to_string())
    }
}

impl From<IndexError> for ApiError {
    fn from(e: IndexError) -> Self {
        AnalyticsError::from(e).into()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSummary {
    pub source: SourceKind,
    pub documents: u64,
    pub first: DateTime<Utc>,
    pub last: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForumSummary {
    pub id: String,
    pub name: String,
    pub source: SourceKind,
    pub sections: u64,
    pub max_depth: u32,
    pub posts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourcesReport {
    pub sources: Vec<SourceSummary>,
    pub forums: Vec<ForumSummary>,
}

pub fn sources(g: &Generation) -> SourcesReport {
    let sources = g
        .index
        .sources()
        .into_iter()
        .filter_map(|(source, documents)| {
            let (first, last) = g.index.source_span(&source)?;
            Some(SourceSummary { source, documents, first, last })
        })
        .collect();
    let forums = g
        .index
        .forums()
        .iter()
        .map(|f| ForumSummary {
            id: f.id.clone(),
            name: f.name.clone(),
            source: f.source.clone(),
            sections: f.sections.len() as u64,
            max_depth: f.max_depth(),
            posts: g.corpus.forum_posts(&f.id).count() as u64,
        })
        .collect();
    SourcesReport { sources, forums }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ForumParams {
    #[arg(long)]
    pub forum: String,
}

pub fn forum_treemap(g: &Generation, forum: &str) -> Result<TreemapNode, ApiError> {
    Ok(treemap(&g.corpus, forum)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct TrendParams {
    #[arg(long)]
    pub term: String,
    /// Source tag, e.g. forum-df or microblog.
    #[arg(long)]
    pub source: String,
    /// Restrict to a forum section and its descendants.
    #[arg(long)]
    pub section: Option<String>,
    /// day, week or month.
    #[arg(long)]
    pub bucket: Option<String>,
}

fn bucket(value: &Option<String>) -> Result<Granularity, ApiError> {
    value.as_deref().map_or(Ok(Granularity::Month), |b| parse("bucket", b))
}

pub fn term_trend(g: &Generation, p: &TrendParams) -> Result<TrendSeries, ApiError> {
    Ok(trend(&g.index, &term(&p.term)?, &scope(&p.source, &p.section)?, bucket(&p.bucket)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct HorizonParams {
    #[arg(long)]
    pub term: String,
    #[arg(long)]
    pub forum: String,
    #[arg(long)]
    pub depth: u32,
    #[arg(long)]
    pub bucket: Option<String>,
}

pub fn term_horizon(g: &Generation, p: &HorizonParams) -> Result<HorizonSet, ApiError> {
    Ok(horizon(&g.index, &term(&p.term)?, &p.forum, p.depth, bucket(&p.bucket)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct CooccurParams {
    #[arg(long)]
    pub term: String,
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub section: Option<String>,
    #[arg(long)]
    pub top: Option<usize>,
    #[arg(long)]
    pub offset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cooccurrence {
    pub term: String,
    /// Documents containing both terms.
    pub weight: u64,
}

pub fn cooccur(g: &Generation, p: &CooccurParams) -> Result<Page<Cooccurrence>, ApiError> {
    let all = g.index.cooccurrence(&term(&p.term)?, &scope(&p.source, &p.section)?, usize::MAX, stopwords())?;
    let all = all.into_iter().map(|(term, weight)| Cooccurrence { term, weight }).collect();
    Ok(Page::of(all, p.offset, p.top))
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct NeologismParams {
    #[arg(long)]
    pub source: String,
    /// Only terms first seen after midnight UTC of this date (YYYY-MM-DD).
    #[arg(long)]
    pub after: NaiveDate,
    #[arg(long)]
    pub min_count: Option<u64>,
    #[arg(long)]
    pub top: Option<usize>,
    #[arg(long)]
    pub offset: Option<usize>,
}

pub fn term_neologisms(g: &Generation, p: &NeologismParams) -> Result<Page<Neologism>, ApiError> {
    let source: SourceKind = parse("source", &p.source)?;
    g.index.check_scope(&Scope::source(source.clone()))?;
    let min_count = p.min_count.unwrap_or(DEFAULT_MIN_COUNT);
    let all = neologisms(&g.index, &source, p.after, min_count, usize::MAX, stopwords(), background_dictionary());
    Ok(Page::of(all, p.offset, p.top))
}

pub fn geo(g: &Generation, p: &ForumParams) -> Result<GeoDistribution, ApiError> {
    Ok(geo_distribution(&g.corpus, &p.forum, default_gazetteer())?)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct DistfitParams {
    #[arg(long)]
    pub forum: String,
    /// posts_per_user or posts_per_thread.
    #[arg(long)]
    pub metric: String,
}

pub fn distfit(g: &Generation, p: &DistfitParams) -> Result<DistFitReport, ApiError> {
    let metric: ActivityMetric = parse("metric", &p.metric)?;
    let histogram = activity_histogram(&g.corpus, &p.forum, metric)?;
    let fit = Sample::new(histogram.values()).and_then(|s| model_ordering(&s));
    fit.map_err(|e| ApiError::bad_request("fit_failed", e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct PageParams {
    #[arg(long)]
    pub top: Option<usize>,
    #[arg(long)]
    pub offset: Option<usize>,
}

pub fn substances(g: &Generation, p: &PageParams) -> Page<SubstanceSummaryRow> {
    Page::of(substance_summary(&g.index, &g.lexicon, &g.config.source_priority), p.offset, p.top)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

pub fn links(g: &Generation) -> LinkOverlapReport {
    link_overlap(&g.corpus, &g.config.shop_domains())
}
