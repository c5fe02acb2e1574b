//! Analyses over an indexed corpus: normalised trends, per-section horizon
//! series, neologisms, first-seen attribution, substance summaries, section
//! treemaps, user geography, activity histograms and link overlap.
//!
//! Every function is pure over an immutable [`TermIndex`] or [`Corpus`].
//!
//! ```
//! use npswatch_analytics::trend;
//! use npswatch_corpus::{CorpusBuilder, Granularity, SourceKind, Tweet};
//! use npswatch_textindex::{Scope, TermIndex};
//! use chrono::{TimeZone, Utc};
//!
//! let mut b = CorpusBuilder::new();
//! b.add_tweet(Tweet {
//!     id: "1".into(),
//!     created_at: Utc.with_ymd_and_hms(2015, 3, 1, 12, 0, 0).unwrap(),
//!     author_handle: "@a".into(),
//!     text: "MDAI in stock".into(),
//!     matched_keywords: ["mdai".to_string()].into(),
//! });
//! let index = TermIndex::build(&b.finish());
//! let series = trend(&index, "mdai", &Scope::source(SourceKind::Microblog), Granularity::Month).unwrap();
//! assert_eq!(series.points.len(), 1);
//! assert_eq!(series.points[0].normalized, 1.0);
//! ```
//!
//! [`TermIndex`]: npswatch_textindex::TermIndex
//! [`Corpus`]: npswatch_corpus::Corpus

mod error;
mod forum;
mod links;
mod terms;
mod trend;

pub use error::AnalyticsError;
pub use forum::{
    activity_histogram, default_gazetteer, geo_distribution, treemap, ActivityHistogram, ActivityMetric, Gazetteer,
    GeoDistribution, TreemapNode, UNKNOWN_COUNTRY,
};
pub use links::{link_overlap, LinkOverlapReport, LinkPair, SHOPS_GROUP, TWEETS_GROUP};
pub use terms::{
    default_source_priority, first_seen, neologisms, substance_summary, FirstSeen, Neologism, SubstanceSummaryRow,
    DEFAULT_MIN_COUNT,
};
pub use trend::{horizon, trend, HorizonRow, HorizonSet, TrendPoint, TrendSeries};
