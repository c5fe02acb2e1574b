//! The unified record model for the three source families: forums (with
//! section trees, threads, posts and user profiles), online shops (dated
//! showcase snapshots) and keyword-filtered microblog streams, plus the
//! substance lexicon and calendar buckets shared by every analysis.
//!
//! All timestamps are UTC. Every value is immutable once a [`Corpus`] has
//! been assembled and validated.

mod corpus;
mod error;
mod records;
mod source;
mod substance;
mod time;
pub mod token;

pub use corpus::{Added, Corpus, CorpusBuilder};
pub use error::ModelError;
pub use records::{Forum, Post, SectionNode, ShopListing, ShopSnapshot, Thread, Tweet, UserProfile};
pub use source::{InvalidSourceTag, SourceKind};
pub use substance::{alias_matches, parse_lexicon, SubstanceEntry};
pub use time::{bucket_of, midnight, Granularity, InvalidGranularity, TimeBucket};
pub use token::tokenize;
