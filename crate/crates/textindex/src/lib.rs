//! Tokenisation and an immutable inverted index keyed by term, source,
//! section and calendar bucket.
//!
//! All term statistics count distinct documents, not occurrences; raw
//! occurrence counts are available separately through
//! [`TermIndex::occurrence_count`]. A scope narrowed to a section includes
//! every section below it.
//!
//! ```
//! use chrono::{TimeZone, Utc};
//! use npswatch_corpus::*;
//! use npswatch_textindex::{Scope, TermIndex};
//!
//! let mut b = CorpusBuilder::new();
//! b.add_tweet(Tweet {
//!     id: "t1".into(),
//!     created_at: Utc.with_ymd_and_hms(2015, 2, 1, 9, 0, 0).unwrap(),
//!     author_handle: "@a".into(),
//!     text: "MDAI in stock".into(),
//!     matched_keywords: ["mdai".to_string()].into(),
//! });
//! let index = TermIndex::build(&b.finish());
//! let feb = bucket_of(Utc.with_ymd_and_hms(2015, 2, 10, 0, 0, 0).unwrap(), Granularity::Month);
//! let scope = Scope::source(SourceKind::Microblog);
//! assert_eq!(index.term_count("mdai", &scope, feb).unwrap(), (1, 1));
//! ```

mod artifact;
mod error;
mod index;
mod words;

pub use artifact::{read_artifact, write_artifact, ENGINE_VERSION, FORMAT_VERSION, MAGIC};
pub use error::{ArtifactError, IndexError};
pub use index::{listing_doc_id, BucketTotal, DocKind, DocMeta, Posting, Scope, TermIndex, TermStat};
pub use npswatch_corpus::token::{is_token, tokenize};
pub use words::{background_dictionary, common_words, stopwords, WordList};
