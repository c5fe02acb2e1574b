use thiserror::Error;

/// Violations of the corpus invariants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("substance {substance:?}: alias {alias:?} is not a single token")]
    InvalidAlias { substance: String, alias: String },
    #[error("substance {substance:?}: alias {alias:?} repeats after case folding")]
    DuplicateAlias { substance: String, alias: String },
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: &'static str, id: String },
    #[error("forum {forum:?}: {problem}")]
    InvalidTree { forum: String, problem: String },
    #[error("{kind} {id:?} refers to missing {target} {target_id:?}")]
    DanglingReference { kind: &'static str, id: String, target: &'static str, target_id: String },
    #[error("post {id:?} is dated before the first post of its forum or in the future")]
    PostOutOfRange { id: String },
    #[error("user {id:?} records {recorded} posts but authored {actual}")]
    PostCountMismatch { id: String, recorded: u64, actual: u64 },
    #[error("tweet {id:?} has no matched keywords")]
    UnmatchedTweet { id: String },
    #[error("shop {shop_id}: snapshot dates must be strictly increasing ({date} after {previous})")]
    SnapshotOrder { shop_id: u32, date: chrono::NaiveDate, previous: chrono::NaiveDate },
    #[error("shop {shop_id}: listing {name:?} has a negative price")]
    NegativePrice { shop_id: u32, name: String },
    #[error("shop {shop_id}: listing name is empty")]
    EmptyListingName { shop_id: u32 },
}
