use npswatch_textindex::IndexError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("unknown forum {0:?}")]
    UnknownForum(String),
    #[error("depth {depth} is outside 1..={max} for forum {forum:?}")]
    InvalidDepth { forum: String, depth: u32, max: u32 },
    #[error("substance {0:?} occurs in no source")]
    NeverSeen(String),
    #[error("gazetteer line {line}: {problem}")]
    InvalidGazetteer { line: usize, problem: String },
}
