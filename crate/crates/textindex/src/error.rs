use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("unknown section {section:?} for source {source_tag}")]
    UnknownSection { source_tag: String, section: String },
    #[error("unknown forum {0:?}")]
    UnknownForum(String),
    #[error("source {0} has no documents")]
    UnknownSource(String),
}

/// Failure to read a persisted index.
#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("not an index artifact (bad magic header)")]
    BadMagic,
    #[error("index format version {found} is not supported (expected {expected})")]
    FormatVersion { found: String, expected: u32 },
    #[error("index was built by engine {found}; this is engine {expected}")]
    EngineMismatch { found: String, expected: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("corrupt index body: {0}")]
    Json(#[from] serde_json::Error),
}
