use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed page: {0}")]
    MalformedPage(String),
    #[error("page does not match adapter {adapter:?}: missing {landmark:?}")]
    AdapterMismatch { adapter: String, landmark: String },
    #[error("adapter {adapter:?} is not usable: {problem}")]
    InvalidAdapter { adapter: String, problem: String },
    #[error("invalid {kind} record {id:?}: {problem}")]
    InvalidRecord { kind: &'static str, id: String, problem: String },
    #[error("invalid keyword {0:?}: keywords must be single tokens")]
    InvalidKeyword(String),
    #[error("invalid shop config: {0}")]
    InvalidShopConfig(String),
    #[error("stream buffer full: dropped record {dropped_id:?} ({total_dropped} dropped so far)")]
    BackpressureOverflow { dropped_id: String, total_dropped: u64 },
    #[error("archive line {line}: {source}")]
    ArchiveLine { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

/// A failed fetch attempt.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("fetch of {url} failed: {reason}")]
pub struct FetchFailure {
    pub url: String,
    pub reason: String,
}

/// A URL given up on after every retry failed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("host unreachable for {url} after {attempts} attempts: {last_reason}")]
pub struct HostUnreachable {
    pub url: String,
    pub attempts: u32,
    pub last_reason: String,
}
