use std::path::PathBuf;

use chrono::NaiveDate;
use npswatch_analytics::AnalyticsError;
use npswatch_corpus::ModelError;
use npswatch_heavytail::FitError;
use npswatch_ingest::IngestError;
use npswatch_textindex::ArtifactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown adapter {0:?}")]
    UnknownAdapter(String),
    #[error("store has no documents to index")]
    EmptyStore,
    #[error("no index artifact at {0}; run `npswatch index` first")]
    MissingIndex(PathBuf),
    #[error("shop {shop_id} already has a snapshot for {captured_at}")]
    DuplicateSnapshot { shop_id: u32, captured_at: NaiveDate },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Sqlite(#[from] rusqlite::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Artifact(#[from] ArtifactError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|source| ServiceError::File { path: path.to_path_buf(), source })
}
