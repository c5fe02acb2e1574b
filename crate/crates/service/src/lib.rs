//! Operable system around the npswatch libraries: an on-disk [`Store`],
//! batch operations for ingestion, indexing and shop snapshots, and a
//! read-only JSON API.
//!
//! ```no_run
//! use npswatch_service::{build_index, ingest, AppState, Store};
//!
//! let store = Store::open("/var/lib/npswatch")?;
//! ingest(&store, "bluelight-like", "dumps/bluelight".as_ref(), chrono::Utc::now())?;
//! build_index(&store)?;
//! let app = npswatch_service::router(AppState::from_store(store)?);
//! # let _ = app;
//! # Ok::<(), npswatch_service::ServiceError>(())
//! ```

mod api;
mod config;
mod error;
mod ops;
pub mod query;
mod store;

pub use api::{router, serve, ApiError, ApiQuery, AppState, ErrorBody, ErrorDetail};
pub use config::{Config, ForumConfig};
pub use error::ServiceError;
pub use ops::{
    build_index, find_adapter, ingest, keywords, lexicon, snapshot_shops, IndexReport, IngestReport, PageDir,
    ShopFailure, SnapshotReport, STREAM_ADAPTER,
};
pub use query::Generation;
pub use store::{Store, STORE_ENV};
