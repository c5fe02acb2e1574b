//! Read-only HTTP/JSON API.

use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::extract::{FromRequestParts, Path, Query, State};
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::catch_panic::CatchPanicLayer;

use crate::query::{self, Generation};
use crate::{ServiceError, Store};

/// A failed request: HTTP status, machine-readable code and message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
}

/// JSON body of every error response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub code: String,
    pub message: String,
}

impl ApiError {
    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, code: code.into(), message: message.into() }
    }

    pub fn not_found(code: &str, message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, code: code.into(), message: message.into() }
    }

    /// Details stay in the server log.
    pub fn internal() -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "internal".into(),
            message: "internal error".into(),
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({}): {}", self.status.as_u16(), self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody { error: ErrorDetail { code: self.code, message: self.message } };
        (self.status, Json(body)).into_response()
    }
}

/// Query-string extractor that rejects unknown or malformed parameters
/// with a JSON 400.
pub struct ApiQuery<T>(pub T);

impl<T: DeserializeOwned, S: Send + Sync> FromRequestParts<S> for ApiQuery<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, _: &S) -> Result<Self, Self::Rejection> {
        Query::try_from_uri(&parts.uri)
            .map(|Query(v)| ApiQuery(v))
            .map_err(|e| ApiError::bad_request("invalid_query", e.body_text()))
    }
}

/// Shared server state: the current generation, replaced whole on reload.
#[derive(Clone)]
pub struct AppState {
    store: Option<Store>,
    current: Arc<RwLock<Arc<Generation>>>,
}

impl AppState {
    pub fn new(generation: Generation) -> Self {
        AppState { store: None, current: Arc::new(RwLock::new(Arc::new(generation))) }
    }

    pub fn from_store(store: Store) -> Result<Self, ServiceError> {
        let generation = Generation::load(&store)?;
        Ok(AppState { store: Some(store), current: Arc::new(RwLock::new(Arc::new(generation))) })
    }

    /// The generation requests started now will see.
    pub fn generation(&self) -> Arc<Generation> {
        self.current.read().expect("generation lock").clone()
    }

    /// Swaps in `generation`; requests already running keep the old one.
    pub fn install(&self, generation: Generation) {
        *self.current.write().expect("generation lock") = Arc::new(generation);
    }

    /// Loads a fresh generation from the store and installs it. On failure
    /// the current generation stays in place.
    pub fn reload(&self) -> Result<(), ServiceError> {
        let store = self.store.as_ref().ok_or_else(|| ServiceError::Config("state has no backing store".into()))?;
        self.install(Generation::load(store)?);
        Ok(())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn sources(State(s): State<AppState>, ApiQuery(_): ApiQuery<query::NoParams>) -> ApiResult<query::SourcesReport> {
    Ok(Json(query::sources(&s.generation())))
}

async fn treemap(
    State(s): State<AppState>,
    Path(forum): Path<String>,
    ApiQuery(_): ApiQuery<query::NoParams>,
) -> ApiResult<npswatch_analytics::TreemapNode> {
    Ok(Json(query::forum_treemap(&s.generation(), &forum)?))
}

async fn trend(State(s): State<AppState>, ApiQuery(p): ApiQuery<query::TrendParams>) -> ApiResult<npswatch_analytics::TrendSeries> {
    Ok(Json(query::term_trend(&s.generation(), &p)?))
}

async fn horizon(State(s): State<AppState>, ApiQuery(p): ApiQuery<query::HorizonParams>) -> ApiResult<npswatch_analytics::HorizonSet> {
    Ok(Json(query::term_horizon(&s.generation(), &p)?))
}

async fn cooccur(
    State(s): State<AppState>,
    ApiQuery(p): ApiQuery<query::CooccurParams>,
) -> ApiResult<query::Page<query::Cooccurrence>> {
    Ok(Json(query::cooccur(&s.generation(), &p)?))
}

async fn neologisms(
    State(s): State<AppState>,
    ApiQuery(p): ApiQuery<query::NeologismParams>,
) -> ApiResult<query::Page<npswatch_analytics::Neologism>> {
    Ok(Json(query::term_neologisms(&s.generation(), &p)?))
}

async fn geo(State(s): State<AppState>, ApiQuery(p): ApiQuery<query::ForumParams>) -> ApiResult<npswatch_analytics::GeoDistribution> {
    Ok(Json(query::geo(&s.generation(), &p)?))
}

async fn distfit(
    State(s): State<AppState>,
    ApiQuery(p): ApiQuery<query::DistfitParams>,
) -> ApiResult<npswatch_heavytail::DistFitReport> {
    let g = s.generation();
    let report = tokio::task::spawn_blocking(move || query::distfit(&g, &p)).await.map_err(|_| ApiError::internal())?;
    Ok(Json(report?))
}

async fn substances(
    State(s): State<AppState>,
    ApiQuery(p): ApiQuery<query::PageParams>,
) -> ApiResult<query::Page<npswatch_analytics::SubstanceSummaryRow>> {
    Ok(Json(query::substances(&s.generation(), &p)))
}

async fn links(
    State(s): State<AppState>,
    ApiQuery(_): ApiQuery<query::NoParams>,
) -> ApiResult<npswatch_analytics::LinkOverlapReport> {
    Ok(Json(query::links(&s.generation())))
}

async fn not_found() -> ApiError {
    ApiError::not_found("no_route", "no such endpoint")
}

/// All `/api/v1` routes over `state`.
pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/v1/sources", get(sources))
        .route("/api/v1/forums/{forum}/treemap", get(treemap))
        .route("/api/v1/trend", get(trend))
        .route("/api/v1/horizon", get(horizon))
        .route("/api/v1/cooccur", get(cooccur))
        .route("/api/v1/neologisms", get(neologisms))
        .route("/api/v1/geo", get(geo))
        .route("/api/v1/distfit", get(distfit))
        .route("/api/v1/substances", get(substances))
        .route("/api/v1/links/overlap", get(links))
        .fallback(not_found)
        .layer(CatchPanicLayer::custom(|_| {
            tracing::error!("handler panicked");
            ApiError::internal().into_response()
        }))
        .with_state(state)
}

/// Serves the API until Ctrl-C. On Unix, SIGHUP reloads the store and swaps
/// the generation in.
pub async fn serve(state: AppState, addr: SocketAddr) -> Result<(), ServiceError> {
    #[cfg(unix)]
    {
        use tokio::signal::unix::{signal, SignalKind};
        let mut hup = signal(SignalKind::hangup())?;
        let reloader = state.clone();
        tokio::spawn(async move {
            while hup.recv().await.is_some() {
                match reloader.reload() {
                    Ok(()) => tracing::info!("reloaded store"),
                    Err(e) => tracing::error!("reload failed, keeping current generation: {e}"),
                }
            }
        });
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
