//! HTTP/JSON service over the filtering pipeline: program parsing and
//! validation, scene runs, scene exploration, question mode, and the named
//! program library.
//!
//! Routes live under `/v1`. Scenes arrive as resolved frame lists (raster
//! sidecars are a client concern); programs travel in their document form.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::routing::{get, post};
use axum::Router;
use vizfilter_core::library::Library;
use vizfilter_core::registry::Registry;
use vizfilter_core::Result;

mod error;
mod handlers;
mod llm;

pub use error::ApiFailure;
pub use llm::LlmConfig;

pub struct AppState {
    pub registry: &'static Registry,
    pub library: Library,
    pub llm: Option<LlmConfig>,
    pub http: reqwest::Client,
}

impl AppState {
    /// State over the built-in registry, a library at `library_dir`, and an
    /// optional LLM endpoint.
    pub fn new(library_dir: impl Into<PathBuf>, llm: Option<LlmConfig>) -> Result<AppState> {
        Ok(AppState {
            registry: Registry::builtin(),
            library: Library::open(library_dir)?,
            llm,
            http: reqwest::Client::new(),
        })
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/v1/health", get(handlers::health))
        .route("/v1/registry", get(handlers::registry))
        .route("/v1/programs/parse", post(handlers::parse))
        .route("/v1/programs/validate", post(handlers::validate))
        .route("/v1/run", post(handlers::run))
        .route("/v1/explore", post(handlers::explore))
        .route("/v1/explore/generate", post(handlers::generate))
        .route("/v1/ask", post(handlers::ask))
        .route("/v1/classify", post(handlers::classify))
        .route("/v1/library", get(handlers::lib_list))
        .route(
            "/v1/library/{name}",
            get(handlers::lib_show).put(handlers::lib_save).delete(handlers::lib_delete),
        )
        .with_state(state)
}

/// Serve until the listener closes (or forever).
pub async fn serve(listener: tokio::net::TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

/// Bind an ephemeral localhost port and serve in a background task. Used by
/// the CLI when no external server is configured, and by tests.
pub async fn spawn_ephemeral(
    state: Arc<AppState>,
) -> std::io::Result<(SocketAddr, tokio::task::JoinHandle<()>)> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    let handle = tokio::spawn(async move {
        let _ = serve(listener, state).await;
    });
    Ok((addr, handle))
}
