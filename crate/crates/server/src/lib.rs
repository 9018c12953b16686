//! HTTP interface over a pattern matrix and live elicitation sessions.
//!
//! All JSON routes live under `/api`; anything else is served from the UI
//! asset directory, or a built-in landing page when none is configured.

use std::future::Future;

use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;
use tower_http::services::{ServeDir, ServeFile};

mod error;
mod routes;
mod state;

pub use error::ApiError;
pub use routes::{Created, Mutation, NextList, SessionPage, SessionSummary, DEFAULT_LIMIT};
pub use state::{system_clock, AppState, Clock, ServerConfig};

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/matrix", get(routes::get_matrix))
        .route("/matrix/concerns", post(routes::add_concern))
        .route("/graph", get(routes::get_graph))
        .route(
            "/sessions",
            get(routes::list_sessions).post(routes::create_session),
        )
        .route("/sessions/{id}", get(routes::get_session))
        .route("/sessions/{id}/next", get(routes::get_next))
        .route("/sessions/{id}/answers", post(routes::post_answer))
        .route("/sessions/{id}/skip", post(routes::post_skip))
        .route("/sessions/{id}/gate", post(routes::post_gate))
        .route("/sessions/{id}/coverage", get(routes::get_coverage))
        .route("/sessions/{id}/log", get(routes::get_log))
        .route("/sessions/{id}/links", get(routes::get_links))
        .fallback(routes::api_not_found);

    let app = Router::new().nest("/api", api);
    let app = match state.assets() {
        Some(dir) => {
            let index = ServeFile::new(dir.join("index.html"));
            app.fallback_service(ServeDir::new(dir).fallback(index))
        }
        None => app.route("/", get(routes::placeholder_index)),
    };
    app.with_state(state)
}

/// Serves `state` on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}
