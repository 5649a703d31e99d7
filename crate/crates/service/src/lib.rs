//! HTTP sessions for playing Walker-Breaker games against strategy bots.
//!
//! | route | |
//! |---|---|
//! | `POST /sessions` | create; the bot moves first if it is its turn |
//! | `GET /sessions/{id}` | full state |
//! | `GET /sessions/{id}/legal` | the human's legal moves |
//! | `POST /sessions/{id}/moves` | play a move, get the bot's reply |

mod session;

use std::net::SocketAddr;
use std::path::Path;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use wb_core::{Move, TerminalReason};

pub use session::{LegalMoves, NewSession, Session, SessionError, SessionStore, SessionView, MAX_EDGES};

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Created {
    pub session_id: String,
    pub state: SessionView,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MoveRequest {
    #[serde(rename = "move")]
    pub mv: Move,
    /// The `version` the client last saw; stale moves get 409.
    #[serde(default)]
    pub version: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveReply {
    pub state: SessionView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bot_move: Option<Move>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<TerminalReason>,
}

/// Error body: `{"error": code, "message": text}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

pub struct ApiError(SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(SessionError::BadRequest {
            code: "bad-request",
            message: e.body_text(),
        })
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            SessionError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            SessionError::NotFound(_) => StatusCode::NOT_FOUND,
            SessionError::Conflict { .. } => StatusCode::CONFLICT,
            SessionError::Illegal(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = ErrorBody {
            error: self.0.code().to_string(),
            message: self.0.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

async fn create(
    State(store): State<SessionStore>,
    body: Result<Json<NewSession>, JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Json(req) = body?;
    let state = tokio::task::spawn_blocking(move || store.create(&req))
        .await
        .map_err(|e| SessionError::Internal(e.to_string()))??;
    Ok((
        StatusCode::CREATED,
        Json(Created {
            session_id: state.session_id.clone(),
            state,
        }),
    ))
}

async fn show(State(store): State<SessionStore>, UrlPath(id): UrlPath<String>) -> Result<Json<SessionView>, ApiError> {
    Ok(Json(store.view(&id)?))
}

async fn legal(State(store): State<SessionStore>, UrlPath(id): UrlPath<String>) -> Result<Json<LegalMoves>, ApiError> {
    Ok(Json(store.legal(&id)?))
}

async fn play(
    State(store): State<SessionStore>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<MoveReply>, ApiError> {
    let Json(req) = body?;
    let (state, bot_move) = tokio::task::spawn_blocking(move || store.play(&id, req.mv, req.version))
        .await
        .map_err(|e| SessionError::Internal(e.to_string()))??;
    Ok(Json(MoveReply {
        terminal: state.terminal_reason,
        state,
        bot_move,
    }))
}

pub fn router(store: SessionStore) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/legal", get(legal))
        .route("/sessions/{id}/moves", post(play))
        .layer(CorsLayer::permissive())
        .with_state(store)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, persist: Option<&Path>) -> std::io::Result<()> {
    let store = match persist {
        Some(dir) => SessionStore::persistent(dir)?,
        None => SessionStore::new(),
    };
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(store)).await
}
