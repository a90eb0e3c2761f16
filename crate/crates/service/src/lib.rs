//! HTTP front end for interactive level-design sessions.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use ufg_core::evo::GaParams;
use ufg_core::intent::AgentPolicy;
use ufg_core::session::{SessionView, Transcript};
use ufg_core::store::SessionStore;
use ufg_core::Error;

pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        Self(e)
    }
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self.0 {
            Error::Config(_) | Error::Domain(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Error::Selection(_) | Error::Encoding(_) | Error::InvalidLevel(_) => StatusCode::BAD_REQUEST,
            Error::State(_) | Error::WrongTurn => StatusCode::CONFLICT,
            Error::NotFound(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let kind = match self.0 {
            Error::Config(_) | Error::Domain(_) => "invalid_params",
            Error::Selection(_) | Error::Encoding(_) | Error::InvalidLevel(_) => "invalid_selection",
            Error::WrongTurn => "wrong_turn",
            Error::State(_) => "state",
            Error::NotFound(_) => "not_found",
            _ => "internal",
        };
        (self.status(), Json(serde_json::json!({ "error": kind, "message": self.0.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CreateRequest {
    pub params: GaParams,
    pub policy: AgentPolicy,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    pub state: SessionView,
}

#[derive(Debug, Deserialize)]
pub struct SelectionRequest {
    pub ids: Vec<usize>,
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(state))
        .route("/sessions/{id}/selection", post(select))
        .route("/sessions/{id}/export/{candidate}", get(export))
        .route("/sessions/{id}/history", get(history))
        .with_state(store)
}

/// Session work is CPU-bound (decoding, ray casting, tree training), so it
/// runs off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ufg_core::Result<T> + Send + 'static) -> ApiResult<T> {
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map_err(ApiError),
        Err(e) => Err(ApiError(Error::State(format!("worker failed: {e}")))),
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload.map(|Json(v)| v).map_err(|e| ApiError(Error::Config(e.body_text())))
}

async fn create(
    State(store): State<Arc<SessionStore>>,
    payload: Result<Json<CreateRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let req = body(payload)?;
    let created = blocking(move || {
        let id = store.create(req.params, req.policy)?;
        let state = store.read(&id, |s| s.view())?;
        Ok(Created { id, state })
    })
    .await?;
    Ok((StatusCode::CREATED, Json(created)))
}

async fn state(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    Ok(Json(blocking(move || store.read(&id, |s| s.view())).await?))
}

async fn select(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    payload: Result<Json<SelectionRequest>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let req = payload.map(|Json(v)| v).map_err(|e| ApiError(Error::Selection(e.body_text())))?;
    let pair: [usize; 2] = req
        .ids
        .try_into()
        .map_err(|ids: Vec<usize>| Error::Selection(format!("exactly 2 ids required, got {}", ids.len())))?;
    let view = blocking(move || {
        store.update(&id, |s| {
            s.submit_selection(pair)?;
            Ok(s.view())
        })
    })
    .await?;
    Ok(Json(view))
}

async fn export(
    State(store): State<Arc<SessionStore>>,
    Path((id, candidate)): Path<(String, String)>,
) -> ApiResult<Response> {
    let candidate: usize = candidate
        .parse()
        .map_err(|_| Error::NotFound(format!("candidate {candidate}")))?;
    let json = blocking(move || store.read(&id, |s| s.export_level(candidate))?.map(|doc| doc.to_json())).await?;
    Ok(([(header::CONTENT_TYPE, "application/json")], json).into_response())
}

async fn history(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Json<Transcript>> {
    Ok(Json(blocking(move || store.read(&id, |s| s.transcript())).await?))
}
