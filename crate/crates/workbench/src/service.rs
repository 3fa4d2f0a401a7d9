//! HTTP session service.
//!
//! Each session sits behind its own mutex, so mutations of one session are
//! serialized while different sessions proceed independently. Game work
//! runs on the blocking pool.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use kanbench_core::reflection::MoveKind;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::doc::{Document, Kind};
use crate::error::WorkbenchError;
use crate::session::{MoveQuery, Session};

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
    /// Directory for resolving base references in uploaded documents.
    pub doc_dir: PathBuf,
}

impl AppState {
    pub fn new(doc_dir: PathBuf) -> AppState {
        AppState { sessions: Arc::default(), doc_dir }
    }

    pub fn insert(&self, session: Session) -> String {
        let id = session.id.clone();
        self.sessions.write().unwrap().insert(id.clone(), Arc::new(Mutex::new(session)));
        id
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(WorkbenchError::UnknownSession(id.to_string())))
    }
}

pub struct ApiError(pub WorkbenchError);

impl From<WorkbenchError> for ApiError {
    fn from(e: WorkbenchError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            WorkbenchError::UnknownSession(_) => StatusCode::NOT_FOUND,
            WorkbenchError::StaleMove(_) | WorkbenchError::NothingToUndo => StatusCode::CONFLICT,
            WorkbenchError::Parse(_)
            | WorkbenchError::Version(_)
            | WorkbenchError::KindMismatch { .. }
            | WorkbenchError::Validation(_) => StatusCode::UNPROCESSABLE_ENTITY,
            WorkbenchError::BadRequest(_) => StatusCode::BAD_REQUEST,
            WorkbenchError::Io { .. } | WorkbenchError::Core(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(json!({ "error": self.0.kind(), "message": self.0.to_string() }))).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn to_json<T: serde::Serialize>(v: &T) -> Json<Value> {
    Json(serde_json::to_value(v).expect("views serialize"))
}

/// Runs `f` on the session under its lock, on the blocking pool.
async fn with_session<T, F>(state: &AppState, id: &str, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce(&mut Session) -> Result<T, WorkbenchError> + Send + 'static,
{
    let session = state.get(id)?;
    tokio::task::spawn_blocking(move || {
        let mut guard = session.lock().unwrap_or_else(|p| p.into_inner());
        f(&mut guard)
    })
    .await
    .expect("session task panicked")
    .map_err(ApiError)
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/moves", get(moves))
        .route("/sessions/{id}/moves/{move_id}", post(apply))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/trace", get(trace))
        .with_state(state)
}

/// `{"model": <model document>, "config": <morphism document>}`.
#[derive(Deserialize)]
struct CreateBody {
    model: Value,
    config: Value,
}

async fn create(
    State(state): State<AppState>,
    Json(body): Json<CreateBody>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let dir = state.doc_dir.clone();
    let session = tokio::task::spawn_blocking(move || {
        let Document::Model(model) = Document::from_value("model", body.model)?.expect_kind(Kind::Model)? else {
            unreachable!()
        };
        let Document::Morphism(config) = Document::from_value("config", body.config)?.expect_kind(Kind::Morphism)?
        else {
            unreachable!()
        };
        let id = uuid::Uuid::new_v4().simple().to_string();
        Session::new(id, &model, &dir, &config, &dir)
    })
    .await
    .expect("session task panicked")?;
    let view = session.state();
    state.insert(session);
    Ok((StatusCode::CREATED, to_json(&view)))
}

async fn show(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let view = with_session(&state, &id, |s| Ok(s.state())).await?;
    Ok(to_json(&view))
}

#[derive(Deserialize)]
struct MovesParams {
    kind: Option<String>,
    /// Index or name.
    condition: Option<String>,
    page: Option<usize>,
    all: Option<bool>,
}

async fn moves(State(state): State<AppState>, Path(id): Path<String>, Query(p): Query<MovesParams>) -> ApiResult {
    let kind = match p.kind.as_deref().filter(|k| !k.is_empty()) {
        None => None,
        Some(k) => Some(
            MoveKind::parse(k)
                .ok_or_else(|| ApiError(WorkbenchError::BadRequest(format!("unknown move kind `{k}`"))))?,
        ),
    };
    let page = with_session(&state, &id, move |s| {
        let condition = match p.condition.as_deref().filter(|c| !c.is_empty()) {
            None => None,
            Some(c) => Some(match c.parse::<usize>() {
                Ok(i) => i,
                Err(_) => s
                    .current()
                    .model
                    .condition_named(c)
                    .ok_or_else(|| WorkbenchError::BadRequest(format!("unknown condition `{c}`")))?,
            }),
        };
        let q = MoveQuery { kind, condition, page: p.page.unwrap_or(0), include_unproductive: p.all.unwrap_or(false) };
        s.moves(&q)
    })
    .await?;
    Ok(to_json(&page))
}

async fn apply(State(state): State<AppState>, Path((id, move_id)): Path<(String, String)>) -> ApiResult {
    let view = with_session(&state, &id, move |s| s.apply(&move_id)).await?;
    Ok(to_json(&view))
}

async fn undo(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let view = with_session(&state, &id, |s| s.undo()).await?;
    Ok(to_json(&view))
}

async fn trace(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let doc = with_session(&state, &id, |s| Ok(Document::Trace(s.trace_doc()))).await?;
    Ok(Json(doc.to_value()))
}

/// Serves until interrupted. `on_bound` receives the bound address.
pub async fn serve(state: AppState, addr: SocketAddr, on_bound: impl FnOnce(SocketAddr)) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    on_bound(listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
