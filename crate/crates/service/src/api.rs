//! JSON HTTP API over one loaded instance. Sessions live in memory, each
//! behind its own lock; solver work runs on the blocking pool.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use stplan_core::imo::{Formulation, ImoSession, Journal, Label, SessionView, DEFAULT_SAMPLE_SIZE};

use crate::commands::{final_report, solve_request, FinalReport, SolveOutput, SolveRequest};
use crate::error::{from_json, Result, ServiceError};
use crate::file::{InstanceFile, Workbench};

pub struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.0.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.0.body())).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

type SharedSession = Arc<Mutex<ImoSession>>;

pub struct AppState {
    workbench: Arc<Workbench>,
    formulation: Formulation,
    sessions: Mutex<BTreeMap<u64, SharedSession>>,
    next_id: AtomicU64,
    journal_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionRequest {
    pub formulation: Option<Formulation>,
    pub sample_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsRequest {
    pub labels: BTreeMap<String, Label>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceRequest {
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatisfiedRequest {
    pub strategy: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionResponse {
    pub id: u64,
    #[serde(flatten)]
    pub view: SessionView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<FinalReport>,
}

pub fn router(workbench: Workbench, formulation: Formulation, journal_dir: Option<PathBuf>) -> Router {
    let state = Arc::new(AppState {
        workbench: Arc::new(workbench),
        formulation,
        sessions: Mutex::new(BTreeMap::new()),
        next_id: AtomicU64::new(1),
        journal_dir,
    });
    Router::new()
        .route("/instance", get(instance))
        .route("/solve", post(solve))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/journal", get(get_journal))
        .route("/sessions/{id}/labels", post(labels))
        .route("/sessions/{id}/choice", post(choice))
        .route("/sessions/{id}/satisfied", post(satisfied))
        .with_state(state)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T> + Send + 'static) -> ApiResult<T> {
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map_err(ApiError),
        Err(e) => Err(ApiError(ServiceError::Usage(format!("worker failed: {e}")))),
    }
}

fn body<T: serde::de::DeserializeOwned>(bytes: &Bytes) -> Result<T> {
    let text = std::str::from_utf8(bytes).map_err(|e| ServiceError::Parse {
        pointer: String::new(),
        message: e.to_string(),
    })?;
    if text.trim().is_empty() {
        return from_json("{}");
    }
    from_json(text)
}

fn session(state: &AppState, id: &str) -> Result<(u64, SharedSession)> {
    let not_found = || ServiceError::NotFound(format!("session {id}"));
    let key: u64 = id.parse().map_err(|_| not_found())?;
    let sessions = state.sessions.lock().expect("session table lock");
    sessions.get(&key).cloned().map(|s| (key, s)).ok_or_else(not_found)
}

fn persist(state: &AppState, id: u64, s: &ImoSession) {
    let Some(dir) = &state.journal_dir else { return };
    let path = dir.join(format!("session-{id}.json"));
    let text = serde_json::to_string_pretty(&s.journal()).expect("journal serializes");
    if let Err(e) = std::fs::write(&path, text) {
        log::error!("cannot write {}: {e}", path.display());
    }
}

fn respond(id: u64, s: &ImoSession, report: Option<FinalReport>) -> SessionResponse {
    SessionResponse {
        id,
        view: s.view(),
        report,
    }
}

async fn instance(State(state): State<Arc<AppState>>) -> Json<InstanceFile> {
    Json(state.workbench.to_file())
}

async fn solve(State(state): State<Arc<AppState>>, bytes: Bytes) -> ApiResult<Json<SolveOutput>> {
    let req: SolveRequest = body(&bytes)?;
    let wb = state.workbench.clone();
    blocking(move || solve_request(&wb, &req)).await.map(Json)
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    bytes: Bytes,
) -> ApiResult<(StatusCode, Json<SessionResponse>)> {
    let req: SessionRequest = body(&bytes)?;
    let formulation = req.formulation.unwrap_or(state.formulation);
    let k = req.sample_size.unwrap_or(DEFAULT_SAMPLE_SIZE);
    let wb = state.workbench.clone();
    let s = blocking(move || crate::commands::start_session(&wb, formulation, k)).await?;
    let id = state.next_id.fetch_add(1, Ordering::Relaxed);
    persist(&state, id, &s);
    let response = respond(id, &s, None);
    state
        .sessions
        .lock()
        .expect("session table lock")
        .insert(id, Arc::new(Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(response)))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionResponse>> {
    let (id, s) = session(&state, &id)?;
    let s = s.lock().expect("session lock");
    Ok(Json(respond(id, &s, None)))
}

async fn get_journal(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Journal>> {
    let (_, s) = session(&state, &id)?;
    let s = s.lock().expect("session lock");
    Ok(Json(s.journal()))
}

/// Runs `step` on the session under its lock, on the blocking pool.
async fn step(
    state: Arc<AppState>,
    id: String,
    step: impl FnOnce(&Workbench, &mut ImoSession) -> Result<Option<FinalReport>> + Send + 'static,
) -> ApiResult<Json<SessionResponse>> {
    let (id, shared) = session(&state, &id)?;
    let st = state.clone();
    blocking(move || {
        let mut s = shared.lock().expect("session lock");
        let report = step(&st.workbench, &mut s)?;
        persist(&st, id, &s);
        Ok(respond(id, &s, report))
    })
    .await
    .map(Json)
}

async fn labels(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<SessionResponse>> {
    let req: LabelsRequest = body(&bytes)?;
    step(state, id, move |_, s| {
        s.submit_labels(req.labels)?;
        Ok(None)
    })
    .await
}

async fn choice(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<SessionResponse>> {
    let req: ChoiceRequest = body(&bytes)?;
    step(state, id, move |_, s| {
        s.choose_rule(&req.rule)?;
        Ok(None)
    })
    .await
}

async fn satisfied(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<SessionResponse>> {
    let req: SatisfiedRequest = body(&bytes)?;
    step(state, id, move |wb, s| {
        let strategy = s.mark_satisfied(&req.strategy)?.strategy.clone();
        final_report(wb, &strategy).map(Some)
    })
    .await
}

/// Serves `router` on `127.0.0.1:port` until interrupted.
pub async fn serve(router: Router, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
