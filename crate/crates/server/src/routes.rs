use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use w6h_core::session::MatrixRef;
use w6h_core::storage::{self, SessionEvent, SessionJournal};
use w6h_core::{
    Answer, Concern, CoverageReport, LinkMatrix, Mode, QuestionInstance, ScopeEntry, Session,
    SessionError, Verdict,
};

use crate::error::ApiError;
use crate::state::AppState;

type ApiResult<T> = Result<T, ApiError>;

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload
        .map(|Json(v)| v)
        .map_err(|rej| ApiError::new(rej.status(), "InvalidBody", rej.body_text()))
}

fn etag(text: &str) -> String {
    format!("\"{}\"", hex::encode(Sha256::digest(text.as_bytes())))
}

fn json_document(text: String, etag: &str) -> Response {
    (
        [
            (header::CONTENT_TYPE, "application/json"),
            (header::ETAG, etag),
        ],
        text,
    )
        .into_response()
}

pub async fn get_matrix(State(state): State<AppState>, headers: HeaderMap) -> Response {
    let text = storage::save_matrix(&state.matrix());
    let tag = etag(&text);
    let cached = headers
        .get(header::IF_NONE_MATCH)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|t| t.trim() == tag || t.trim() == "*"));
    if cached {
        return (StatusCode::NOT_MODIFIED, [(header::ETAG, tag)]).into_response();
    }
    json_document(text, &tag)
}

pub async fn get_graph(State(state): State<AppState>) -> Response {
    let text = storage::save_graph(state.graph());
    let tag = etag(&text);
    json_document(text, &tag)
}

pub async fn add_concern(
    State(state): State<AppState>,
    payload: Result<Json<Concern>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Concern>)> {
    let concern = body(payload)?;
    state.update_matrix(|m| m.add_concern(concern.clone()))?;
    Ok((StatusCode::CREATED, Json(concern)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// A single group id or display name. Combined with `tag` when given.
    #[serde(default)]
    group: Option<String>,
    #[serde(default)]
    tag: Option<String>,
    #[serde(default)]
    scope: Vec<ScopeEntry>,
    #[serde(default)]
    mode: Mode,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub matrix_ref: MatrixRef,
    pub mode: Mode,
    pub scope: Vec<ScopeEntry>,
    pub created: String,
    pub instance_count: usize,
    pub pending_count: usize,
    pub event_count: usize,
}

fn summary(journal: &SessionJournal) -> SessionSummary {
    let s = journal.session();
    SessionSummary {
        id: s.id.clone(),
        matrix_ref: s.matrix_ref.clone(),
        mode: s.mode,
        scope: s.scope.clone(),
        created: s.created.clone(),
        instance_count: s.instances.len(),
        pending_count: s.pending_count(),
        event_count: journal.log().len(),
    }
}

/// The currently askable instances of a session.
#[derive(Debug, Serialize, Deserialize)]
pub struct NextList {
    pub session_id: String,
    pub pending_count: usize,
    pub next: Vec<QuestionInstance>,
}

fn next_list(session: &Session) -> NextList {
    NextList {
        session_id: session.id.clone(),
        pending_count: session.pending_count(),
        next: session.next_questions().into_iter().cloned().collect(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    #[serde(flatten)]
    pub summary: SessionSummary,
    pub next: Vec<QuestionInstance>,
}

pub async fn create_session(
    State(state): State<AppState>,
    payload: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let req = body(payload)?;
    let mut scope = req.scope;
    if let Some(group) = req.group {
        scope.push(ScopeEntry {
            group,
            tag: req.tag,
        });
    } else if req.tag.is_some() {
        return Err(ApiError::bad_request("`tag` requires `group`"));
    }
    if scope.is_empty() {
        return Err(ApiError::bad_request("give `group` or a non-empty `scope`"));
    }
    let created = state.now();
    let graph = state.graph().clone();
    let session = state.create_session(|id, matrix| {
        for entry in &mut scope {
            let resolved = matrix
                .resolve_group(&entry.group)
                .ok_or_else(|| SessionError::UnknownGroup(entry.group.clone()))?;
            entry.group = resolved.id.clone();
        }
        Session::create(id, matrix, &graph, &scope, req.mode, created)
    })?;
    let created = state.read_session(&session.id, |j| Created {
        summary: summary(j),
        next: next_list(j.session()).next,
    })?;
    Ok((StatusCode::CREATED, Json(created)))
}

#[derive(Debug, Deserialize)]
pub struct Page {
    offset: Option<usize>,
    limit: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionPage {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<SessionSummary>,
}

pub const DEFAULT_LIMIT: usize = 50;

pub async fn list_sessions(
    State(state): State<AppState>,
    page: Result<Query<Page>, QueryRejection>,
) -> ApiResult<Json<SessionPage>> {
    let Query(page) =
        page.map_err(|rej| ApiError::new(rej.status(), "InvalidQuery", rej.body_text()))?;
    let offset = page.offset.unwrap_or(0);
    let limit = page.limit.unwrap_or(DEFAULT_LIMIT);
    let ids = state.session_ids();
    let mut items = Vec::new();
    for id in ids.iter().skip(offset).take(limit) {
        items.push(state.read_session(id, summary)?);
    }
    Ok(Json(SessionPage {
        total: ids.len(),
        offset,
        limit,
        items,
    }))
}

pub async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<Session>> {
    state.read_session(&id, |j| Json(j.session().clone()))
}

pub async fn get_next(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<NextList>> {
    state.read_session(&id, |j| Json(next_list(j.session())))
}

pub async fn get_coverage(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<CoverageReport>> {
    state.read_session(&id, |j| Json(j.session().coverage()))
}

pub async fn get_links(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<LinkMatrix>> {
    state.read_session(&id, |j| Json(j.session().link_matrix()))
}

pub async fn get_log(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let text = state.read_session(&id, |j| j.log().to_jsonl())?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text).into_response())
}

/// Result of a successful mutation: the appended event and the refreshed
/// askable list.
#[derive(Debug, Serialize, Deserialize)]
pub struct Mutation {
    pub event: SessionEvent,
    #[serde(flatten)]
    pub next: NextList,
}

fn mutation(event: &SessionEvent, journal: &SessionJournal) -> Json<Mutation> {
    Json(Mutation {
        event: event.clone(),
        next: next_list(journal.session()),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerBody {
    instance_id: String,
    text: String,
    #[serde(default)]
    items: Option<Vec<String>>,
    #[serde(default)]
    verdict: Option<Verdict>,
    /// Defaults to the server clock.
    #[serde(default)]
    timestamp: Option<String>,
}

pub async fn post_answer(
    State(state): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<AnswerBody>, JsonRejection>,
) -> ApiResult<Json<Mutation>> {
    let req = body(payload)?;
    let answer = Answer {
        instance_id: req.instance_id,
        text: req.text,
        items: req.items,
        verdict: req.verdict,
        timestamp: req.timestamp.unwrap_or_else(|| state.now()),
    };
    state.mutate_session(&id, |j| j.answer(answer).cloned(), mutation)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkipBody {
    instance_id: String,
}

pub async fn post_skip(
    State(state): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<SkipBody>, JsonRejection>,
) -> ApiResult<Json<Mutation>> {
    let req = body(payload)?;
    let now = state.now();
    state.mutate_session(&id, |j| j.skip(&req.instance_id, now).cloned(), mutation)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateBody {
    instance_id: String,
    verdict: Verdict,
    tag: String,
}

pub async fn post_gate(
    State(state): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<GateBody>, JsonRejection>,
) -> ApiResult<Json<Mutation>> {
    let req = body(payload)?;
    let now = state.now();
    state.mutate_session(
        &id,
        |j| {
            j.gate(&req.instance_id, req.verdict, &req.tag, now)
                .cloned()
        },
        mutation,
    )
}

pub async fn api_not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such route")
}

pub async fn placeholder_index() -> Response {
    (
        [(header::CONTENT_TYPE, "text/html; charset=utf-8")],
        include_str!("../assets/index.html"),
    )
        .into_response()
}
