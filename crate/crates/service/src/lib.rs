//! JSON-over-HTTP session service for the fuzzy AHP engine.
//!
//! Sessions live in a [`SessionStore`] directory. Reads have no side effects;
//! writes go through the store's per-session lock and refresh the document's
//! cached results before saving.

mod error;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::Router;
use serde::Serialize;
use serde_json::Value;
use tower_http::services::ServeDir;

use fahp_core::consistency::CrReport;
use fahp_core::engine::{self, NodeId, NodeSource};
use fahp_core::extent::{Cell, WeightVector};
use fahp_core::fuzzy::LinguisticGrade;
use fahp_core::model::Aggregation;
use fahp_core::sensitivity::parse_grid;
use fahp_core::session::{
    load_from_slice, paper_dataset, to_canonical_bytes, SessionDocument, SessionId, SessionStore,
};

pub use error::ApiError;

pub const CONTENT_TYPE_JSON: &str = "application/json; charset=utf-8";

pub(crate) fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    let bytes = serde_json::to_vec(body).expect("response bodies serialize");
    raw_json(status, bytes)
}

fn raw_json(status: StatusCode, bytes: Vec<u8>) -> Response {
    let mut response = (status, bytes).into_response();
    response.headers_mut().insert(
        header::CONTENT_TYPE,
        HeaderValue::from_static(CONTENT_TYPE_JSON),
    );
    response
}

#[derive(Clone)]
struct AppState {
    store: Arc<SessionStore>,
}

/// Builds the API router. When `ui_dir` is given its files are served for
/// every path the API does not claim, including `GET /`.
pub fn router(store: Arc<SessionStore>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/judgments/{node}/{i}/{j}", put(put_judgment))
        .route("/sessions/{id}/weights/{node}", get(get_weights))
        .route("/sessions/{id}/consistency/{node}", get(get_consistency))
        .route("/sessions/{id}/ranking", get(get_ranking))
        .route("/sessions/{id}/sensitivity", get(get_sensitivity))
        .route("/templates/paper", get(get_paper_template))
        .with_state(AppState { store });
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    }
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(
    addr: SocketAddr,
    store: Arc<SessionStore>,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store, ui_dir)).await
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not-found", "no such route")
}

fn session_id(raw: &str) -> Result<SessionId, ApiError> {
    Ok(raw.parse::<SessionId>()?)
}

fn load(state: &AppState, id: &str) -> Result<SessionDocument, ApiError> {
    Ok(state.store.load(&session_id(id)?)?)
}

#[derive(Serialize)]
struct Created {
    id: String,
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let value: Value =
        serde_json::from_slice(&body).map_err(|e| ApiError::malformed_body(e.to_string()))?;
    let mut doc = match value.get("template") {
        Some(Value::String(t)) if t == "paper" => paper_dataset(),
        Some(other) => {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "unknown-template",
                format!("unknown template {other}; available: \"paper\""),
            ))
        }
        None => load_from_slice(&body)?,
    };
    engine::refresh_results(&mut doc);
    let id = state.store.create(&doc)?;
    let mut response = json_response(StatusCode::CREATED, &Created { id: id.to_string() });
    if let Ok(location) = HeaderValue::from_str(&format!("/sessions/{id}")) {
        response.headers_mut().insert(header::LOCATION, location);
    }
    Ok(response)
}

async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let doc = load(&state, &id)?;
    Ok(raw_json(StatusCode::OK, to_canonical_bytes(&doc)))
}

async fn get_paper_template() -> Response {
    raw_json(StatusCode::OK, to_canonical_bytes(&paper_dataset()))
}

/// State of one node after a judgment was stored.
#[derive(Debug, Serialize)]
struct JudgmentSnapshot {
    node: String,
    cell: Cell,
    grade: LinguisticGrade,
    missing: Vec<Cell>,
    weights: Option<WeightVector>,
    consistency: Option<CrReport>,
    notes: Vec<String>,
}

fn parse_grade_body(body: &[u8]) -> Result<LinguisticGrade, ApiError> {
    let value: Value =
        serde_json::from_slice(body).map_err(|e| ApiError::malformed_body(e.to_string()))?;
    let text = match &value {
        Value::String(s) => s.as_str(),
        Value::Object(map) => match map.get("grade") {
            Some(Value::String(s)) => s.as_str(),
            _ => {
                return Err(ApiError::malformed_body(
                    "expected {\"grade\": \"<grade>\"}",
                ))
            }
        },
        _ => {
            return Err(ApiError::malformed_body(
                "expected {\"grade\": \"<grade>\"}",
            ))
        }
    };
    text.parse()
        .map_err(|e: fahp_core::fuzzy::GradeParseError| {
            ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "invalid-grade",
                e.to_string(),
            )
            .with_details(serde_json::json!({ "path": "grade" }))
        })
}

fn parse_cell(i: &str, j: &str, n: usize) -> Result<Cell, ApiError> {
    let invalid = |message: String| {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-cell", message)
            .with_details(serde_json::json!({ "cell": format!("({i},{j})") }))
    };
    let (row, col) = match (i.parse::<usize>(), j.parse::<usize>()) {
        (Ok(r), Ok(c)) => (r, c),
        _ => return Err(invalid("cell indices must be non-negative integers".into())),
    };
    if row >= col {
        return Err(invalid(format!(
            "only upper-triangle cells (i < j) can be judged; ({row},{col}) is derived"
        )));
    }
    if col >= n {
        return Err(invalid(format!(
            "cell ({row},{col}) is outside the {n}x{n} matrix"
        )));
    }
    Ok(Cell::new(row, col))
}

fn snapshot(
    doc: &SessionDocument,
    node: &NodeId,
    cell: Cell,
    grade: LinguisticGrade,
) -> JudgmentSnapshot {
    let missing = engine::missing_cells(doc, node).unwrap_or_default();
    let complete = missing.is_empty();
    let judged_ei = engine::node_judgments(doc, node)
        .values()
        .any(|g| g.is_equal_importance());
    let mut notes = Vec::new();
    if judged_ei {
        notes.push(
            "equal-importance judgments use the asymmetric triple (1,1,2), which is not its own reciprocal"
                .to_owned(),
        );
    }
    JudgmentSnapshot {
        node: node.to_string(),
        cell,
        grade,
        missing,
        weights: complete
            .then(|| engine::node_weights(doc, node).ok())
            .flatten(),
        consistency: complete
            .then(|| engine::node_consistency(doc, node).ok())
            .flatten(),
        notes,
    }
}

async fn put_judgment(
    State(state): State<AppState>,
    Path((id, node, i, j)): Path<(String, String, String, String)>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let id = session_id(&id)?;
    let node = NodeId::parse(&node);
    let snapshot = state.store.update(&id, |doc| {
        if engine::node_source(doc, &node)? == NodeSource::Precomputed {
            return Err(engine::EngineError::PrecomputedNode(node.to_string()).into());
        }
        let cell = parse_cell(&i, &j, engine::node_labels(doc, &node).len())?;
        let grade = parse_grade_body(&body)?;
        let set = match &node {
            NodeId::Criteria => &mut doc.judgments.criteria,
            NodeId::Criterion(c) => doc.judgments.alternatives.entry(c.clone()).or_default(),
        };
        set.insert(cell, grade);
        engine::refresh_results(doc);
        Ok::<_, ApiError>(snapshot(doc, &node, cell, grade))
    })?;
    Ok(json_response(StatusCode::OK, &snapshot))
}

async fn get_weights(
    State(state): State<AppState>,
    Path((id, node)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let doc = load(&state, &id)?;
    let weights = engine::node_weights(&doc, &NodeId::parse(&node))?;
    Ok(json_response(StatusCode::OK, &weights))
}

async fn get_consistency(
    State(state): State<AppState>,
    Path((id, node)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let doc = load(&state, &id)?;
    let report = engine::node_consistency(&doc, &NodeId::parse(&node))?;
    Ok(json_response(StatusCode::OK, &report))
}

fn aggregation_param(query: &HashMap<String, String>) -> Result<Option<Aggregation>, ApiError> {
    query
        .get("aggregation")
        .map(|s| s.parse::<Aggregation>().map_err(ApiError::invalid_query))
        .transpose()
}

async fn get_ranking(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let mode = aggregation_param(&query)?;
    let doc = load(&state, &id)?;
    let ranking = engine::ranking(&doc, mode)?;
    Ok(json_response(StatusCode::OK, &ranking))
}

async fn get_sensitivity(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let criterion = query
        .get("criterion")
        .ok_or_else(|| ApiError::invalid_query("missing query parameter criterion"))?;
    let grid = parse_grid(
        query
            .get("grid")
            .ok_or_else(|| ApiError::invalid_query("missing query parameter grid"))?,
    )
    .map_err(ApiError::invalid_query)?;
    let mode = aggregation_param(&query)?;
    let doc = load(&state, &id)?;
    let report = engine::sensitivity(&doc, criterion, &grid, mode)?;
    Ok(json_response(StatusCode::OK, &report))
}
