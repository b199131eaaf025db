use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use llmrisk_core::format::to_canonical_json;
use llmrisk_core::{
    advance_status, apply_adjustment, build_matrix, evaluate, filter_by_stakeholder,
    filter_traditional, render, validate_document, AssessmentDocument, Catalog, ControlAdjustment,
    Error, FactorAssignment, OutputFormat, StakeholderGroup, Status,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{ApiError, AppState};

type ApiResult<T = Response> = Result<T, ApiError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluateRequest {
    pub assignments: Vec<FactorAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusRequest {
    pub target: Status,
    #[serde(default)]
    pub expected_revision: Option<u64>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/catalog", get(list_catalog))
        .route("/catalog/{id}", get(get_threat))
        .route("/scheme", get(get_scheme))
        .route(
            "/assessments",
            get(list_assessments).post(create_assessment),
        )
        .route(
            "/assessments/{id}",
            get(get_assessment)
                .put(put_assessment)
                .delete(delete_assessment),
        )
        .route("/assessments/{id}/whatif", post(whatif))
        .route("/assessments/{id}/status", post(change_status))
        .route("/evaluate", post(evaluate_assignments))
        .route("/matrix", get(matrix))
        .with_state(state)
}

pub(crate) fn json_response<T: Serialize + ?Sized>(status: StatusCode, value: &T) -> Response {
    (
        status,
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        to_canonical_json(value),
    )
        .into_response()
}

fn ok<T: Serialize + ?Sized>(value: &T) -> ApiResult {
    Ok(json_response(StatusCode::OK, value))
}

fn with_etag(mut response: Response, revision: u64) -> Response {
    if let Ok(v) = HeaderValue::from_str(&format!("\"{revision}\"")) {
        response.headers_mut().insert(header::ETAG, v);
    }
    response
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| {
        Error::Parse {
            locus: "request body".into(),
            message: e.to_string(),
        }
        .into()
    })
}

/// Store calls touch the filesystem and may wait on a lock.
async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    F: FnOnce() -> llmrisk_core::Result<T> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| {
            ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "io_failure",
                e.to_string(),
            )
        })?
        .map_err(ApiError::from)
}

fn if_match(headers: &HeaderMap) -> ApiResult<Option<u64>> {
    let Some(value) = headers.get(header::IF_MATCH) else {
        return Ok(None);
    };
    value
        .to_str()
        .ok()
        .map(|s| s.trim().trim_start_matches("W/").trim_matches('"'))
        .and_then(|s| s.parse().ok())
        .map(Some)
        .ok_or_else(|| {
            Error::Usage {
                what: "If-Match revision".into(),
                value: String::from_utf8_lossy(value.as_bytes()).into_owned(),
            }
            .into()
        })
}

fn stakeholder(query: &HashMap<String, String>) -> ApiResult<Option<StakeholderGroup>> {
    match query.get("stakeholder").map(|s| s.trim()) {
        None | Some("") => Ok(None),
        Some(s) => Ok(Some(s.parse()?)),
    }
}

fn check_document(state: &AppState, doc: &AssessmentDocument) -> ApiResult<()> {
    let report = validate_document(doc, &state.catalog, &state.scheme);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidDocument(report.errors).into())
    }
}

async fn list_catalog(
    State(state): State<AppState>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult {
    let mut entries: Vec<_> = match stakeholder(&query)? {
        Some(group) => filter_by_stakeholder(&state.catalog, group),
        None => state.catalog.entries.iter().collect(),
    };
    if let Some(flag) = query.get("traditional") {
        let flag = match flag.trim().to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" => true,
            "false" | "no" | "0" => false,
            _ => {
                return Err(Error::Usage {
                    what: "traditional flag".into(),
                    value: flag.clone(),
                }
                .into())
            }
        };
        let keep: Vec<_> = filter_traditional(&state.catalog, flag)
            .into_iter()
            .map(|e| e.id.as_str())
            .collect();
        entries.retain(|e| keep.contains(&e.id.as_str()));
    }
    let filtered = Catalog {
        entries: entries.into_iter().cloned().collect(),
        ..(*state.catalog).clone()
    };
    ok(&filtered)
}

async fn get_threat(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    match state.catalog.resolve(&id) {
        Some(entry) => ok(entry),
        None => Err(Error::NotFound(id).into()),
    }
}

async fn get_scheme(State(state): State<AppState>) -> ApiResult {
    ok(&*state.scheme)
}

async fn list_assessments(State(state): State<AppState>) -> ApiResult {
    let store = state.store.clone();
    ok(&blocking(move || store.list()).await?)
}

async fn commit(
    state: &AppState,
    mut doc: AssessmentDocument,
    expected: Option<u64>,
) -> ApiResult<AssessmentDocument> {
    let store = state.store.clone();
    blocking(move || {
        doc.revision = store.put(&doc, expected)?;
        Ok(doc)
    })
    .await
}

async fn create_assessment(State(state): State<AppState>, body: Bytes) -> ApiResult {
    let doc: AssessmentDocument = parse_body(&body)?;
    check_document(&state, &doc)?;
    let stored = commit(&state, doc, Some(0)).await?;
    Ok(with_etag(
        json_response(StatusCode::CREATED, &stored),
        stored.revision,
    ))
}

async fn get_assessment(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let store = state.store.clone();
    let doc = blocking(move || store.get(&id)).await?;
    Ok(with_etag(json_response(StatusCode::OK, &doc), doc.revision))
}

/// The expected revision comes from `If-Match` when present, otherwise from
/// the body's own `revision` field, so a fetched-then-edited document is
/// checked against what the client last saw.
async fn put_assessment(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult {
    let doc: AssessmentDocument = parse_body(&body)?;
    if doc.id != id {
        return Err(Error::Usage {
            what: "document id (must match the URL)".into(),
            value: doc.id,
        }
        .into());
    }
    check_document(&state, &doc)?;
    let expected = if_match(&headers)?.unwrap_or(doc.revision);
    let stored = commit(&state, doc, Some(expected)).await?;
    Ok(with_etag(
        json_response(StatusCode::OK, &stored),
        stored.revision,
    ))
}

async fn delete_assessment(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> ApiResult {
    let expected = if_match(&headers)?;
    let store = state.store.clone();
    blocking(move || store.delete(&id, expected)).await?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

async fn evaluate_assignments(State(state): State<AppState>, body: Bytes) -> ApiResult {
    let request: EvaluateRequest = parse_body(&body)?;
    ok(&evaluate(&request.assignments, &state.scheme)?)
}

async fn whatif(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let adjustment: ControlAdjustment = parse_body(&body)?;
    let store = state.store.clone();
    let doc = blocking(move || store.get(&id)).await?;
    ok(&apply_adjustment(&doc, &adjustment, &state.scheme)?)
}

async fn change_status(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult {
    let request: StatusRequest = parse_body(&body)?;
    let store = state.store.clone();
    let doc = blocking(move || store.get(&id)).await?;
    let expected = request.expected_revision.unwrap_or(doc.revision);
    let next = advance_status(&doc, request.target, &state.scheme)?;
    let stored = commit(&state, next, Some(expected)).await?;
    Ok(with_etag(
        json_response(StatusCode::OK, &stored),
        stored.revision,
    ))
}

async fn matrix(
    State(state): State<AppState>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult {
    let filter = stakeholder(&query)?;
    let format: OutputFormat = match query.get("format") {
        Some(f) => f.parse()?,
        None => OutputFormat::Json,
    };
    let store = state.store.clone();
    let docs = blocking(move || store.load_all()).await?;
    let matrix = build_matrix(&state.catalog, &docs, &state.scheme, filter)?;
    Ok((
        StatusCode::OK,
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static(format.content_type()),
        )],
        render(&matrix, format),
    )
        .into_response())
}
