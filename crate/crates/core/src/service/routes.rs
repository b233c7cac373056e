use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use tower_http::cors::{Any, CorsLayer};

use crate::assessment::{validate_bank, BankDocument, Submission};
use crate::psychometrics::{reliability_report, AnalysisGranularity, ReliabilityReport, ReportConfig};
use crate::session::{export_matrix, FeedbackView, Granularity, ResponseMatrix, ScoreSummary};

use super::error::codes;
use super::views::{AttemptView, QuizSummary};
use super::{ApiError, AppState};

type Shared = Arc<AppState>;
type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: Shared, cors_origin: Option<&str>) -> Router {
    let app = Router::new()
        .route("/api/quizzes", get(list_quizzes))
        .route("/api/quizzes/{id}/attempts", post(create_attempt))
        .route("/api/attempts/{id}", get(get_attempt))
        .route("/api/attempts/{id}/answers", post(submit_answer))
        .route("/api/attempts/{id}/finalize", post(finalize))
        .route("/api/admin/banks", post(upload_bank))
        .route("/api/admin/export", get(export))
        .route("/api/admin/analysis", post(analysis))
        .with_state(state);
    match cors_origin {
        None => app,
        Some("*") => app.layer(CorsLayer::new().allow_origin(Any).allow_methods(Any).allow_headers(Any)),
        Some(origin) => match HeaderValue::from_str(origin) {
            Ok(origin) => app.layer(CorsLayer::new().allow_origin(origin).allow_methods(Any).allow_headers(Any)),
            Err(_) => app,
        },
    }
}

fn body<T>(parsed: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    parsed.map(|Json(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

async fn list_quizzes(State(state): State<Shared>) -> Json<Vec<QuizSummary>> {
    Json(state.engine.quizzes().iter().map(|q| QuizSummary::from(q.as_ref())).collect())
}

#[derive(Debug, Deserialize)]
struct CreateAttempt {
    student_id: String,
    #[serde(default)]
    seed: Option<u64>,
}

async fn create_attempt(
    State(state): State<Shared>,
    Path(quiz_id): Path<String>,
    request: Result<Json<CreateAttempt>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<AttemptView>)> {
    let request = body(request)?;
    if request.student_id.trim().is_empty() {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, codes::INVALID_REQUEST, "student_id is empty"));
    }
    let seed = request.seed.unwrap_or_else(rand::random);
    let attempt = state
        .engine
        .start_attempt(&quiz_id, &request.student_id, seed, state.clock.now())?;
    Ok((StatusCode::CREATED, Json(AttemptView::from(&attempt))))
}

async fn get_attempt(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<AttemptView>> {
    Ok(Json(AttemptView::from(&state.engine.attempt(&id)?)))
}

async fn submit_answer(
    State(state): State<Shared>,
    Path(id): Path<String>,
    submission: Result<Json<Submission>, JsonRejection>,
) -> ApiResult<Json<FeedbackView>> {
    let submission = body(submission)?;
    Ok(Json(state.engine.submit_answer(&id, submission, state.clock.now())?))
}

async fn finalize(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<ScoreSummary>> {
    Ok(Json(state.engine.finalize(&id, state.clock.now())?))
}

async fn upload_bank(State(state): State<Shared>, text: String) -> ApiResult<Json<serde_json::Value>> {
    let bank = BankDocument::parse(&text)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, codes::UNPARSEABLE_BANK, e.to_string()))?;
    let issues = validate_bank(&bank.items);
    if !issues.is_empty() {
        let detail = serde_json::to_value(&issues).expect("issues serialize");
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            codes::INVALID_BANK,
            format!("{} validation issue(s)", issues.len()),
        )
        .with_detail(detail));
    }
    let items = bank.items.len();
    state.banks.write().expect("bank table poisoned").push(bank);
    Ok(Json(serde_json::json!({ "accepted": true, "items": items })))
}

#[derive(Debug, Deserialize)]
struct ExportQuery {
    quiz: String,
    #[serde(default)]
    granularity: Granularity,
}

fn matrix_for_quiz(state: &AppState, quiz_id: &str, granularity: Granularity) -> ApiResult<ResponseMatrix> {
    let quiz = state
        .engine
        .quiz(quiz_id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, codes::UNKNOWN_QUIZ, format!("unknown quiz {quiz_id}")))?;
    Ok(export_matrix(&quiz, &state.engine.attempts_for_quiz(quiz_id), granularity)?)
}

async fn export(State(state): State<Shared>, query: Result<Query<ExportQuery>, axum::extract::rejection::QueryRejection>) -> ApiResult<impl IntoResponse> {
    let Query(query) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let matrix = matrix_for_quiz(&state, &query.quiz, query.granularity)?;
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], matrix.to_csv()))
}

#[derive(Debug, Deserialize)]
struct AnalysisRef {
    quiz: String,
    #[serde(flatten)]
    config: ReportConfig,
}

async fn analysis(
    State(state): State<Shared>,
    config: Result<Query<ReportConfig>, axum::extract::rejection::QueryRejection>,
    headers: HeaderMap,
    payload: Bytes,
) -> ApiResult<Json<ReliabilityReport>> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let (matrix, config) = if is_json {
        let request: AnalysisRef =
            serde_json::from_slice(&payload).map_err(|e| ApiError::bad_request(e.to_string()))?;
        let granularity = match request.config.granularity {
            AnalysisGranularity::ItemTotals => Granularity::ItemTotals,
            AnalysisGranularity::Fields => Granularity::WithFieldSubscores,
        };
        (matrix_for_quiz(&state, &request.quiz, granularity)?, request.config)
    } else {
        let Query(config) = config.map_err(|e| ApiError::bad_request(e.body_text()))?;
        let text = std::str::from_utf8(&payload).map_err(|e| ApiError::bad_request(e.to_string()))?;
        (ResponseMatrix::from_csv(text)?, config)
    };
    let report = tokio::task::spawn_blocking(move || reliability_report(&matrix, &config))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, codes::INTERNAL, e.to_string()))??;
    Ok(Json(report))
}
