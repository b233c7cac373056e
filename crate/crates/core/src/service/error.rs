use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

use crate::psychometrics::StatsError;
use crate::session::SessionError;

/// Stable error codes returned in `ApiError::code`.
pub mod codes {
    pub const UNKNOWN_QUIZ: &str = "UNKNOWN_QUIZ";
    pub const UNKNOWN_ATTEMPT: &str = "UNKNOWN_ATTEMPT";
    pub const UNKNOWN_ITEM: &str = "UNKNOWN_ITEM";
    pub const ATTEMPT_LIMIT: &str = "ATTEMPT_LIMIT";
    pub const ATTEMPT_NOT_ACTIVE: &str = "ATTEMPT_NOT_ACTIVE";
    pub const TIME_EXPIRED: &str = "TIME_EXPIRED";
    pub const ALREADY_FINALIZED: &str = "ALREADY_FINALIZED";
    pub const INVALID_SUBMISSION: &str = "INVALID_SUBMISSION";
    pub const UNPARSEABLE_BANK: &str = "UNPARSEABLE_BANK";
    pub const INVALID_BANK: &str = "INVALID_BANK";
    pub const INVALID_REQUEST: &str = "INVALID_REQUEST";
    pub const INVALID_MATRIX: &str = "INVALID_MATRIX";
    pub const ANALYSIS_FAILED: &str = "ANALYSIS_FAILED";
    pub const STORAGE: &str = "STORAGE";
    pub const INTERNAL: &str = "INTERNAL";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
    #[serde(skip)]
    pub status: u16,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            code: code.to_string(),
            message: message.into(),
            detail: None,
            status: status.as_u16(),
        }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, codes::INVALID_REQUEST, message)
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        use SessionError::*;
        let (status, code) = match &e {
            UnknownQuiz(_) => (StatusCode::NOT_FOUND, codes::UNKNOWN_QUIZ),
            UnknownAttempt(_) => (StatusCode::NOT_FOUND, codes::UNKNOWN_ATTEMPT),
            UnknownItem(_) => (StatusCode::NOT_FOUND, codes::UNKNOWN_ITEM),
            AttemptLimitReached { .. } => (StatusCode::CONFLICT, codes::ATTEMPT_LIMIT),
            AttemptNotActive(_) => (StatusCode::CONFLICT, codes::ATTEMPT_NOT_ACTIVE),
            TimeExpired(_) => (StatusCode::CONFLICT, codes::TIME_EXPIRED),
            AlreadyFinalized(_) => (StatusCode::CONFLICT, codes::ALREADY_FINALIZED),
            Grade(_) => (StatusCode::UNPROCESSABLE_ENTITY, codes::INVALID_SUBMISSION),
            InvalidQuiz(_) | Generation(_) => (StatusCode::UNPROCESSABLE_ENTITY, codes::INVALID_REQUEST),
            Matrix(_) => (StatusCode::UNPROCESSABLE_ENTITY, codes::INVALID_MATRIX),
            Store(_) | Replay(_) => (StatusCode::INTERNAL_SERVER_ERROR, codes::STORAGE),
        };
        Self::new(status, code, e.to_string())
    }
}

impl From<StatsError> for ApiError {
    fn from(e: StatsError) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, codes::ANALYSIS_FAILED, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}
