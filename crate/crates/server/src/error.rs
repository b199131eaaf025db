use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use llmrisk_core::{Error, Issue};
use serde::{Deserialize, Serialize};

/// Error body returned by every failing endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<Issue>,
    #[serde(skip)]
    status: u16,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            code: code.to_string(),
            message: message.into(),
            locus: None,
            issues: Vec::new(),
            status: status.as_u16(),
        }
    }

    pub fn status(&self) -> StatusCode {
        StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR)
    }
}

pub fn status_for(code: &str) -> StatusCode {
    match code {
        "not_found" => StatusCode::NOT_FOUND,
        "version_conflict" => StatusCode::CONFLICT,
        "sequencing" | "guard_unmet" | "ambiguous_assessment" | "unknown_threat" => {
            StatusCode::UNPROCESSABLE_ENTITY
        }
        "io_failure" => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let code = err.code();
        let issues = match &err {
            Error::InvalidDocument(issues) | Error::InvalidScheme(issues) => issues.clone(),
            _ => Vec::new(),
        };
        ApiError {
            code: code.to_string(),
            message: err.to_string(),
            locus: err.locus(),
            issues,
            status: status_for(code).as_u16(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.status().is_server_error() {
            tracing::error!(code = %self.code, "{}", self.message);
        }
        crate::routes::json_response(self.status(), &self)
    }
}
