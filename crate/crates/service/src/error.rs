//! Error-to-response mapping. Every failure leaves as JSON `{ "error": ... }`
//! with a class the client can translate back into an exit code.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use vizfilter_api::{ApiError, ApiErrorClass, ErrorBody};
use vizfilter_core::{Error, ErrorClass};

#[derive(Debug)]
pub struct ApiFailure {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiFailure {
    pub fn new(status: StatusCode, class: ApiErrorClass, message: impl Into<String>) -> Self {
        ApiFailure {
            status,
            body: ErrorBody {
                error: ApiError {
                    class,
                    message: message.into(),
                    offset: None,
                    suggestions: Vec::new(),
                },
            },
        }
    }

    /// Usage problems in the request itself (missing fields and the like).
    pub fn usage(message: impl Into<String>) -> Self {
        ApiFailure::new(StatusCode::BAD_REQUEST, ApiErrorClass::Library, message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiFailure::new(StatusCode::NOT_FOUND, ApiErrorClass::Library, message)
    }

    pub fn conflict(message: impl Into<String>) -> Self {
        ApiFailure::new(StatusCode::CONFLICT, ApiErrorClass::Library, message)
    }

    pub fn llm(message: impl Into<String>) -> Self {
        ApiFailure::new(StatusCode::BAD_GATEWAY, ApiErrorClass::Llm, message)
    }
}

impl From<Error> for ApiFailure {
    fn from(e: Error) -> Self {
        let status = match e.class() {
            ErrorClass::Syntax | ErrorClass::Scene => StatusCode::BAD_REQUEST,
            ErrorClass::UnsupportedTarget => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorClass::Library => StatusCode::BAD_REQUEST,
            ErrorClass::Llm => StatusCode::BAD_GATEWAY,
            ErrorClass::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let (offset, suggestions) = match &e {
            Error::Syntax { offset, .. } => (Some(*offset), Vec::new()),
            Error::UnknownTarget { suggestions, .. } => (None, suggestions.clone()),
            _ => (None, Vec::new()),
        };
        ApiFailure {
            status,
            body: ErrorBody {
                error: ApiError {
                    class: e.class().into(),
                    message: e.to_string(),
                    offset,
                    suggestions,
                },
            },
        }
    }
}

impl IntoResponse for ApiFailure {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
