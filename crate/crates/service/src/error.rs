use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use serde::Serialize;
use serde_json::{json, Value};

use fahp_core::consistency::ConsistencyError;
use fahp_core::engine::EngineError;
use fahp_core::model::ModelError;
use fahp_core::session::{SessionError, StoreError};

use crate::json_response;

/// Error body shared by every non-2xx response.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            details: None,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn malformed_body(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "malformed-body", message)
    }

    pub fn invalid_query(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid-query", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, &self)
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let message = e.to_string();
        match e {
            SessionError::Parse(_) => Self::malformed_body(message),
            SessionError::Version(_) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "unsupported-version",
                message,
            ),
            SessionError::Validation(violations) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "validation-failed",
                message,
            )
            .with_details(json!({ "violations": violations })),
            SessionError::Storage { .. } => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "storage-error", message)
            }
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(id) => Self::new(
                StatusCode::NOT_FOUND,
                "session-not-found",
                format!("no session with id {id}"),
            ),
            StoreError::Session(inner) => inner.into(),
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let message = e.to_string();
        match e {
            EngineError::UnknownNode(_) => {
                Self::new(StatusCode::NOT_FOUND, "node-not-found", message)
            }
            EngineError::Incomplete(missing) => {
                Self::new(StatusCode::CONFLICT, "incomplete-judgments", message)
                    .with_details(json!({ "missing": missing }))
            }
            EngineError::PrecomputedNode(_) => {
                Self::new(StatusCode::CONFLICT, "precomputed-node", message)
            }
            EngineError::InvalidPrecomputed { .. } => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "invalid-precomputed",
                message,
            ),
            EngineError::Matrix(_) | EngineError::Fuzzy(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-matrix", message)
            }
            EngineError::Consistency(ConsistencyError::UnsupportedOrder(_)) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "unsupported-order",
                message,
            ),
            EngineError::Consistency(_) => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "no-convergence", message)
            }
            EngineError::Model(ModelError::UnknownCriterion(_)) => {
                Self::new(StatusCode::NOT_FOUND, "criterion-not-found", message)
            }
            EngineError::Model(ModelError::GridOutOfRange(_) | ModelError::EmptyGrid) => {
                Self::invalid_query(message)
            }
            EngineError::Model(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "model-error", message)
            }
        }
    }
}
