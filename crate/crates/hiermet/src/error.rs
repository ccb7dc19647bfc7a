use hiermet_core::{CoreError, Violation};

use crate::ingest::SourceStatus;

/// Errors surfaced by the IO half of the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("payload failed validation ({} violation(s))", .0.len())]
    Violations(Vec<Violation>),

    #[error("{source_status:?}: {message}")]
    Source { source_status: SourceStatus, message: String },

    #[error("provider failure: {message}")]
    Provider {
        message: String,
        /// Raw provider output kept for diagnostics when parsing failed.
        raw: Option<String>,
    },

    #[error("unknown context key {0}")]
    UnknownKey(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("cache I/O: {0}")]
    Cache(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Other(String),
}

impl PipelineError {
    pub fn provider(message: impl Into<String>) -> Self {
        Self::Provider { message: message.into(), raw: None }
    }
}
