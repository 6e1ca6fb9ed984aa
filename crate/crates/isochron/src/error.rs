use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration at {field}: {message}")]
    Config { field: String, message: String },
    #[error("{kind}: {message}")]
    Analysis { kind: &'static str, message: String },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    pub fn analysis(kind: &'static str, err: impl std::fmt::Display) -> Self {
        CliError::Analysis { kind, message: err.to_string() }
    }

    /// 2 for configuration problems, 3 for everything that fails afterwards.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Analysis { .. } | CliError::Output { .. } => 3,
        }
    }

    /// Machine-readable form written to standard error.
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Config { field, message } => {
                json!({"error": "config_invalid", "field": field, "message": message})
            }
            CliError::Analysis { kind, message } => json!({"error": "analysis_error", "kind": kind, "message": message}),
            CliError::Output { path, source } => {
                json!({"error": "analysis_error", "kind": "output", "path": path, "message": source.to_string()})
            }
        }
    }
}
