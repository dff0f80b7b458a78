use std::path::Path;

use thiserror::Error;

/// Failures with a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed ({reason}): {detail}")]
    Precondition { reason: String, detail: String },
    #[error("{failed} verification criteria failed")]
    Verification { failed: usize },
}

impl CliError {
    pub fn precondition(reason: &str, detail: impl Into<String>) -> Self {
        CliError::Precondition {
            reason: reason.to_string(),
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition { .. } => 3,
        }
    }

    /// Short machine-readable tag.
    pub fn reason(&self) -> &str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Precondition { reason, .. } => reason,
            CliError::Verification { .. } => "verification",
        }
    }

    pub(crate) fn with_origin(self, path: &Path) -> Self {
        match self {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        }
    }
}
