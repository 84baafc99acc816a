use std::io;
use std::path::PathBuf;

use monolab::MonolabError;
use serde_json::json;
use thiserror::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISPATCH: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] MonolabError),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("{failed} verification row(s) failed")]
    VerifyFailed { failed: usize },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                MonolabError::NotComputable(_)
                | MonolabError::TwoQubitOnly(_)
                | MonolabError::WeightUndefined
                | MonolabError::NotEntanglementTriple(_)
                | MonolabError::Incomparable(_)
                | MonolabError::DimensionCap { .. } => EXIT_DISPATCH,
                _ => EXIT_INPUT,
            },
            CliError::Usage(_) | CliError::Read { .. } | CliError::Write { .. } => EXIT_INPUT,
            CliError::VerifyFailed { .. } => EXIT_VERIFY,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_DISPATCH => "dispatch_error",
            EXIT_VERIFY => "verification_failed",
            _ => "input_error",
        }
    }

    /// Single-line JSON written to stderr on failure.
    pub fn to_json(&self) -> String {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}
