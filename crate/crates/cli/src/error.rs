//! Error type with the process exit-code mapping.

use std::path::PathBuf;

use rlnc_broadcast::analysis::AnalysisError;
use rlnc_broadcast::engine::EngineError;
use thiserror::Error;

/// Exit codes: 2 invalid configuration, 3 infeasible query, 4 I/O failure.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("infeasible query: {0}")]
    Infeasible(String),

    #[error("I/O failure at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::InvalidConfig(_) => 2,
            HarnessError::Infeasible(_) => 3,
            HarnessError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<AnalysisError> for HarnessError {
    fn from(err: AnalysisError) -> Self {
        match err {
            AnalysisError::NoAdmissibleWindow { .. } => HarnessError::Infeasible(err.to_string()),
            _ => HarnessError::InvalidConfig(err.to_string()),
        }
    }
}

impl From<EngineError> for HarnessError {
    fn from(err: EngineError) -> Self {
        HarnessError::InvalidConfig(err.to_string())
    }
}
