use std::io;

use epr_dds_core::Error as ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed JSON input: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },

    #[error("worker pool: {0}")]
    Pool(String),
}

impl CliError {
    /// 2 for anything the caller can fix by changing the invocation, 1 otherwise.
    pub fn exit_status(&self) -> u8 {
        let usage = match self {
            Self::Usage(_) | Self::Json(_) => true,
            Self::Model(e) => matches!(
                e,
                ModelError::InvalidParameter { .. }
                    | ModelError::ThetaOutOfRange(_)
                    | ModelError::NoPurification { .. }
                    | ModelError::InvalidEnsemble(_)
                    | ModelError::EmptySample
                    | ModelError::InvalidRange(_)
                    | ModelError::InvalidQuadratureSpec(_)
                    | ModelError::QuadratureBudget { .. }
            ),
            _ => false,
        };
        if usage {
            2
        } else {
            1
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
