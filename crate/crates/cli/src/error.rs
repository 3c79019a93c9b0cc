use thiserror::Error;

/// Failure of a run, classified by exit status.
#[derive(Debug, Error)]
pub enum RunError {
    /// Bad configuration or arguments; nothing was computed.
    #[error("{0}")]
    Validation(String),
    /// The computation broke down (non-finite state, step bound, degenerate
    /// sampling).
    #[error("{0}")]
    Numerical(String),
    /// A checked property failed.
    #[error("{0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) | RunError::Io(_) => 1,
            RunError::Numerical(_) => 2,
            RunError::Invariant(_) => 3,
        }
    }
}

impl From<fbl_core::Error> for RunError {
    fn from(e: fbl_core::Error) -> Self {
        use fbl_core::Error as E;
        match e {
            E::NumericalFailure { .. } | E::StepTooLarge { .. } | E::DegenerateEnsemble => {
                RunError::Numerical(e.to_string())
            }
            E::Io(io) => RunError::Io(io),
            other => RunError::Validation(other.to_string()),
        }
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Io(std::io::Error::other(e))
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
