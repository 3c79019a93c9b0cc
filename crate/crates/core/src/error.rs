use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("zero-mode rule `identity` is invalid for a symbol that is {0} at the origin")]
    ZeroModeRule(&'static str),
    #[error("field is not mean-free (zero mode {0:e})")]
    NotMeanFree(f64),
    #[error("{what} index {index} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        index: i64,
        lo: i64,
        hi: i64,
    },
    #[error("velocity is not divergence-free (relative divergence {0:e})")]
    NotDivergenceFree(f64),
    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("numerical failure at t = {time}: {detail}")]
    NumericalFailure { time: f64, detail: String },
    #[error("{0}")]
    Constraint(String),
    #[error("degenerate ensemble: every sampled right-hand side underflowed")]
    DegenerateEnsemble,
    #[error("malformed snapshot: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
