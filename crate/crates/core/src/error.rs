use thiserror::Error;

/// Errors produced by graph ingestion and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("no eigenvalue remains after excluding +1 and -1")]
    NoCandidate,

    #[error("branch crossing at alpha = {alpha}: best overlap {overlap:.3} is below 0.5")]
    BranchCrossing { alpha: f64, overlap: f64 },

    #[error("eigenvalue has multiplicity {0}; use the degenerate first-order analysis")]
    Degenerate(usize),

    #[error("invalid eigenbasis: {0}")]
    InvalidBasis(String),

    #[error("connectivity not achieved within {0} attempts")]
    RetriesExhausted(usize),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that come from malformed input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::InvalidParameter(_) | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
