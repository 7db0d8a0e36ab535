use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a point of an n-simplex (n >= 2) needs at least 3 coordinates, got {0}")]
    TooFewCoordinates(usize),

    #[error("barycentric coordinates sum to {sum}, expected 1")]
    BadSum { sum: f64 },

    #[error("point is not interior: coordinate {index} is {value}, outside (0, 1)")]
    NotInterior { index: usize, value: f64 },

    #[error("index {index} out of range for {len} coordinates")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: String },

    #[error("invalid configuration n = {n}, k = {k}: the bound requires 1 < k < n")]
    InvalidConfig { n: usize, k: usize },

    #[error("degenerate simplex: normalized volume {0:e} is below the threshold")]
    DegenerateSimplex(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed checkpoint line {line}: {reason}")]
    Checkpoint { line: usize, reason: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the caller's input rather than by computation or I/O.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::Internal(_) | Error::Io(_) | Error::Checkpoint { .. }
        )
    }
}
