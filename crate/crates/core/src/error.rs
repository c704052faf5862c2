use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{a} is not invertible modulo {q}")]
    NonInvertible { a: i64, q: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("no convergence: estimated error {err:.3e} above tolerance {tol:.3e}")]
    NoConvergence { err: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("phase has no stationary point in the interval")]
    NoStationaryPoint,

    #[error("phase has more than one stationary point in the interval")]
    MultipleStationaryPoints,

    #[error("Hessian condition failed: {0}")]
    HessianConditionFailed(String),

    #[error("argument within {dist:.3e} of a gamma pole")]
    NearPole { dist: f64 },

    #[error("contour tail {tail:.3e} exceeds tolerance {tol:.3e}")]
    TailTooLarge { tail: f64, tol: f64 },

    #[error("truncation estimate {estimate:.3e} exceeds tolerance {tol:.3e}")]
    TruncationTooSmall { estimate: f64, tol: f64 },

    #[error("terms do not cross: all move the same way in K")]
    NoCrossing,

    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
