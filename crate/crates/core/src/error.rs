use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EsError {
    /// An exact product or sum left the representable range.
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A constructor produced something that is not a solution. Always a bug.
    #[error("({x}, {y}, {z}) does not satisfy 4/{n} = 1/x + 1/y + 1/z")]
    NotASolution { n: u64, x: u64, y: u64, z: u64 },

    /// A structural property every prime-denominator solution must have was violated.
    #[error("invariant violated for p = {p}: {what}")]
    InvariantViolation { p: u64, what: String },

    /// Every existence route came back empty.
    #[error("no solution found for {0}: every route exhausted")]
    NoSolution(u64),

    /// A census run failed at one prime.
    #[error("p = {p}: {source}")]
    AtPrime { p: u64, source: Box<EsError> },

    #[error("census store: {0}")]
    Store(String),

    #[error("census store mismatch: {0}")]
    StoreMismatch(String),
}

pub type Result<T> = std::result::Result<T, EsError>;

impl From<std::io::Error> for EsError {
    fn from(err: std::io::Error) -> Self {
        EsError::Store(err.to_string())
    }
}
