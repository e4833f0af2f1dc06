use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("working precision must be at least 1, got {0}")]
    InvalidPrecision(u32),

    #[error("p-adic context mismatch: {0}")]
    ContextMismatch(String),

    #[error("division by a value that is zero to precision")]
    DivisionByZero,

    /// A series or power was evaluated outside its domain of convergence.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("branch exponent {branch} is odd (weight space only has even branches, p = {p})")]
    OddBranch { p: u64, branch: i64 },

    #[error("pole of the trivial branch requested at s = 1")]
    Pole,

    #[error("precision budget exceeded: {0}")]
    PrecisionBudget(String),

    #[error("Bernoulli index {n} exceeds the ceiling {ceiling}")]
    AboveCeiling { n: usize, ceiling: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal check failed: {0}")]
    InternalCheck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidPrime(_)
            | Error::InvalidPrecision(_)
            | Error::Inadmissible(_)
            | Error::OddBranch { .. }
            | Error::Pole
            | Error::AboveCeiling { .. }
            | Error::Parse(_)
            | Error::Domain(_) => 2,
            Error::PrecisionBudget(_) => 3,
            Error::InternalCheck(_) | Error::ContextMismatch(_) | Error::DivisionByZero => 4,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }
}
