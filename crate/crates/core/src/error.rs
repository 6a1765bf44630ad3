use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("assignment is not surjective: category {missing} is never used")]
    NotSurjective { missing: usize },

    #[error("expected length {expected}, got {got}")]
    BadLength { expected: usize, got: usize },

    #[error("category index {index} out of range for rho = {rho}")]
    BadCategory { index: usize, rho: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("mismatched parameters: {0}")]
    Mismatch(String),

    #[error("budget exceeded: estimated {estimate} exceeds budget {budget}")]
    BudgetExceeded { estimate: String, budget: u64 },

    #[error("no witness vector sends object {object} to category {category}")]
    NoWitness { object: usize, category: usize },

    #[error("map p_i -> alpha_(x_i)(p_i, ..., p_i) is not a bijection: {0}")]
    NotABijection(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("claim hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("document claims validity but the tables fail it: {0}")]
    NotSurjectiveTable(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid-params",
            Error::NotSurjective { .. } => "not-surjective",
            Error::BadLength { .. } => "bad-length",
            Error::BadCategory { .. } => "bad-category",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::NotAPermutation(_) => "not-a-permutation",
            Error::Mismatch(_) => "mismatch",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::NoWitness { .. } => "no-witness",
            Error::NotABijection(_) => "not-a-bijection",
            Error::PreconditionFailed(_) => "precondition-failed",
            Error::VerificationFailed(_) => "verification-failed",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::Schema { .. } => "schema",
            Error::NotSurjectiveTable(_) => "not-surjective-table",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
