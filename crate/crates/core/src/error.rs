use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not a prime below 256")]
    NotPrime(u32),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("operands belong to different fields ({left} vs {right})")]
    ContextMismatch { left: String, right: String },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{k} does not divide the extension degree {n}")]
    NotDivisor { k: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} needs {required} units of work but the budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("cannot parse {0}")]
    Parse(String),

    #[error("no closed form for these parameters: {0}")]
    FormulaUnavailable(String),

    #[error("internal consistency violated: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
