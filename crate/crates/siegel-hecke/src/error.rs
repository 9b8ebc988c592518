use thiserror::Error;

/// Errors raised by the library. Budget exhaustion is kept apart from
/// mathematical failure so callers can report "inconclusive".
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("prime {p} divides the level {level}")]
    BadPrime { p: u64, level: u64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("enumeration budget of {budget} nodes exhausted in {context}")]
    NodeBudget { context: &'static str, budget: u64 },
    #[error("isometry search budget of {budget} nodes exhausted")]
    IsometryBudget { budget: u64 },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for the outcomes that mean "ran out of budget" rather than "wrong".
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::NodeBudget { .. } | Error::IsometryBudget { .. } | Error::Capacity(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
