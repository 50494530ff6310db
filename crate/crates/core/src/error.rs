use thiserror::Error;

/// Errors raised by ring, polynomial, space, and distribution operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different rings ({left} vs {right})")]
    MismatchedRing { left: String, right: String },

    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("{0} is not a field")]
    NotAField(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// `required` is the closed-form operation count of the refused computation.
    #[error("budget exceeded: {what} needs {required} evaluations, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u64,
    },

    #[error("parse error at position {position}: expected {expected} in {input:?}")]
    Parse {
        input: String,
        position: usize,
        expected: String,
    },

    #[error("goodness-of-fit needs at least 2 bins after merging, got {0}")]
    TooFewBins(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on polynomial evaluations for exhaustive paths.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Operation budget checked up front against closed-form cost estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget(u64::MAX)
    }

    pub fn check(&self, what: &str, required: Option<u128>) -> Result<()> {
        match required {
            Some(r) if r <= self.0 as u128 => Ok(()),
            _ => Err(Error::BudgetExceeded {
                what: what.to_string(),
                required: required.unwrap_or(u128::MAX),
                budget: self.0,
            }),
        }
    }

    pub fn allows(&self, required: Option<u128>) -> bool {
        matches!(required, Some(r) if r <= self.0 as u128)
    }
}

/// `base^exp` as a checked `u128`, `None` on overflow.
pub(crate) fn checked_pow(base: u64, exp: u64) -> Option<u128> {
    let exp = u32::try_from(exp).ok()?;
    (base as u128).checked_pow(exp)
}
