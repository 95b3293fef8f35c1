use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 2^31)")]
    NotPrime(u64),

    #[error("field not admissible for this m: {0}")]
    NotAdmissible(String),

    #[error("inverse of zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u32, u32),

    #[error("enumeration budget exceeded: estimated cost {cost} > budget {budget}{}", context.as_ref().map(|c| format!(" ({c})")).unwrap_or_default())]
    BudgetExceeded {
        cost: u128,
        budget: u64,
        context: Option<String>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    pub(crate) fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::BudgetExceeded { cost, budget, .. } => Error::BudgetExceeded {
                cost,
                budget,
                context: Some(ctx.into()),
            },
            other => other,
        }
    }
}
