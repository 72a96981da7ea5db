use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a formula (e.g. a zero distance).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: `{field}` {reason}")]
    InvalidConfig { field: String, reason: String },

    /// Exhaustive search would need more evaluations than allowed.
    #[error(
        "oracle refused: N={n_cells}, U={users}, {levels} power levels needs {required} evaluations (budget {budget})"
    )]
    BudgetExceeded {
        n_cells: usize,
        users: usize,
        levels: usize,
        required: u128,
        budget: u64,
    },

    #[error("regression needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
