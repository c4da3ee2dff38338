use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),

    #[error("invalid multidegree: {0}")]
    InvalidMultiDegree(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A characteristic number came out non-integral. Valid input never triggers this.
    #[error("internal consistency failure: {what} = {value} is not an integer")]
    NonIntegral { what: String, value: String },

    #[error("search budget of {budget} candidates exceeded after partition {last_completed_partition:?}")]
    BudgetExceeded {
        budget: usize,
        last_completed_partition: Option<usize>,
    },
}
