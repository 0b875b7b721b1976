//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {0} out of range (tensors have modes 0..4)")]
    InvalidMode(usize),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("shape invalid: {0}")]
    InvalidShape(String),

    #[error("rank {rank} out of range for a {rows}x{cols} matrix")]
    RankOutOfRange {
        rank: usize,
        rows: usize,
        cols: usize,
    },

    #[error("rank vector invalid: {0}")]
    InvalidRank(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget of {budget} elements is infeasible; minimal feasible total is {min_required} elements")]
    InfeasibleBudget { budget: u64, min_required: u64 },

    #[error("selection instance too large for exhaustive enumeration ({combinations} combinations, limit {limit})")]
    InstanceTooLarge { combinations: u128, limit: u128 },
}
