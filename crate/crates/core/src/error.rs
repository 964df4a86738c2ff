use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("module mismatch: {0}")]
    ModuleMismatch(String),

    #[error("degree mismatch: expected {expected}, found {found} ({context})")]
    DegreeMismatch { expected: i64, found: i64, context: String },

    #[error("non-homogeneous entry: {0}")]
    NonHomogeneous(String),

    #[error("bracket table: {0}")]
    BracketTable(String),

    #[error("weight {weight} exceeds the truncation weight {max}")]
    WeightOverflow { weight: usize, max: usize },

    #[error("invalid contraction: first failure {}", .0.first_failure_label())]
    InvalidContraction(Report),

    #[error("invalid dg Lie algebra: first failure {}", .0.first_failure_label())]
    InvalidDgla(Report),

    #[error("not square zero: first failing word {0}")]
    NotSquareZero(String),

    #[error("operator does not lower the filtration: {0}")]
    NotFiltrationLowering(String),

    #[error("operator is not unitriangular: {0}")]
    NotUnitriangular(String),

    #[error("transfer step {requested} requested but next step is {expected}")]
    OutOfOrder { requested: usize, expected: usize },

    #[error("stage {stage} out of range (available 1..={max})")]
    StageOutOfRange { stage: usize, max: usize },

    #[error("maximum weight must be at least {min}, got {got}")]
    MaxWeight { min: usize, got: usize },
}
