use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("every coefficient of the maxpolynomial is -inf")]
    DegenerateAllNegInf,

    #[error("term index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("matrix of size {n} exceeds the brute-force bound {bound}")]
    SizeBound { n: usize, bound: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {0} has no finite decimal expansion")]
    NotDecimal(String),

    #[error("arithmetic overflow while scaling weights to integers")]
    Overflow,

    #[error("parametric tree invariant violated: {0}")]
    InvariantBreach(String),

    #[error("cycle with non-positive multiplicity {0}")]
    NonPositiveMultiplicity(i64),

    #[error("assignments at k={k} and k={kd} are not at adjacent terms: {reason}")]
    NotAdjacent { k: usize, kd: usize, reason: String },
}
