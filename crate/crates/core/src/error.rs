use thiserror::Error;

use crate::linalg::ExactMatrix;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures while reading scalar, polynomial or JSON input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("invalid scalar `{0}`")]
    Scalar(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid polynomial `{input}`: {message}")]
    Polynomial { input: String, message: String },
    #[error("unknown variable `{name}` (declared: {declared})")]
    UnknownVariable { name: String, declared: String },
    #[error("invalid input: {0}")]
    Schema(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// Zero-based indices; displayed one-based.
    #[error("NotCommuting({}, {}): commutator {commutator}", .i + 1, .j + 1)]
    NotCommuting { i: usize, j: usize, commutator: ExactMatrix },

    #[error("RelationViolated: `{relation}` evaluates to {residual}")]
    RelationViolated { relation: String, residual: ExactMatrix },

    #[error("DegreeCapExceeded: degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("NotSquareZero({}): square is {square}", .index + 1)]
    NotSquareZero { index: usize, square: ExactMatrix },

    #[error("NoRelation: Krylov vectors stay independent up to order {max_order}")]
    NoRelation { max_order: usize },

    #[error("UnknownTarget `{0}`")]
    UnknownTarget(String),

    #[error("SingularConjugator")]
    SingularConjugator,

    #[error("rank must be positive")]
    ZeroRank,

    #[error("empty matrix tuple")]
    EmptyTuple,

    #[error("operation requires a commutative target, `{0}` is noncommutative")]
    NonCommutativeTarget(String),

    #[error("parameter {t} outside the declared window [{lo}, {hi}]")]
    OutsideWindow { t: String, lo: String, hi: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("numeric layer failure: {0}")]
    Numeric(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Whether the error reports input that parsed but failed validation.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Parse(_) | Error::Numeric(_) | Error::Internal(_))
    }
}
