use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("degree {requested} exceeds the truncation bound {max}")]
    OutOfRange { requested: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pair is not pre-Koszul: {0}")]
    NotPreKoszul(String),
    #[error("d∘d ≠ 0 at position {position} of the {what} (internal degree {degree})")]
    NotAComplex {
        what: String,
        degree: usize,
        position: i64,
    },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("not a twisting map for these relations: {0}")]
    Descent(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("axiom {axiom} fails at {at}")]
    Axiom { axiom: String, at: String },
    #[error("σ does not restrict to the duals: {0}")]
    Restriction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
