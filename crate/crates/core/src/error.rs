use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),

    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),

    #[error("no atoms declared")]
    NoAtoms,

    #[error("{count} atoms exceed the supported maximum of {max}")]
    TooManyAtoms { count: usize, max: usize },

    #[error("antecedent `{0}` is impossible")]
    ImpossibleAntecedent(String),

    #[error("empty family of conditional events")]
    EmptyFamily,

    #[error("{count} constituents exceed the limit of {limit}")]
    TooManyConstituents { count: usize, limit: usize },

    #[error("{got} probabilities given for {expected} conditional events")]
    LengthMismatch { expected: usize, got: usize },

    #[error("probability {} is outside [0, 1]", crate::rational::format_rational(.0))]
    OutOfRange(Rational),

    #[error("operator needs at least one argument")]
    EmptyArguments,

    #[error("Hamacher parameter must be nonnegative")]
    NegativeLambda,

    #[error("base assessment is incoherent")]
    IncoherentAssessment,

    #[error("knowledge base is not p-consistent")]
    NotPConsistent,

    #[error("premise probabilities must be nondecreasing along a Goodman-Nguyen chain")]
    NotMonotoneChain,

    #[error("invalid derangement: {0}")]
    InvalidDerangement(String),

    #[error("{0}")]
    Invalid(String),
}
