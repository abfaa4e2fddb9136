use thiserror::Error;

/// Failures of the exact polynomial layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("{c} is not a positive power of the characteristic {p}")]
    NotPrimePower { c: u64, p: u64 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected {expected} exponents, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{0} of the zero polynomial is undefined")]
    ZeroPolynomial(&'static str),
    #[error("term with exponent {exponent:?} is not divisible by the divisor")]
    NotDivisible { exponent: Vec<u32> },
    #[error("series has no invertible constant term")]
    NotInvertible,
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

/// A syntax error in polynomial text, with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Failures above the polynomial layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid inseparable form: {0}")]
    InvalidForm(String),
    #[error("invalid blowup step: {0}")]
    InvalidStep(String),
    #[error("state already left the equiconstant locus at step {0}")]
    Terminated(usize),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("invalid script: {0}")]
    Script(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
