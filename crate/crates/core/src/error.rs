use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("constant term must be {expected}, found {found}")]
    ConstantTerm { expected: String, found: String },

    #[error("not a Lyndon word: {0}")]
    NotLyndon(String),

    #[error("element is not a Lie polynomial (leading word {0} is not Lyndon)")]
    NotLie(String),

    #[error("power series known through degree {known} but degree {needed} is required")]
    NonTruncating { known: usize, needed: usize },

    #[error("degree must be at least {min}, got {got}")]
    Degree { min: usize, got: usize },

    #[error("norm guard violated: {what} = {value} exceeds {bound}")]
    NormGuard {
        what: String,
        value: f64,
        bound: f64,
    },

    #[error("Jacobian determinant j = {0} is not positive")]
    NonPositiveJ(f64),

    #[error("invalid structure constants: {0}")]
    Structure(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("element is not ad-invariant: {0}")]
    NotInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
