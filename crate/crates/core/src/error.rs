use num_complex::Complex64;
use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map one-to-one onto the stable machine-readable codes returned by
/// [`FwxError::code`], which the command-line tool prints in its error record.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FwxError {
    #[error("argument {0} is within pole tolerance of a non-positive integer")]
    Pole(Complex64),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("balance Delta = {delta} but Delta = -1 is required")]
    Delta { delta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid sigma: {0}")]
    Sigma(String),

    #[error("scale {scale} does not exceed 1/6")]
    Scale { scale: f64 },

    #[error("mu = {mu} is within {tol:e} of an integer")]
    IntegerMu { mu: Complex64, tol: f64 },

    #[error("tolerance {requested:e} not reached after {terms} terms (estimate {achieved:e})")]
    Tolerance {
        requested: f64,
        achieved: f64,
        terms: usize,
    },

    #[error("pole collision: exponents ({first}) and ({second}) coincide")]
    PoleCollision { first: String, second: String },

    #[error("z = {0} lies on the branch cut")]
    Cut(Complex64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl FwxError {
    pub fn code(&self) -> &'static str {
        match self {
            FwxError::Pole(_) => "pole",
            FwxError::Index(_) => "index",
            FwxError::Delta { .. } => "delta",
            FwxError::Domain(_) => "domain",
            FwxError::Shape(_) => "shape",
            FwxError::Sigma(_) => "sigma",
            FwxError::Scale { .. } => "scale",
            FwxError::IntegerMu { .. } => "integer-mu",
            FwxError::Tolerance { .. } => "tolerance",
            FwxError::PoleCollision { .. } => "pole-collision",
            FwxError::Cut(_) => "on-branch-cut",
            FwxError::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, FwxError>;
