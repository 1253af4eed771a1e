use std::cell::RefCell;

use serde::de::DeserializeOwned;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight or entry {value} at index {index} is not positive")]
    NonPositiveWeight { index: i64, value: f64 },
    #[error("weight sequence is unbounded: {0}")]
    UnboundedWeights(String),
    #[error("direct sum mixes l2 and sup-norm components")]
    MixedNormSum,
    #[error("polynomial has no coefficients or a zero leading coefficient")]
    EmptyPolynomial,
    #[error("invalid operator description: {0}")]
    InvalidSpec(String),
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },
    #[error("window of {requested} coordinates exceeds the configured maximum {max}")]
    WindowOverflow { requested: usize, max: usize },
    #[error("adjoint is only defined on Hilbert (l2) spaces")]
    NoAdjointForSupNorm,
    #[error("operator is not invertible: {0}")]
    NotInvertible(String),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("secular iteration did not converge after {iterations} steps")]
    NonConvergence { iterations: usize },
    #[error("operator is not a weighted backward shift")]
    NotAShift,
    #[error("sup-norm reachability is only available for shift operators")]
    UnsupportedNorm,
    #[error("delta level {level} (delta = {delta}) did not reach the acceptance threshold")]
    NotCertifiable { level: usize, delta: f64 },
    #[error("modulus {0} must exceed 1")]
    BadModulus(f64),
    #[error("operator spectrum is not contained in the exterior of the unit disk")]
    NotExpanding,
    #[error("regular orbit has no point at index {0}")]
    IndexMismatch(u64),
    #[error("scale factor must be non-zero")]
    ZeroScale,
    #[error("diagonal extraction failed at witness {0}")]
    DiagonalFailure(usize),
    #[error("need at least {needed} pairs, found {found}")]
    InsufficientPairs { needed: usize, found: usize },
    #[error("operator does not act on a finite-dimensional space")]
    NotFiniteDim,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("unknown gallery case `{0}`")]
    UnknownCase(String),
    #[error("degenerate logistic seed: {0}")]
    DegenerateSeed(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::UnboundedWeights(_) => "UnboundedWeights",
            Error::MixedNormSum => "MixedNormSum",
            Error::EmptyPolynomial => "EmptyPolynomial",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::InvalidVector(_) => "InvalidVector",
            Error::SpaceMismatch { .. } => "SpaceMismatch",
            Error::WindowOverflow { .. } => "WindowOverflow",
            Error::NoAdjointForSupNorm => "NoAdjointForSupNorm",
            Error::NotInvertible(_) => "NotInvertible",
            Error::NumericalBreakdown(_) => "NumericalBreakdown",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::NotAShift => "NotAShift",
            Error::UnsupportedNorm => "UnsupportedNorm",
            Error::NotCertifiable { .. } => "NotCertifiable",
            Error::BadModulus(_) => "BadModulus",
            Error::NotExpanding => "NotExpanding",
            Error::IndexMismatch(_) => "IndexMismatch",
            Error::ZeroScale => "ZeroScale",
            Error::DiagonalFailure(_) => "DiagonalFailure",
            Error::InsufficientPairs { .. } => "InsufficientPairs",
            Error::NotFiniteDim => "NotFiniteDim",
            Error::PreconditionUnmet(_) => "PreconditionUnmet",
            Error::UnknownCase(_) => "UnknownCase",
            Error::DegenerateSeed(_) => "DegenerateSeed",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

thread_local! {
    static DECODE_FAILURE: RefCell<Option<Error>> = const { RefCell::new(None) };
}

/// Records the first domain error raised while validating during a decode.
pub(crate) fn decode_failure(e: Error) -> Error {
    DECODE_FAILURE.with(|slot| {
        slot.borrow_mut().get_or_insert_with(|| e.clone());
    });
    e
}

/// Decodes JSON, returning the domain error when validation rejected a
/// value and `InvalidSpec` for malformed structure.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    DECODE_FAILURE.with(|slot| slot.borrow_mut().take());
    let out = serde_json::from_str(text);
    let recorded = DECODE_FAILURE.with(|slot| slot.borrow_mut().take());
    out.map_err(|e| recorded.unwrap_or_else(|| Error::InvalidSpec(e.to_string())))
}
