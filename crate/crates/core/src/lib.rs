//! Numerical laboratory for extended limit sets of linear operators.

// Negated comparisons reject NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod criteria;
pub mod error;
pub mod gallery;
pub mod operator;
pub mod reach;
pub mod scalar;
pub mod witness;

pub use config::RunConfig;
pub use error::{from_json, Error, Result};
pub use scalar::Scalar;
