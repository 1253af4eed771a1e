//! Operator families on sequence spaces and their exact linear-algebraic primitives.
//!
//! Every shift uses the coordinate convention `(T x)_j = alpha_j x_{j+1}`, so
//! `(T^k x)_1 = (alpha_1 ... alpha_k) x_{k+1}`. Forward shifts are written
//! `(F x)_j = w_{j-1} x_{j-1}`, which makes the forward shift with weights
//! `alpha` the Hilbert adjoint of the backward one and the forward shift with
//! weights `1/alpha` the inverse of an invertible bilateral backward shift.

mod action;
mod derived;
mod poly;
mod space;
mod spectrum;
mod vector;
mod weights;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use action::{apply, iterate, polynomial_apply, truncation_matrix, Truncation, DEFAULT_MAX_DIM};
pub use derived::{adjoint, inverse};
pub use poly::PolynomialCoeffs;
pub use space::{IndexWindow, NormKind, SpaceTag, Support};
pub use spectrum::{
    gelfand_estimate, spectral_radius, spectrum, spectrum_meets_unit_circle, CircleAnswer, SpectralRadius, Spectrum,
    SpectrumPiece,
};
pub use vector::{SeqBlock, SeqVector};
pub use weights::{EntrySeq, WeightSeq};

use crate::error::{decode_failure, Error, Result};
use crate::scalar::{is_finite, JsonScalar, Scalar};

/// Declared (not derived) structural properties.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub compact: bool,
    #[serde(default)]
    pub positive: bool,
    #[serde(default)]
    pub hyponormal: bool,
}

impl Flags {
    fn is_default(&self) -> bool {
        *self == Flags::default()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftSpace {
    #[default]
    L2,
    Linf,
}

/// Dense square matrix stored row-major in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<JsonScalar>>", into = "Vec<Vec<JsonScalar>>")]
pub struct MatrixEntries(pub DMatrix<Scalar>);

impl TryFrom<Vec<Vec<JsonScalar>>> for MatrixEntries {
    type Error = Error;
    fn try_from(rows: Vec<Vec<JsonScalar>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(decode_failure(Error::InvalidSpec("matrix must be square and non-empty".into())));
        }
        Ok(MatrixEntries(DMatrix::from_fn(d, d, |i, j| rows[i][j].0)))
    }
}

impl From<MatrixEntries> for Vec<Vec<JsonScalar>> {
    fn from(m: MatrixEntries) -> Self {
        let m = m.0;
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| JsonScalar(m[(i, j)])).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OperatorKind {
    BackwardShiftUni {
        weights: WeightSeq,
        #[serde(default)]
        space: ShiftSpace,
    },
    BackwardShiftBi {
        weights: WeightSeq,
    },
    ForwardShiftUni {
        weights: WeightSeq,
    },
    ForwardShiftBi {
        weights: WeightSeq,
    },
    Diagonal {
        entries: EntrySeq,
        space: SpaceTag,
    },
    ScalarIdentity {
        #[serde(with = "crate::scalar::serde_scalar")]
        lambda: Scalar,
        space: SpaceTag,
    },
    /// `(A x)_m = lambda x_m + x_{m+1}` on `C^size`.
    JordanBlock {
        #[serde(with = "crate::scalar::serde_scalar")]
        lambda: Scalar,
        size: usize,
    },
    FiniteMatrix {
        entries: MatrixEntries,
    },
    DirectSum {
        components: Vec<OperatorSpec>,
    },
    PolynomialOf {
        base: Box<OperatorSpec>,
        coeffs: PolynomialCoeffs,
    },
}

#[derive(Serialize, Deserialize)]
struct RawOperator {
    #[serde(flatten)]
    kind: OperatorKind,
    #[serde(default, skip_serializing_if = "Flags::is_default")]
    flags: Flags,
}

/// A validated operator from the closed family list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOperator", into = "RawOperator")]
pub struct OperatorSpec {
    kind: OperatorKind,
    flags: Flags,
    norm_bound: f64,
}

impl TryFrom<RawOperator> for OperatorSpec {
    type Error = Error;
    fn try_from(raw: RawOperator) -> Result<Self> {
        make_operator(raw.kind, raw.flags).map_err(decode_failure)
    }
}

impl From<OperatorSpec> for RawOperator {
    fn from(op: OperatorSpec) -> Self {
        RawOperator { kind: op.kind, flags: op.flags }
    }
}

/// Validates a raw description and computes its analytic norm bound.
pub fn make_operator(kind: OperatorKind, flags: Flags) -> Result<OperatorSpec> {
    let norm_bound = validate_kind(&kind)?;
    let op = OperatorSpec { kind, flags, norm_bound };
    op.space().validate()?;
    Ok(op)
}

fn validate_kind(kind: &OperatorKind) -> Result<f64> {
    match kind {
        OperatorKind::BackwardShiftUni { weights, .. } | OperatorKind::ForwardShiftUni { weights } => {
            weights.validate(false)?;
            Ok(weights.sup(false))
        }
        OperatorKind::BackwardShiftBi { weights } | OperatorKind::ForwardShiftBi { weights } => {
            weights.validate(true)?;
            Ok(weights.sup(true))
        }
        OperatorKind::Diagonal { entries, space } => {
            entries.validate()?;
            let dim = match space {
                SpaceTag::DirectSum(_) => {
                    return Err(Error::InvalidSpec("diagonal operator needs a sequence space".into()))
                }
                SpaceTag::FiniteDim(d) => Some(*d),
                _ => None,
            };
            space.validate()?;
            Ok(entries.entry_set(dim).iter().map(|z| z.norm()).fold(0.0, f64::max))
        }
        OperatorKind::ScalarIdentity { lambda, space } => {
            if !is_finite(*lambda) {
                return Err(Error::InvalidSpec("non-finite scalar".into()));
            }
            if matches!(space, SpaceTag::DirectSum(_)) {
                return Err(Error::InvalidSpec("scalar identity needs a sequence space".into()));
            }
            space.validate()?;
            Ok(lambda.norm())
        }
        OperatorKind::JordanBlock { lambda, size } => {
            if *size == 0 {
                return Err(Error::InvalidSpec("Jordan block size must be at least 1".into()));
            }
            if !is_finite(*lambda) {
                return Err(Error::InvalidSpec("non-finite eigenvalue".into()));
            }
            Ok(lambda.norm() + 1.0)
        }
        OperatorKind::FiniteMatrix { entries } => {
            let m = &entries.0;
            if m.nrows() == 0 || m.nrows() != m.ncols() {
                return Err(decode_failure(Error::InvalidSpec("matrix must be square and non-empty".into())));
            }
            if m.iter().any(|z| !is_finite(*z)) {
                return Err(Error::InvalidSpec("non-finite matrix entry".into()));
            }
            let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
                .ok_or_else(|| Error::NumericalBreakdown("SVD of matrix failed".into()))?;
            Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
        }
        OperatorKind::DirectSum { components } => {
            if components.len() < 2 {
                return Err(Error::InvalidSpec("direct sum needs at least two components".into()));
            }
            Ok(components.iter().map(|c| c.norm_bound).fold(0.0, f64::max))
        }
        OperatorKind::PolynomialOf { base, coeffs } => {
            let n = base.norm_bound;
            Ok(coeffs.coeffs().iter().enumerate().map(|(i, c)| c.norm() * n.powi(i as i32)).sum())
        }
    }
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind) -> Result<Self> {
        make_operator(kind, Flags::default())
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }

    pub fn backward_shift(weights: WeightSeq, space: ShiftSpace) -> Result<Self> {
        OperatorSpec::new(OperatorKind::BackwardShiftUni { weights, space })
    }

    pub fn bilateral_shift(weights: WeightSeq) -> Result<Self> {
        OperatorSpec::new(OperatorKind::BackwardShiftBi { weights })
    }

    pub fn scalar_identity(lambda: Scalar, space: SpaceTag) -> Result<Self> {
        OperatorSpec::new(OperatorKind::ScalarIdentity { lambda, space })
    }

    pub fn diagonal(entries: EntrySeq, space: SpaceTag) -> Result<Self> {
        OperatorSpec::new(OperatorKind::Diagonal { entries, space })
    }

    pub fn jordan(lambda: Scalar, size: usize) -> Result<Self> {
        OperatorSpec::new(OperatorKind::JordanBlock { lambda, size })
    }

    pub fn matrix(m: DMatrix<Scalar>) -> Result<Self> {
        OperatorSpec::new(OperatorKind::FiniteMatrix { entries: MatrixEntries(m) })
    }

    pub fn direct_sum(components: Vec<OperatorSpec>) -> Result<Self> {
        OperatorSpec::new(OperatorKind::DirectSum { components })
    }

    pub fn polynomial_of(base: OperatorSpec, coeffs: PolynomialCoeffs) -> Result<Self> {
        OperatorSpec::new(OperatorKind::PolynomialOf { base: Box::new(base), coeffs })
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    /// Analytic upper bound for the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn space(&self) -> SpaceTag {
        match &self.kind {
            OperatorKind::BackwardShiftUni { space: ShiftSpace::L2, .. } | OperatorKind::ForwardShiftUni { .. } => {
                SpaceTag::UnilateralL2
            }
            OperatorKind::BackwardShiftUni { space: ShiftSpace::Linf, .. } => SpaceTag::UnilateralLinf,
            OperatorKind::BackwardShiftBi { .. } | OperatorKind::ForwardShiftBi { .. } => SpaceTag::BilateralL2,
            OperatorKind::Diagonal { space, .. } | OperatorKind::ScalarIdentity { space, .. } => space.clone(),
            OperatorKind::JordanBlock { size, .. } => SpaceTag::FiniteDim(*size),
            OperatorKind::FiniteMatrix { entries } => SpaceTag::FiniteDim(entries.0.nrows()),
            OperatorKind::DirectSum { components } => {
                SpaceTag::DirectSum(components.iter().map(OperatorSpec::space).collect())
            }
            OperatorKind::PolynomialOf { base, .. } => base.space(),
        }
    }

    pub fn components(&self) -> Option<&[OperatorSpec]> {
        match &self.kind {
            OperatorKind::DirectSum { components } => Some(components),
            _ => None,
        }
    }

    /// Weights of a backward shift (either kind), with its bilateral flag.
    pub fn backward_shift_weights(&self) -> Option<(&WeightSeq, bool)> {
        match &self.kind {
            OperatorKind::BackwardShiftUni { weights, .. } => Some((weights, false)),
            OperatorKind::BackwardShiftBi { weights } => Some((weights, true)),
            _ => None,
        }
    }

    /// Matrix of an operator on a finite-dimensional (non-sum) space.
    pub fn dense_matrix(&self) -> Option<DMatrix<Scalar>> {
        match &self.kind {
            OperatorKind::FiniteMatrix { entries } => Some(entries.0.clone()),
            OperatorKind::JordanBlock { lambda, size } => Some(DMatrix::from_fn(*size, *size, |i, j| {
                if i == j {
                    *lambda
                } else if j == i + 1 {
                    Scalar::new(1.0, 0.0)
                } else {
                    Scalar::default()
                }
            })),
            OperatorKind::Diagonal { entries, space: SpaceTag::FiniteDim(d) } => Some(DMatrix::from_fn(
                *d,
                *d,
                |i, j| if i == j { entries.entry(i as i64 + 1) } else { Scalar::default() },
            )),
            OperatorKind::ScalarIdentity { lambda, space: SpaceTag::FiniteDim(d) } => {
                Some(DMatrix::from_diagonal_element(*d, *d, *lambda))
            }
            OperatorKind::PolynomialOf { base, coeffs } => {
                let b = base.dense_matrix()?;
                let d = b.nrows();
                let mut acc = DMatrix::<Scalar>::zeros(d, d);
                for c in coeffs.coeffs().iter().rev() {
                    acc = &acc * &b + DMatrix::from_diagonal_element(d, d, *c);
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_shift_has_norm_bound_two() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        assert_eq!(op.norm_bound(), 2.0);
        assert_eq!(op.space(), SpaceTag::UnilateralL2);
    }

    #[test]
    fn negative_constant_weight_is_rejected() {
        let err = OperatorSpec::backward_shift(WeightSeq::constant(-1.0), ShiftSpace::L2).unwrap_err();
        assert_eq!(err.kind(), "NonPositiveWeight");
    }

    #[test]
    fn two_i_plus_two_b_is_valid() {
        let op = OperatorSpec::direct_sum(vec![
            OperatorSpec::scalar_identity(Scalar::new(2.0, 0.0), SpaceTag::FiniteDim(1)).unwrap(),
            OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap(),
        ])
        .unwrap();
        assert_eq!(op.norm_bound(), 2.0);
        assert_eq!(op.space(), SpaceTag::DirectSum(vec![SpaceTag::FiniteDim(1), SpaceTag::UnilateralL2]));
    }

    #[test]
    fn mixed_norm_sum_is_rejected() {
        let err = OperatorSpec::direct_sum(vec![
            OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::Linf).unwrap(),
            OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap(),
        ])
        .unwrap_err();
        assert_eq!(err, Error::MixedNormSum);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let text = r#"{"type": "backward_shift_uni", "space": "l2", "weights": {"kind": "constant", "value": 2.0}, "flags": {"compact": true}}"#;
        let op: OperatorSpec = serde_json::from_str(text).unwrap();
        assert!(op.flags().compact);
        let back: OperatorSpec = serde_json::from_str(&serde_json::to_string(&op).unwrap()).unwrap();
        assert_eq!(op, back);
        let bad = r#"{"type": "backward_shift_uni", "weights": {"kind": "constant", "value": -2.0}}"#;
        assert!(serde_json::from_str::<OperatorSpec>(bad).is_err());
    }

    #[test]
    fn nested_json_sum_and_polynomial() {
        let text = r#"{"type": "direct_sum", "components": [
            {"type": "scalar_identity", "lambda": 2, "space": {"finite_dim": 1}},
            {"type": "polynomial_of", "base": {"type": "jordan_block", "lambda": [0.5, 0.0], "size": 2}, "coeffs": [1, [0, 1]]}
        ]}"#;
        let op: OperatorSpec = serde_json::from_str(text).unwrap();
        let back: OperatorSpec = serde_json::from_str(&serde_json::to_string(&op).unwrap()).unwrap();
        assert_eq!(op, back);
        let empty =
            r#"{"type": "polynomial_of", "base": {"type": "jordan_block", "lambda": 1, "size": 2}, "coeffs": []}"#;
        assert!(serde_json::from_str::<OperatorSpec>(empty).is_err());
    }
}
