//! Family-level adjoints and inverses.

use super::{make_operator, Flags, MatrixEntries, OperatorKind, OperatorSpec, ShiftSpace, SpaceTag};
use crate::error::{Error, Result};

/// Hilbert adjoint. Only compactness survives as a declared flag.
pub fn adjoint(op: &OperatorSpec) -> Result<OperatorSpec> {
    if !op.space().is_hilbert() {
        return Err(Error::NoAdjointForSupNorm);
    }
    let kind = match op.kind() {
        OperatorKind::BackwardShiftUni { weights, space: ShiftSpace::L2 } => {
            OperatorKind::ForwardShiftUni { weights: weights.clone() }
        }
        OperatorKind::BackwardShiftUni { space: ShiftSpace::Linf, .. } => return Err(Error::NoAdjointForSupNorm),
        OperatorKind::ForwardShiftUni { weights } => {
            OperatorKind::BackwardShiftUni { weights: weights.clone(), space: ShiftSpace::L2 }
        }
        OperatorKind::BackwardShiftBi { weights } => OperatorKind::ForwardShiftBi { weights: weights.clone() },
        OperatorKind::ForwardShiftBi { weights } => OperatorKind::BackwardShiftBi { weights: weights.clone() },
        OperatorKind::Diagonal { entries, space } => {
            OperatorKind::Diagonal { entries: entries.conj(), space: space.clone() }
        }
        OperatorKind::ScalarIdentity { lambda, space } => {
            OperatorKind::ScalarIdentity { lambda: lambda.conj(), space: space.clone() }
        }
        OperatorKind::JordanBlock { .. } | OperatorKind::FiniteMatrix { .. } => {
            let m = op.dense_matrix().expect("finite family");
            OperatorKind::FiniteMatrix { entries: MatrixEntries(m.adjoint()) }
        }
        OperatorKind::DirectSum { components } => {
            OperatorKind::DirectSum { components: components.iter().map(adjoint).collect::<Result<_>>()? }
        }
        OperatorKind::PolynomialOf { base, coeffs } => {
            OperatorKind::PolynomialOf { base: Box::new(adjoint(base)?), coeffs: coeffs.conj() }
        }
    };
    make_operator(kind, Flags { compact: op.flags().compact, ..Flags::default() })
}

/// Inverse within the family list.
pub fn inverse(op: &OperatorSpec) -> Result<OperatorSpec> {
    let kind = match op.kind() {
        OperatorKind::BackwardShiftUni { .. } | OperatorKind::ForwardShiftUni { .. } => {
            return Err(Error::NotInvertible("unilateral shifts are never invertible".into()))
        }
        OperatorKind::BackwardShiftBi { weights } => {
            if weights.inf(true) <= 0.0 {
                return Err(Error::NotInvertible("weights are not bounded below".into()));
            }
            OperatorKind::ForwardShiftBi { weights: weights.reciprocal() }
        }
        OperatorKind::ForwardShiftBi { weights } => {
            if weights.inf(true) <= 0.0 {
                return Err(Error::NotInvertible("weights are not bounded below".into()));
            }
            OperatorKind::BackwardShiftBi { weights: weights.reciprocal() }
        }
        OperatorKind::Diagonal { entries, space } => {
            let dim = match space {
                SpaceTag::FiniteDim(d) => Some(*d),
                _ => None,
            };
            if entries.entry_set(dim).iter().any(|z| z.norm() == 0.0) {
                return Err(Error::NotInvertible("zero diagonal entry".into()));
            }
            OperatorKind::Diagonal { entries: entries.map(|z| z.inv()), space: space.clone() }
        }
        OperatorKind::ScalarIdentity { lambda, space } => {
            if lambda.norm() == 0.0 {
                return Err(Error::NotInvertible("zero scalar".into()));
            }
            OperatorKind::ScalarIdentity { lambda: lambda.inv(), space: space.clone() }
        }
        OperatorKind::JordanBlock { lambda, .. } if lambda.norm() == 0.0 => {
            return Err(Error::NotInvertible("zero eigenvalue".into()))
        }
        OperatorKind::DirectSum { components } => {
            OperatorKind::DirectSum { components: components.iter().map(inverse).collect::<Result<_>>()? }
        }
        OperatorKind::PolynomialOf { coeffs, .. } if coeffs.degree() == 0 => {
            let c = coeffs.coeffs()[0];
            if c.norm() == 0.0 {
                return Err(Error::NotInvertible("zero polynomial".into()));
            }
            OperatorKind::ScalarIdentity { lambda: c.inv(), space: op.space() }
        }
        _ => {
            let m = op
                .dense_matrix()
                .ok_or_else(|| Error::NotInvertible("no family inverse for this polynomial".into()))?;
            let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
                .ok_or_else(|| Error::NumericalBreakdown("SVD failed".into()))?;
            let smax = svd.singular_values.max();
            let smin = svd.singular_values.min();
            if smin <= 1e-12 * smax.max(f64::MIN_POSITIVE) {
                return Err(Error::NotInvertible("matrix is numerically singular".into()));
            }
            let inv = m.try_inverse().ok_or_else(|| Error::NotInvertible("matrix is singular".into()))?;
            OperatorKind::FiniteMatrix { entries: MatrixEntries(inv) }
        }
    };
    make_operator(kind, Flags::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{apply, EntrySeq, SeqVector, WeightSeq};
    use crate::scalar::Scalar;

    #[test]
    fn inverse_of_scalar_identity() {
        let op = OperatorSpec::scalar_identity(Scalar::new(2.0, 0.0), SpaceTag::UnilateralL2).unwrap();
        let inv = inverse(&op).unwrap();
        assert_eq!(inv, OperatorSpec::scalar_identity(Scalar::new(0.5, 0.0), SpaceTag::UnilateralL2).unwrap());
    }

    #[test]
    fn unilateral_shift_has_no_inverse() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        assert_eq!(inverse(&op).unwrap_err().kind(), "NotInvertible");
    }

    #[test]
    fn bilateral_inverse_is_forward_half_shift() {
        let op = OperatorSpec::bilateral_shift(WeightSeq::constant(2.0)).unwrap();
        let inv = inverse(&op).unwrap();
        assert_eq!(inv.kind(), &OperatorKind::ForwardShiftBi { weights: WeightSeq::constant(0.5) });
        for j in -5..5 {
            let e = SeqVector::basis(SpaceTag::BilateralL2, j).unwrap();
            let back = apply(&inv, &apply(&op, &e).unwrap()).unwrap();
            assert!(back.distance(&e).unwrap() < 1e-15);
        }
    }

    #[test]
    fn adjoint_conjugates_diagonal() {
        let op = OperatorSpec::diagonal(EntrySeq::Constant { value: Scalar::new(0.0, 1.0) }, SpaceTag::UnilateralL2)
            .unwrap();
        let adj = adjoint(&op).unwrap();
        assert_eq!(
            adj,
            OperatorSpec::diagonal(EntrySeq::Constant { value: Scalar::new(0.0, -1.0) }, SpaceTag::UnilateralL2)
                .unwrap()
        );
    }

    #[test]
    fn adjoint_of_matrix_is_conjugate_transpose() {
        let m = nalgebra::DMatrix::from_fn(3, 3, |i, j| Scalar::new(i as f64, j as f64 + 1.0));
        let op = OperatorSpec::matrix(m.clone()).unwrap();
        assert_eq!(adjoint(&op).unwrap().dense_matrix().unwrap(), m.adjoint());
        assert_eq!(adjoint(&adjoint(&op).unwrap()).unwrap(), op);
    }

    #[test]
    fn sup_norm_has_no_adjoint() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::Linf).unwrap();
        assert_eq!(adjoint(&op).unwrap_err(), Error::NoAdjointForSupNorm);
    }

    #[test]
    fn zero_eigenvalue_jordan_is_not_invertible() {
        let op = OperatorSpec::jordan(Scalar::default(), 3).unwrap();
        assert_eq!(inverse(&op).unwrap_err().kind(), "NotInvertible");
        let op = OperatorSpec::jordan(Scalar::new(2.0, 0.0), 3).unwrap();
        let inv = inverse(&op).unwrap();
        let prod = op.dense_matrix().unwrap() * inv.dense_matrix().unwrap();
        assert!((prod - nalgebra::DMatrix::identity(3, 3)).norm() < 1e-14);
    }
}
