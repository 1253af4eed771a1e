//! Finite-dimensional cyclicity and dense-range checks by numerical rank.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::PolynomialCoeffs;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub dim: usize,
    /// Number of singular values above `rank_tol * sigma_max`.
    pub rank: usize,
    /// `sigma_max / sigma_min`; infinite for a singular matrix.
    pub condition: f64,
    pub full: bool,
}

fn check_square(m: &DMatrix<Scalar>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidSpec(format!(
            "expected a nonempty square matrix, found {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

fn rank_report(m: DMatrix<Scalar>, rank_tol: f64) -> RankReport {
    let dim = m.ncols();
    let sv = m.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let rank = if smax > 0.0 { sv.iter().filter(|&&s| s > rank_tol * smax).count() } else { 0 };
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    RankReport { dim, rank, condition, full: rank == dim }
}

/// Rank of `[x, Mx, ..., M^{d-1} x]` with unit-normalized columns; `x` is
/// cyclic iff the rank is `d`.
pub fn krylov_is_cyclic(m: &DMatrix<Scalar>, x: &DVector<Scalar>, rank_tol: f64) -> Result<RankReport> {
    let d = check_square(m)?;
    if x.len() != d {
        return Err(Error::InvalidVector(format!("vector has {} coordinates, matrix has {d}", x.len())));
    }
    let mut k = DMatrix::<Scalar>::zeros(d, d);
    let mut v = x.clone();
    for j in 0..d {
        let n = v.norm();
        if n > 0.0 {
            v.unscale_mut(n);
        }
        k.set_column(j, &v);
        v = m * &v;
    }
    Ok(rank_report(k, rank_tol))
}

/// `P(M)` by Horner's rule.
pub fn matrix_polynomial(m: &DMatrix<Scalar>, p: &PolynomialCoeffs) -> Result<DMatrix<Scalar>> {
    let d = check_square(m)?;
    let mut acc = DMatrix::<Scalar>::zeros(d, d);
    for c in p.coeffs().iter().rev() {
        acc = &acc * m + DMatrix::from_diagonal_element(d, d, *c);
    }
    Ok(acc)
}

/// `P(M)` has full rank, the finite-dimensional form of dense range.
pub fn dense_range_rank(m: &DMatrix<Scalar>, p: &PolynomialCoeffs, rank_tol: f64) -> Result<RankReport> {
    Ok(rank_report(matrix_polynomial(m, p)?, rank_tol))
}

/// If `P(M)` has dense range and `x` is cyclic then `P(M) x` is cyclic; this
/// reports the cyclicity of `P(M) x` once both preconditions are confirmed.
pub fn cyclic_preservation_check(
    m: &DMatrix<Scalar>,
    p: &PolynomialCoeffs,
    x: &DVector<Scalar>,
    rank_tol: f64,
) -> Result<RankReport> {
    let pm = matrix_polynomial(m, p)?;
    if !rank_report(pm.clone(), rank_tol).full {
        return Err(Error::PreconditionUnmet("P(M) does not have full rank".into()));
    }
    if !krylov_is_cyclic(m, x, rank_tol)?.full {
        return Err(Error::PreconditionUnmet("x is not cyclic for M".into()));
    }
    krylov_is_cyclic(m, &(pm * x), rank_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: f64) -> Scalar {
        Scalar::new(v, 0.0)
    }

    fn companion(d: usize) -> DMatrix<Scalar> {
        DMatrix::from_fn(d, d, |i, j| {
            if i == j + 1 {
                re(1.0)
            } else if j == d - 1 {
                re(i as f64 + 1.0)
            } else {
                re(0.0)
            }
        })
    }

    fn e1(d: usize) -> DVector<Scalar> {
        DVector::from_fn(d, |i, _| re(if i == 0 { 1.0 } else { 0.0 }))
    }

    #[test]
    fn companion_matrix_has_cyclic_e1() {
        assert!(krylov_is_cyclic(&companion(5), &e1(5), 1e-10).unwrap().full);
    }

    #[test]
    fn identity_has_no_cyclic_vector() {
        let x = DVector::from_element(3, re(1.0));
        let r = krylov_is_cyclic(&DMatrix::identity(3, 3), &x, 1e-10).unwrap();
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn annihilating_polynomial_fails_precondition() {
        let m = DMatrix::from_diagonal_element(3, 3, re(2.0));
        let p = PolynomialCoeffs::from_reals(&[-2.0, 1.0]).unwrap();
        assert!(!dense_range_rank(&m, &p, 1e-10).unwrap().full);
        let err = cyclic_preservation_check(&m, &p, &e1(3), 1e-10).unwrap_err();
        assert_eq!(err.kind(), "PreconditionUnmet");
    }

    #[test]
    fn preservation_holds_for_companion_and_shifted_polynomial() {
        let p = PolynomialCoeffs::from_reals(&[1.0, 1.0]).unwrap();
        assert!(cyclic_preservation_check(&companion(4), &p, &e1(4), 1e-10).unwrap().full);
        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![re(1.0), re(2.0), re(3.0)]));
        let one = PolynomialCoeffs::from_reals(&[1.0]).unwrap();
        let ones = DVector::from_element(3, re(1.0));
        assert!(cyclic_preservation_check(&diag, &one, &ones, 1e-10).unwrap().full);
    }
}
