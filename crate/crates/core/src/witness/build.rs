//! Exact witness constructions.

use super::{slack, Direction, Witness, WitnessPair};
use crate::error::{Error, Result};
use crate::operator::{
    inverse, iterate, spectral_radius, OperatorSpec, PolynomialCoeffs, SeqVector, ShiftSpace, SpaceTag, WeightSeq,
};
use crate::scalar::Scalar;

/// `lambda B` on `l^inf`: a real positive `lambda` is a constant-weight shift,
/// any other scalar is the polynomial `lambda z` of the unit shift.
pub fn linf_scaled_shift(lambda: Scalar) -> Result<OperatorSpec> {
    if lambda.im == 0.0 && lambda.re > 0.0 {
        OperatorSpec::backward_shift(WeightSeq::constant(lambda.re), ShiftSpace::Linf)
    } else {
        let b = OperatorSpec::backward_shift(WeightSeq::constant(1.0), ShiftSpace::Linf)?;
        OperatorSpec::polynomial_of(b, PolynomialCoeffs::new(vec![Scalar::default(), lambda])?)
    }
}

fn check_ks(ks: &[u64]) -> Result<()> {
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidWitness("powers must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Base `e_1`, `x_n = e_1 + lambda^{-n} sum_j y_j e_{n+j}`, so that
/// `(lambda B)^n x_n = y` and `||x_n - e_1||_inf = ||y||_inf / |lambda|^n`.
pub fn linf_shift_witness(lambda: Scalar, y: &SeqVector, ns: &[u64]) -> Result<Witness> {
    if !(lambda.norm() > 1.0) {
        return Err(Error::BadModulus(lambda.norm()));
    }
    check_ks(ns)?;
    let op = linf_scaled_shift(lambda)?;
    let space = SpaceTag::UnilateralLinf;
    let y = y.clone().conform(&space)?;
    let yb = y.as_block().expect("single block");
    let base = SeqVector::basis(space.clone(), 1)?;
    let ynorm = y.norm();
    let mut pairs = Vec::with_capacity(ns.len());
    let mut base_tol = Vec::with_capacity(ns.len());
    let mut target_tol = Vec::with_capacity(ns.len());
    for &n in ns {
        let scale = lambda.powi(-(n as i32));
        let hi = yb.window().hi + n as i64;
        let mut coords = vec![Scalar::default(); hi as usize];
        coords[0] = Scalar::new(1.0, 0.0);
        for j in yb.window().indices() {
            coords[(j + n as i64 - 1) as usize] = yb.get(j) * scale;
        }
        pairs.push(WitnessPair { k: n, x: SeqVector::block(space.clone(), 1, coords)? });
        base_tol.push(slack(ynorm / lambda.norm().powi(n as i32), 0.0));
        target_tol.push(slack(0.0, ynorm));
    }
    Witness::new(op, base, y, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

/// Preimages under a weighted backward shift:
/// `x_k = x + R_k (y - T^k x)` with `(R_k v)_{j+k} = v_j / prod_{i=j}^{j+k-1} alpha_i`,
/// so `T^k x_k = y` and `||x_k - x|| = ||R_k (y - T^k x)||`.
pub fn shift_preimage_witness(op: &OperatorSpec, x: &SeqVector, y: &SeqVector, ks: &[u64]) -> Result<Witness> {
    let (weights, _) = op.backward_shift_weights().ok_or(Error::NotAShift)?;
    check_ks(ks)?;
    let space = op.space();
    let x = x.clone().conform(&space)?;
    let y = y.clone().conform(&space)?;
    let mut pairs = Vec::with_capacity(ks.len());
    let mut base_tol = Vec::with_capacity(ks.len());
    let mut target_tol = Vec::with_capacity(ks.len());
    for &k in ks {
        let r = y.sub(&iterate(op, &x, k)?)?;
        let rb = r.as_block().expect("single block");
        let w = rb.window();
        let coords = w.indices().map(|j| rb.get(j) / weights.product(j, k)).collect();
        let lift = SeqVector::block(space.clone(), w.lo + k as i64, coords)?;
        let xk = x.add(&lift)?;
        base_tol.push(slack(lift.norm(), x.norm()));
        target_tol.push(slack(0.0, y.norm() + r.norm()) * (w.len() as f64).max(1.0));
        pairs.push(WitnessPair { k, x: xk });
    }
    Witness::new(op.clone(), x, y, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

/// The construction behind the weight-product criteria:
/// `x_k = x + R_k y`, so `T^k x_k - y = T^k x`, with `||x_k - x|| = ||R_k y||`.
/// Both errors vanish along `k` exactly when forward products of the weights
/// grow over `supp y` and backward products decay over `supp x`.
pub fn shift_criterion_witness(op: &OperatorSpec, x: &SeqVector, y: &SeqVector, ks: &[u64]) -> Result<Witness> {
    let (weights, _) = op.backward_shift_weights().ok_or(Error::NotAShift)?;
    check_ks(ks)?;
    let space = op.space();
    let x = x.clone().conform(&space)?;
    let y = y.clone().conform(&space)?;
    let yb = y.as_block().expect("single block");
    let w = yb.window();
    let mut pairs = Vec::with_capacity(ks.len());
    let mut base_tol = Vec::with_capacity(ks.len());
    let mut target_tol = Vec::with_capacity(ks.len());
    for &k in ks {
        let coords = w.indices().map(|j| yb.get(j) / weights.product(j, k)).collect();
        let lift = SeqVector::block(space.clone(), w.lo + k as i64, coords)?;
        let drift = iterate(op, &x, k)?.norm();
        base_tol.push(slack(lift.norm(), x.norm()));
        target_tol.push(slack(drift, y.norm() + drift) * (w.len() as f64).max(1.0));
        pairs.push(WitnessPair { k, x: x.add(&lift)? });
    }
    Witness::new(op.clone(), x, y, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

fn check_expanding_modulus(lambda: Scalar) -> Result<()> {
    if !(lambda.norm() > 1.0) {
        return Err(Error::BadModulus(lambda.norm()));
    }
    Ok(())
}

/// Witness for `lambda I_C ⊕ T` with base `0 ⊕ x` and target `mu ⊕ y`:
/// pairs `(k, mu lambda^{-k} ⊕ z_k)` from a witness `(k, z_k)` for `y ∈ J_T(x)`.
pub fn first_coord_sum_witness(mu: Scalar, lambda: Scalar, tail: &Witness) -> Result<Witness> {
    check_expanding_modulus(lambda)?;
    if tail.direction() != Direction::Forward {
        return Err(Error::InvalidWitness("tail witness must be forward".into()));
    }
    let c = SpaceTag::FiniteDim(1);
    let op = OperatorSpec::direct_sum(vec![OperatorSpec::scalar_identity(lambda, c.clone())?, tail.op().clone()])?;
    let scalar = |z: Scalar| SeqVector::block(c.clone(), 1, vec![z]);
    let base = SeqVector::sum(vec![scalar(Scalar::default())?, tail.base().clone()])?;
    let target = SeqVector::sum(vec![scalar(mu)?, tail.target().clone()])?;
    let s = tail.schedules_or_measured()?;
    let mut pairs = Vec::new();
    let mut base_tol = Vec::new();
    let mut target_tol = Vec::new();
    for (i, p) in tail.pairs().iter().enumerate() {
        let first = mu * lambda.powi(-(p.k as i32));
        pairs.push(WitnessPair { k: p.k, x: SeqVector::sum(vec![scalar(first)?, p.x.clone()])? });
        base_tol.push(slack(first.norm() + s.base_tol[i], 0.0));
        target_tol.push(slack(s.target_tol[i], mu.norm()));
    }
    Witness::new(op, base, target, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

/// Witness for `S ⊕ T` with base `0 ⊕ x` and target `u ⊕ y`, where `S` is
/// invertible with `r(S^{-1}) < 1`: pairs `(k, S^{-k} u ⊕ z_k)`.
pub fn expanding_inverse_witness(s: &OperatorSpec, u: &SeqVector, tail: &Witness) -> Result<Witness> {
    let op = OperatorSpec::direct_sum(vec![s.clone(), tail.op().clone()])?;
    expanding_sum_witness(&op, 0, u, tail)
}

/// Two-summand form of [`expanding_inverse_witness`] with the expanding
/// summand at position `expanding` (0 or 1) and `tail` witnessing the other.
pub fn expanding_sum_witness(op: &OperatorSpec, expanding: usize, u: &SeqVector, tail: &Witness) -> Result<Witness> {
    if tail.direction() != Direction::Forward {
        return Err(Error::InvalidWitness("tail witness must be forward".into()));
    }
    let comps = op
        .components()
        .filter(|c| c.len() == 2 && expanding < 2)
        .ok_or_else(|| Error::PreconditionUnmet("expected a direct sum of two operators".into()))?;
    let s = &comps[expanding];
    if &comps[1 - expanding] != tail.op() {
        return Err(Error::InvalidWitness("tail witness is for a different operator".into()));
    }
    let s_inv = inverse(s)?;
    let r = spectral_radius(&s_inv);
    if !(r.exact && r.value < 1.0) {
        return Err(Error::NotExpanding);
    }
    let u = u.clone().conform(&s.space())?;
    let arrange = |a: SeqVector, b: SeqVector| {
        if expanding == 0 {
            SeqVector::sum(vec![a, b])
        } else {
            SeqVector::sum(vec![b, a])
        }
    };
    let base = arrange(u.scale(Scalar::default()), tail.base().clone())?;
    let target = arrange(u.clone(), tail.target().clone())?;
    let sched = tail.schedules_or_measured()?;
    let mut pairs = Vec::new();
    let mut base_tol = Vec::new();
    let mut target_tol = Vec::new();
    for (i, p) in tail.pairs().iter().enumerate() {
        let pre = iterate(&s_inv, &u, p.k)?;
        let back_err = iterate(s, &pre, p.k)?.distance(&u)?;
        base_tol.push(slack(pre.norm() + sched.base_tol[i], 0.0));
        target_tol.push(slack(sched.target_tol[i] + back_err, u.norm()) + 1e-10 * u.norm());
        pairs.push(WitnessPair { k: p.k, x: arrange(pre, p.x.clone())? });
    }
    Witness::new(op.clone(), base, target, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

#[cfg(test)]
mod tests {
    use super::super::verify_documented;
    use super::*;

    fn re(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    #[test]
    fn criterion_witness_on_split_bilateral_shift() {
        let op = OperatorSpec::bilateral_shift(WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 }).unwrap();
        let e1 = SeqVector::basis(SpaceTag::BilateralL2, 1).unwrap();
        let w = shift_criterion_witness(&op, &e1, &e1, &[5, 10]).unwrap();
        let s = w.schedules().unwrap();
        assert!((s.base_tol[1] - 2f64.powi(-10)).abs() < 1e-11);
        assert!(s.target_tol[1] < 2e-3);
        assert!(verify_documented(&w).unwrap().pass);
    }

    #[test]
    fn linf_example() {
        let y = SeqVector::basis(SpaceTag::UnilateralLinf, 1).unwrap();
        let w = linf_shift_witness(re(2.0), &y, &[3]).unwrap();
        let x3 = &w.pairs()[0].x;
        assert_eq!(x3.coord(1), re(1.0));
        assert_eq!(x3.coord(4), re(0.125));
        assert_eq!(iterate(w.op(), x3, 3).unwrap().distance(&y).unwrap(), 0.0);
        assert!(verify_documented(&w).unwrap().pass);
    }

    #[test]
    fn linf_zero_target_and_bad_modulus() {
        let y = SeqVector::from_reals(SpaceTag::UnilateralLinf, 1, &[0.0]).unwrap();
        let w = linf_shift_witness(re(2.0), &y, &[1, 2]).unwrap();
        for p in w.pairs() {
            assert_eq!(p.x.distance(w.base()).unwrap(), 0.0);
        }
        assert_eq!(linf_shift_witness(re(1.0), &y, &[1]).unwrap_err(), Error::BadModulus(1.0));
    }

    #[test]
    fn complex_modulus_uses_polynomial_form() {
        let y = SeqVector::from_reals(SpaceTag::UnilateralLinf, 1, &[1.0, -3.0]).unwrap();
        let w = linf_shift_witness(Scalar::new(0.0, 2.0), &y, &[2, 5]).unwrap();
        assert!(verify_documented(&w).unwrap().pass);
    }

    #[test]
    fn first_coordinate_scaling() {
        let b = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let z = SeqVector::basis(SpaceTag::UnilateralL2, 1).unwrap();
        let tail = shift_preimage_witness(&b, &z, &z, &[10]).unwrap();
        let w = first_coord_sum_witness(re(7.0), re(2.0), &tail).unwrap();
        let x = &w.pairs()[0].x;
        assert_eq!(x.parts().unwrap()[0].coord(1), re(7.0 / 1024.0));
        let image = iterate(w.op(), x, 10).unwrap();
        assert_eq!(image.parts().unwrap()[0].coord(1), re(7.0));
        assert!(verify_documented(&w).unwrap().pass);
    }

    #[test]
    fn expanding_block_decays() {
        let s = OperatorSpec::scalar_identity(re(3.0), SpaceTag::FiniteDim(1)).unwrap();
        let b = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let z = SeqVector::basis(SpaceTag::UnilateralL2, 2).unwrap();
        let tail = shift_preimage_witness(&b, &z, &z, &[8]).unwrap();
        let u = SeqVector::from_reals(SpaceTag::FiniteDim(1), 1, &[1.0]).unwrap();
        let w = expanding_inverse_witness(&s, &u, &tail).unwrap();
        let first = w.pairs()[0].x.parts().unwrap()[0].coord(1);
        assert!((first.re - 3f64.powi(-8)).abs() < 1e-18);
        assert!(verify_documented(&w).unwrap().pass);
        let bad = OperatorSpec::diagonal(
            crate::operator::EntrySeq::list(vec![re(0.5), re(2.0)], re(2.0)),
            SpaceTag::FiniteDim(2),
        )
        .unwrap();
        let u2 = SeqVector::from_reals(SpaceTag::FiniteDim(2), 1, &[1.0, 1.0]).unwrap();
        assert_eq!(expanding_inverse_witness(&bad, &u2, &tail).unwrap_err(), Error::NotExpanding);
    }
}
