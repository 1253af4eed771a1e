//! Transformations carrying witnesses along linear and dynamical identities.

use serde::{Deserialize, Serialize};

use super::{slack, Direction, Witness, WitnessPair};
use crate::error::{Error, Result};
use crate::operator::{apply, inverse, iterate, OperatorSpec, PolynomialCoeffs, SeqVector};
use crate::scalar::Scalar;

fn forward_only(w: &Witness) -> Result<()> {
    if w.direction() != Direction::Forward {
        return Err(Error::InvalidWitness("transformation needs a forward witness".into()));
    }
    Ok(())
}

/// `y_n = T^{k_n} x_n` satisfies `y_n -> y` and `T^{-k_n} y_n = x_n -> x`,
/// so the pairs `(k_n, y_n)` witness `x ∈ J_{T^{-1}}(y)`. The error columns
/// swap, up to the roundoff of applying `T^{-k}` after `T^k`.
pub fn reverse_witness(w: &Witness) -> Result<Witness> {
    let t_inv = inverse(w.op())?;
    let (there, back, direction) = match w.direction() {
        Direction::Forward => (w.op().clone(), t_inv, Direction::Backward),
        Direction::Backward => (t_inv, w.op().clone(), Direction::Forward),
    };
    let s = w.schedules_or_measured()?;
    let mut pairs = Vec::with_capacity(w.pairs().len());
    let mut base_tol = Vec::new();
    let mut target_tol = Vec::new();
    for (i, p) in w.pairs().iter().enumerate() {
        let image = iterate(&there, &p.x, p.k)?;
        let round_trip = iterate(&back, &image, p.k)?.distance(&p.x)?;
        base_tol.push(slack(s.target_tol[i], image.norm()));
        target_tol.push(slack(s.base_tol[i] + round_trip, p.x.norm()));
        pairs.push(WitnessPair { k: p.k, x: image });
    }
    Witness::new(w.op().clone(), w.target().clone(), w.base().clone(), pairs, direction)?
        .with_schedules(base_tol, target_tol)
}

/// Invariance of `J(x)` under `T`: pairs `(k_n + 1, x_n)` witness `Ty`,
/// with target errors multiplied by at most `||T||`.
pub fn promote_witness(w: &Witness, max_dim: usize) -> Result<Witness> {
    forward_only(w)?;
    let target = apply(w.op(), w.target())?;
    target.support().check_max(max_dim)?;
    let s = w.schedules_or_measured()?;
    let norm = w.op().norm_bound();
    let pairs = w.pairs().iter().map(|p| WitnessPair { k: p.k + 1, x: p.x.clone() }).collect();
    let target_tol = s.target_tol.iter().map(|t| slack(norm * t, target.norm())).collect();
    Witness::new(w.op().clone(), w.base().clone(), target, pairs, Direction::Forward)?
        .with_schedules(s.base_tol, target_tol)
}

/// Inverse of [`promote_witness`] for invertible `T`: from a witness for
/// `Ty`, the pairs `(k_n - 1, x_n)` with `k_n >= 2` witness `y`, with target
/// errors multiplied by at most `||T^{-1}||`.
pub fn demote_witness(w: &Witness) -> Result<Witness> {
    forward_only(w)?;
    let t_inv = inverse(w.op())?;
    let target = apply(&t_inv, w.target())?;
    let s = w.schedules_or_measured()?;
    let norm = t_inv.norm_bound();
    let mut pairs = Vec::new();
    let mut base_tol = Vec::new();
    let mut target_tol = Vec::new();
    for (i, p) in w.pairs().iter().enumerate().filter(|(_, p)| p.k >= 2) {
        pairs.push(WitnessPair { k: p.k - 1, x: p.x.clone() });
        base_tol.push(s.base_tol[i]);
        target_tol.push(slack(norm * s.target_tol[i], target.norm()));
    }
    if pairs.is_empty() {
        return Err(Error::InsufficientPairs { needed: 1, found: 0 });
    }
    Witness::new(w.op().clone(), w.base().clone(), target, pairs, Direction::Forward)?
        .with_schedules(base_tol, target_tol)
}

/// Linearity: `(k_n, mu x_n)` witnesses `mu y ∈ J(mu x)`.
pub fn scale_witness(w: &Witness, mu: Scalar) -> Result<Witness> {
    if mu == Scalar::default() {
        return Err(Error::ZeroScale);
    }
    let s = w.schedules_or_measured()?;
    let m = mu.norm();
    let pairs = w.pairs().iter().map(|p| WitnessPair { k: p.k, x: p.x.scale(mu) }).collect();
    Witness::new(w.op().clone(), w.base().scale(mu), w.target().scale(mu), pairs, w.direction())?.with_schedules(
        s.base_tol.iter().map(|t| slack(m * t, 0.0)).collect(),
        s.target_tol.iter().map(|t| slack(m * t, m * w.target().norm())).collect(),
    )
}

/// Diagonal extraction towards base `0`. `ws[m]` is a witness with base
/// `lambda_m x` and the common target `y`, `|lambda_m|` strictly decreasing
/// to zero. From the `m`-th witness (counting from 1) the first pair with
/// `||x_pair|| <= |lambda_m| ||x|| + 1/m`, target error `<= 1/m` and a power
/// above every earlier pick is selected.
pub fn zero_base_witness(ws: &[(Scalar, Witness)]) -> Result<Witness> {
    let (first_lambda, first) = ws.first().ok_or(Error::InsufficientPairs { needed: 1, found: 0 })?;
    if *first_lambda == Scalar::default() {
        return Err(Error::ZeroScale);
    }
    let x = first.base().scale(first_lambda.inv());
    let x_norm = x.norm();
    let y = first.target().clone();
    let mut pairs = Vec::with_capacity(ws.len());
    let mut base_tol = Vec::with_capacity(ws.len());
    let mut target_tol = Vec::with_capacity(ws.len());
    let mut last_k = 0;
    let mut last_mod = f64::INFINITY;
    for (i, (lambda, w)) in ws.iter().enumerate() {
        forward_only(w)?;
        let m = (i + 1) as f64;
        let lm = lambda.norm();
        if !(lm > 0.0 && lm < last_mod) {
            return Err(Error::InvalidWitness("scales must be non-zero and strictly decreasing in modulus".into()));
        }
        last_mod = lm;
        let expected_base = x.scale(*lambda);
        if w.base().distance(&expected_base)? > 1e-12 * expected_base.norm().max(1.0)
            || w.target().distance(&y)? > 1e-12 * y.norm().max(1.0)
        {
            return Err(Error::InvalidWitness(format!("witness {} does not have base lambda x and target y", i + 1)));
        }
        let b_bound = lm * x_norm + 1.0 / m;
        let errors = w.errors()?;
        let pick = w
            .pairs()
            .iter()
            .zip(errors)
            .find(|(p, (_, te))| p.k > last_k && p.x.norm() <= b_bound && *te <= 1.0 / m)
            .ok_or(Error::DiagonalFailure(i + 1))?;
        last_k = pick.0.k;
        pairs.push(pick.0.clone());
        base_tol.push(b_bound);
        target_tol.push(1.0 / m);
    }
    let zero = x.scale(Scalar::default());
    Witness::new(first.op().clone(), zero, y, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

/// Regrouping `k_n = l_n m + rho`: a base-`0` witness for `T` yields one for
/// `T^m` with pairs `(l_n, T^rho x_n)`, using the most frequent residue `rho`
/// (smallest on ties). Pairs with `l_n = 0` are dropped.
pub fn zero_power_witness(w: &Witness, m: u64) -> Result<Witness> {
    forward_only(w)?;
    if m == 0 {
        return Err(Error::InvalidConfig("power must be positive".into()));
    }
    if w.base().norm() != 0.0 {
        return Err(Error::InvalidWitness("regrouping needs a witness with base 0".into()));
    }
    if m == 1 {
        return Ok(w.clone());
    }
    let n = w.pairs().len();
    if (n as u64) < m {
        return Err(Error::InsufficientPairs { needed: m as usize, found: n });
    }
    let mut counts = vec![0usize; m as usize];
    for p in w.pairs() {
        counts[(p.k % m) as usize] += 1;
    }
    let rho = (0..m as usize).max_by_key(|&r| (counts[r], std::cmp::Reverse(r))).expect("m >= 1") as u64;
    let s = w.schedules_or_measured()?;
    let norm = w.op().norm_bound();
    let op = OperatorSpec::polynomial_of(w.op().clone(), PolynomialCoeffs::monomial(m as usize))?;
    let mut pairs = Vec::new();
    let mut base_tol = Vec::new();
    let mut target_tol = Vec::new();
    for (i, p) in w.pairs().iter().enumerate() {
        if p.k % m != rho || p.k / m == 0 {
            continue;
        }
        let moved = iterate(w.op(), &p.x, rho)?;
        pairs.push(WitnessPair { k: p.k / m, x: moved });
        base_tol.push(slack(norm.powi(rho as i32) * s.base_tol[i], 0.0));
        target_tol.push(slack(s.target_tol[i], w.target().norm()));
    }
    if pairs.is_empty() {
        return Err(Error::InsufficientPairs { needed: 1, found: 0 });
    }
    Witness::new(op, w.base().clone(), w.target().clone(), pairs, Direction::Forward)?
        .with_schedules(base_tol, target_tol)
}

/// Points `z_n -> z` with `T^n z_n -> w0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegularOrbit {
    /// `Tz = z`: `z_n = z`, `w0 = z`.
    FixedPoint { z: SeqVector },
    /// `Tz = 0`: `z_n = z`, `w0 = 0`.
    Kernel { z: SeqVector },
    /// Explicit points indexed by power.
    Explicit { z: SeqVector, w0: SeqVector, points: Vec<(u64, SeqVector)> },
}

impl RegularOrbit {
    pub fn z(&self) -> &SeqVector {
        match self {
            RegularOrbit::FixedPoint { z } | RegularOrbit::Kernel { z } | RegularOrbit::Explicit { z, .. } => z,
        }
    }

    pub fn limit(&self) -> SeqVector {
        match self {
            RegularOrbit::FixedPoint { z } => z.clone(),
            RegularOrbit::Kernel { z } => z.scale(Scalar::default()),
            RegularOrbit::Explicit { w0, .. } => w0.clone(),
        }
    }

    pub fn at(&self, n: u64) -> Result<SeqVector> {
        match self {
            RegularOrbit::FixedPoint { z } | RegularOrbit::Kernel { z } => Ok(z.clone()),
            RegularOrbit::Explicit { points, .. } => {
                points.iter().find(|(k, _)| *k == n).map(|(_, v)| v.clone()).ok_or(Error::IndexMismatch(n))
            }
        }
    }

    /// Checks the defining identity of fixed points and kernel vectors.
    pub fn check(&self, op: &OperatorSpec) -> Result<()> {
        let (z, image_should_be) = match self {
            RegularOrbit::FixedPoint { z } => (z, z.clone()),
            RegularOrbit::Kernel { z } => (z, z.scale(Scalar::default())),
            RegularOrbit::Explicit { .. } => return Ok(()),
        };
        let gap = apply(op, z)?.distance(&image_should_be)?;
        if gap > 1e-12 * z.norm().max(1.0) {
            return Err(Error::PreconditionUnmet(format!("orbit identity fails by {gap:e}")));
        }
        Ok(())
    }
}

/// From a base-`0` witness for `y - w0` and a regular orbit of `z`, pairs
/// `(k_n, x_n + z_{k_n})` witness `y ∈ J(z)`. Error bounds add.
pub fn translate_witness(w: &Witness, orbit: &RegularOrbit) -> Result<Witness> {
    forward_only(w)?;
    if w.base().norm() != 0.0 {
        return Err(Error::InvalidWitness("translation needs a witness with base 0".into()));
    }
    orbit.check(w.op())?;
    let space = w.op().space();
    let z = orbit.z().clone().conform(&space)?;
    let w0 = orbit.limit().conform(&space)?;
    let target = w.target().add(&w0)?;
    let s = w.schedules_or_measured()?;
    let mut pairs = Vec::new();
    let mut base_tol = Vec::new();
    let mut target_tol = Vec::new();
    for (i, p) in w.pairs().iter().enumerate() {
        let zk = orbit.at(p.k)?.conform(&space)?;
        let orbit_base = zk.distance(&z)?;
        let orbit_target = iterate(w.op(), &zk, p.k)?.distance(&w0)?;
        pairs.push(WitnessPair { k: p.k, x: p.x.add(&zk)? });
        base_tol.push(slack(s.base_tol[i] + orbit_base, z.norm()));
        target_tol.push(slack(s.target_tol[i] + orbit_target, target.norm()));
    }
    Witness::new(w.op().clone(), z, target, pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

#[cfg(test)]
mod tests {
    use super::super::{shift_preimage_witness, verify_documented};
    use super::*;
    use crate::operator::{ShiftSpace, SpaceTag, WeightSeq};

    fn re(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn bilateral_two() -> OperatorSpec {
        OperatorSpec::bilateral_shift(WeightSeq::constant(2.0)).unwrap()
    }

    #[test]
    fn reverse_round_trip() {
        let op = bilateral_two();
        let x = SeqVector::from_reals(SpaceTag::BilateralL2, -1, &[0.5, 1.0, -1.0]).unwrap();
        let y = SeqVector::from_reals(SpaceTag::BilateralL2, 0, &[2.0, 1.0]).unwrap();
        let w = shift_preimage_witness(&op, &x, &y, &[3, 6, 9]).unwrap();
        let r = reverse_witness(&w).unwrap();
        assert_eq!(r.direction(), Direction::Backward);
        assert!(verify_documented(&r).unwrap().pass);
        let rr = reverse_witness(&r).unwrap();
        for (a, b) in rr.pairs().iter().zip(w.pairs()) {
            assert!(a.x.distance(&b.x).unwrap() < 1e-12);
        }
    }

    #[test]
    fn unilateral_reverse_is_rejected() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let e1 = SeqVector::basis(SpaceTag::UnilateralL2, 1).unwrap();
        let w = shift_preimage_witness(&op, &e1, &e1, &[2]).unwrap();
        assert_eq!(reverse_witness(&w).unwrap_err().kind(), "NotInvertible");
    }

    #[test]
    fn promotion_and_demotion() {
        let op = bilateral_two();
        let x = SeqVector::basis(SpaceTag::BilateralL2, 0).unwrap();
        let y = SeqVector::from_reals(SpaceTag::BilateralL2, -2, &[1.0, 2.0, 3.0]).unwrap();
        let w = shift_preimage_witness(&op, &x, &y, &[4, 8]).unwrap();
        let p = promote_witness(&w, 4096).unwrap();
        assert_eq!(p.ks(), vec![5, 9]);
        assert!(verify_documented(&p).unwrap().pass);
        let pp = promote_witness(&p, 4096).unwrap();
        assert_eq!(pp.ks(), vec![6, 10]);
        let d = demote_witness(&p).unwrap();
        assert!(d.target().distance(&y).unwrap() < 1e-15);
        assert!(verify_documented(&d).unwrap().pass);
    }

    #[test]
    fn scale_zero_is_rejected() {
        let op = bilateral_two();
        let x = SeqVector::basis(SpaceTag::BilateralL2, 0).unwrap();
        let w = shift_preimage_witness(&op, &x, &x, &[4]).unwrap();
        assert_eq!(scale_witness(&w, Scalar::default()).unwrap_err(), Error::ZeroScale);
        let s = scale_witness(&w, re(2.0)).unwrap();
        assert!(verify_documented(&s).unwrap().pass);
    }

    #[test]
    fn regrouping_odd_powers() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let zero = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[0.0]).unwrap();
        let y = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[1.0, -1.0]).unwrap();
        let w = shift_preimage_witness(&op, &zero, &y, &[3, 5, 7, 9, 11, 13]).unwrap();
        let g = zero_power_witness(&w, 2).unwrap();
        assert_eq!(g.ks(), vec![1, 2, 3, 4, 5, 6]);
        for (a, b) in g.pairs().iter().zip(w.pairs()) {
            assert!(a.x.distance(&apply(&op, &b.x).unwrap()).unwrap() < 1e-15);
        }
        assert!(verify_documented(&g).unwrap().pass);
        assert_eq!(zero_power_witness(&w, 1).unwrap(), w);
        let short = shift_preimage_witness(&op, &zero, &y, &[1, 2, 3]).unwrap();
        assert_eq!(zero_power_witness(&short, 7).unwrap_err(), Error::InsufficientPairs { needed: 7, found: 3 });
    }
}
