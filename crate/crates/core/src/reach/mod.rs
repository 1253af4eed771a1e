//! Distances from targets to the reachable sets `T^k(ball(x, delta))`.
//!
//! `y` lies in `J(x)` exactly when every such distance can be driven to zero
//! along increasing `k` for shrinking `delta`. On a truncation the distance is
//! exact: it is the distance from `y` to `T^k(x + ball(0, delta) ∩ span(in))`
//! measured on the output support, hence an upper bound for the distance
//! with unrestricted perturbations.

mod profile;
pub mod trs;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::operator::{iterate, truncation_matrix, IndexWindow, NormKind, OperatorSpec, SeqVector, SpaceTag, Support};
use crate::scalar::Scalar;

pub use profile::{extract_witness, j_profile, DistanceProfile, LevelSummary, ProfileEntry};
pub use trs::{constrained_lsq, SecularSolution, SecularSystem, TrsProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachQuery {
    pub op: OperatorSpec,
    pub x: SeqVector,
    pub y: SeqVector,
    pub k: u64,
    pub delta: f64,
    /// Output support; defaults to the hull of the supports of `y` and `T^k x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<Support>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachResult {
    pub distance: f64,
    /// The minimizer `e*`; `x + e*` is the reaching point.
    pub perturbation: SeqVector,
    pub multiplier: f64,
    pub constraint_active: bool,
    pub converged: bool,
    pub iterations: usize,
    /// Residual inside the range of the truncated `T^k`.
    pub range_residual: f64,
    /// Residual no perturbation can remove.
    pub floor: f64,
    pub in_support: Support,
    pub out_support: Support,
}

/// Default output support for `(x, y, k)`.
pub fn default_out_support(op: &OperatorSpec, x: &SeqVector, y: &SeqVector, k: u64) -> Result<Support> {
    y.support().hull(&iterate(op, x, k)?.support())
}

fn check_target_inside(y: &SeqVector, out: &Support) -> Result<()> {
    let outside = y.sub(&y.restrict(out)?)?.norm();
    if outside > 0.0 {
        return Err(Error::InvalidVector(format!("target has mass {outside:e} outside the output support")));
    }
    Ok(())
}

/// Everything about a `(x, y, k)` query that does not depend on `delta`.
#[derive(Debug, Clone)]
pub(crate) struct ReachKernel {
    space: SpaceTag,
    in_support: Support,
    out_support: Support,
    solver: Solver,
}

#[derive(Debug, Clone)]
enum Solver {
    L2(TrsProblem),
    /// Each output row depends on at most one input column.
    Sup {
        matrix: DMatrix<Scalar>,
        rhs: DVector<Scalar>,
    },
}

impl ReachKernel {
    pub(crate) fn new(
        op: &OperatorSpec,
        x: &SeqVector,
        y: &SeqVector,
        k: u64,
        out: Option<Support>,
        cfg: &RunConfig,
    ) -> Result<ReachKernel> {
        let space = op.space();
        x.check_space(&space)?;
        y.check_space(&space)?;
        let out = match out {
            Some(o) => o,
            None => default_out_support(op, x, y, k)?,
        };
        check_target_inside(y, &out)?;
        let trunc = truncation_matrix(op, k, &out, cfg.max_dim)?;
        let rhs = y.flatten(&out)? - &trunc.matrix * x.flatten(&trunc.in_support)?;
        let solver = match space.norm()? {
            NormKind::L2 => Solver::L2(TrsProblem::new(&trunc.matrix, &rhs, cfg.trs_rank_tol)?),
            NormKind::Sup => {
                if !is_monomial(&trunc.matrix) {
                    return Err(Error::UnsupportedNorm);
                }
                Solver::Sup { matrix: trunc.matrix, rhs }
            }
        };
        Ok(ReachKernel { space, in_support: trunc.in_support, out_support: out, solver })
    }

    pub(crate) fn solve(&self, delta: f64) -> Result<ReachResult> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("perturbation radius must be positive, got {delta}")));
        }
        let (e, distance, multiplier, active, converged, iterations, range_residual, floor) = match &self.solver {
            Solver::L2(p) => {
                let (e, s) = p.solve(delta)?;
                (e, s.residual, s.multiplier, s.active, s.converged, s.iterations, s.range_residual, s.floor)
            }
            Solver::Sup { matrix, rhs } => {
                let (e, d, active, floor) = sup_decoupled(matrix, rhs, delta);
                (e, d, 0.0, active, true, 0, d, floor)
            }
        };
        Ok(ReachResult {
            distance,
            perturbation: SeqVector::unflatten(&self.space, &self.in_support, e.as_slice())?,
            multiplier,
            constraint_active: active,
            converged,
            iterations,
            range_residual,
            floor,
            in_support: self.in_support.clone(),
            out_support: self.out_support.clone(),
        })
    }
}

fn is_monomial(m: &DMatrix<Scalar>) -> bool {
    let zero = Scalar::default();
    m.row_iter().all(|r| r.iter().filter(|z| **z != zero).count() <= 1)
        && m.column_iter().all(|c| c.iter().filter(|z| **z != zero).count() <= 1)
}

/// Coordinatewise sup-norm solve: row `i` with coefficient `c` at column `j`
/// is best served by `e_j = b_i / c` clipped to modulus `delta`.
fn sup_decoupled(m: &DMatrix<Scalar>, b: &DVector<Scalar>, delta: f64) -> (DVector<Scalar>, f64, bool, f64) {
    let zero = Scalar::default();
    let mut e = DVector::<Scalar>::zeros(m.ncols());
    let mut dist: f64 = 0.0;
    let mut floor: f64 = 0.0;
    let mut active = false;
    for i in 0..m.nrows() {
        match (0..m.ncols()).find(|&j| m[(i, j)] != zero) {
            None => {
                floor = floor.max(b[i].norm());
                dist = dist.max(b[i].norm());
            }
            Some(j) => {
                let c = m[(i, j)];
                let r = b[i] / c;
                let ej = if r.norm() > delta {
                    active = true;
                    r * (delta / r.norm())
                } else {
                    r
                };
                e[j] = ej;
                dist = dist.max((b[i] - c * ej).norm());
            }
        }
    }
    (e, dist, active, floor)
}

/// Exact truncated distance for one query.
pub fn j_distance(q: &ReachQuery, cfg: &RunConfig) -> Result<ReachResult> {
    ReachKernel::new(&q.op, &q.x, &q.y, q.k, q.out.clone(), cfg)?.solve(q.delta)
}

/// Closed form for weighted backward shifts: output coordinate `j` of `T^k`
/// sees only input coordinate `j + k`, with coefficient
/// `c_j = prod_{i=j}^{j+k-1} alpha_i`. The sup norm decouples completely;
/// the l2 norm reduces to a diagonal secular equation.
pub fn shift_reach_distance(
    op: &OperatorSpec,
    x: &SeqVector,
    y: &SeqVector,
    k: u64,
    delta: f64,
    out: Option<IndexWindow>,
    cfg: &RunConfig,
) -> Result<ReachResult> {
    let (weights, _) = op.backward_shift_weights().ok_or(Error::NotAShift)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidConfig(format!("perturbation radius must be positive, got {delta}")));
    }
    let space = op.space();
    x.check_space(&space)?;
    y.check_space(&space)?;
    let tkx = iterate(op, x, k)?;
    let out = match out {
        Some(w) => w,
        None => y.support().hull(&tkx.support())?.as_window().ok_or(Error::NotAShift)?,
    };
    let out_support = Support::Window(out);
    check_target_inside(y, &out_support)?;
    out_support.check_max(cfg.max_dim)?;
    let ki = k as i64;
    let coeff: Vec<f64> = out.indices().map(|j| weights.product(j, k)).collect();
    let resid: Vec<Scalar> = out.indices().map(|j| y.coord(j) - tkx.coord(j)).collect();
    let in_window = IndexWindow::new(out.lo + ki, out.hi + ki)?;
    let (e, distance, multiplier, active, converged, iterations, range_residual, floor) = match space.norm()? {
        NormKind::Sup => {
            let mut e = Vec::with_capacity(coeff.len());
            let mut dist: f64 = 0.0;
            let mut active = false;
            for (c, r) in coeff.iter().zip(&resid) {
                let v = r / *c;
                let ej = if v.norm() > delta {
                    active = true;
                    v * (delta / v.norm())
                } else {
                    v
                };
                dist = dist.max((r.norm() - c * delta).max(0.0));
                e.push(ej);
            }
            (e, dist, 0.0, active, true, 0, dist, 0.0)
        }
        NormKind::L2 => {
            let sys = SecularSystem::new(coeff.clone(), resid.clone(), 0.0, cfg.trs_rank_tol);
            let sol = sys.solve(delta)?;
            // Kept coefficients are exactly the ones above the rank cut, in order.
            let smax = coeff.iter().copied().fold(0.0, f64::max);
            let mut kept = sol.coeffs.iter();
            let e = coeff
                .iter()
                .map(|c| {
                    if smax > 0.0 && *c > cfg.trs_rank_tol * smax {
                        *kept.next().expect("kept")
                    } else {
                        Scalar::default()
                    }
                })
                .collect();
            (e, sol.residual, sol.multiplier, sol.active, sol.converged, sol.iterations, sol.range_residual, sol.floor)
        }
    };
    Ok(ReachResult {
        distance,
        perturbation: SeqVector::block(space, in_window.lo, e)?,
        multiplier,
        constraint_active: active,
        converged,
        iterations,
        range_residual,
        floor,
        in_support: Support::Window(in_window),
        out_support,
    })
}

/// `min_{0 <= k <= horizon} ||T^k x - y||`, smallest `k` on ties.
pub fn l_distance(
    op: &OperatorSpec,
    x: &SeqVector,
    y: &SeqVector,
    horizon: u64,
    cfg: &RunConfig,
) -> Result<(f64, u64)> {
    let space = op.space();
    x.check_space(&space)?;
    y.check_space(&space)?;
    let mut v = x.clone();
    let mut best = (v.distance(y)?, 0);
    for k in 1..=horizon {
        v = iterate(op, &v, 1)?;
        v.support().check_max(cfg.max_dim)?;
        let d = v.distance(y)?;
        if d < best.0 {
            best = (d, k);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{ShiftSpace, WeightSeq};

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn identity_reaches_its_base() {
        let op = OperatorSpec::scalar_identity(Scalar::new(1.0, 0.0), SpaceTag::UnilateralL2).unwrap();
        let x = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[1.0, -2.0]).unwrap();
        let q = ReachQuery { op, x: x.clone(), y: x, k: 7, delta: 0.1, out: None };
        let r = j_distance(&q, &cfg()).unwrap();
        assert!(r.distance < 1e-15 && !r.constraint_active);
    }

    #[test]
    fn two_b_reaches_e1_from_e1() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let e1 = SeqVector::basis(SpaceTag::UnilateralL2, 1).unwrap();
        let q = ReachQuery {
            op,
            x: e1.clone(),
            y: e1,
            k: 5,
            delta: 1.0,
            out: Some(Support::Window(IndexWindow::new(1, 32).unwrap())),
        };
        let r = j_distance(&q, &cfg()).unwrap();
        assert!(r.distance <= 1e-9, "{}", r.distance);
        assert!(r.perturbation.norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn first_coordinate_obstruction() {
        let two = Scalar::new(2.0, 0.0);
        let op = OperatorSpec::direct_sum(vec![
            OperatorSpec::scalar_identity(two, SpaceTag::FiniteDim(1)).unwrap(),
            OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap(),
        ])
        .unwrap();
        let x = SeqVector::sum(vec![
            SeqVector::from_reals(SpaceTag::FiniteDim(1), 1, &[1.0]).unwrap(),
            SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[0.0]).unwrap(),
        ])
        .unwrap();
        let q = ReachQuery { op, x: x.clone(), y: x, k: 10, delta: 0.25, out: None };
        let r = j_distance(&q, &cfg()).unwrap();
        assert!(r.distance >= 1024.0 * 0.75 - 1.0 - 1e-9);
    }

    #[test]
    fn sup_shift_closed_form_agrees_with_matrix_route() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::Linf).unwrap();
        let x = SeqVector::from_reals(SpaceTag::UnilateralLinf, 1, &[1.0, 0.5, -0.25, 3.0]).unwrap();
        let y = SeqVector::from_reals(SpaceTag::UnilateralLinf, 1, &[0.3, -7.0]).unwrap();
        for k in 1..4 {
            let a = shift_reach_distance(&op, &x, &y, k, 0.2, None, &cfg()).unwrap();
            let b = j_distance(
                &ReachQuery { op: op.clone(), x: x.clone(), y: y.clone(), k, delta: 0.2, out: None },
                &cfg(),
            )
            .unwrap();
            assert!((a.distance - b.distance).abs() < 1e-12, "k={k}: {} vs {}", a.distance, b.distance);
        }
    }

    #[test]
    fn l_distance_examples() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let e2 = SeqVector::basis(SpaceTag::UnilateralL2, 2).unwrap();
        let y = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[2.0]).unwrap();
        assert_eq!(l_distance(&op, &e2, &y, 5, &cfg()).unwrap(), (0.0, 1));
        assert_eq!(l_distance(&op, &e2, &e2, 5, &cfg()).unwrap(), (0.0, 0));
    }

    #[test]
    fn target_outside_support_is_rejected() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap();
        let x = SeqVector::basis(SpaceTag::UnilateralL2, 1).unwrap();
        let y = SeqVector::basis(SpaceTag::UnilateralL2, 9).unwrap();
        let out = Some(Support::Window(IndexWindow::new(1, 4).unwrap()));
        let q = ReachQuery { op, x, y, k: 1, delta: 1.0, out };
        assert_eq!(j_distance(&q, &cfg()).unwrap_err().kind(), "InvalidVector");
    }
}
