//! Disqualifiers and the numeric probes that enact their arguments.

use serde::{Deserialize, Serialize};

use super::verdict::{Reason, Verdict};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::operator::{
    adjoint, iterate, make_operator, spectral_radius, spectrum, CircleAnswer, Flags, OperatorKind, OperatorSpec,
    SeqVector,
};
use crate::reach::{j_profile, DistanceProfile};
use crate::scalar::Scalar;
use crate::witness::Witness;

/// Exact spectral radii below `1 - SPECTRAL_MARGIN` disqualify.
pub const SPECTRAL_MARGIN: f64 = 1e-9;

/// Reasons implied by declared flags. Positivity and hyponormality are only
/// meaningful on Hilbert spaces; compactness only in infinite dimension.
pub fn declared_flag_reasons(op: &OperatorSpec) -> Vec<Reason> {
    let f = op.flags();
    let space = op.space();
    let mut out = Vec::new();
    if f.compact && !space.is_finite_dim() {
        out.push(Reason::DeclaredCompact);
    }
    if space.is_hilbert() {
        if f.positive {
            out.push(Reason::DeclaredPositive);
        }
        if f.hyponormal {
            out.push(Reason::DeclaredHyponormal);
        }
    }
    out
}

pub fn finite_dim_verdict(op: &OperatorSpec) -> Result<Verdict> {
    if !op.space().is_finite_dim() {
        return Err(Error::NotFiniteDim);
    }
    Ok(Verdict::disqualified(vec![Reason::FiniteDimensional]))
}

/// Spectral reasons in pipeline order; approximate data never contributes.
pub fn spectral_reasons(op: &OperatorSpec) -> Vec<Reason> {
    let mut out = Vec::new();
    let r = spectral_radius(op);
    if r.exact && r.value < 1.0 - SPECTRAL_MARGIN {
        out.push(Reason::SpectralRadiusBelowOne);
    }
    let s = spectrum(op);
    if s.is_exact() && s.outside_closed_unit_disk() {
        out.push(Reason::SpectrumOutsideDisk);
    }
    if s.meets_unit_circle() == CircleAnswer::No {
        out.push(Reason::MissesUnitCircle);
    }
    out
}

pub fn spectral_verdict(op: &OperatorSpec) -> Option<Verdict> {
    let reasons = spectral_reasons(op);
    (!reasons.is_empty()).then(|| Verdict::disqualified(reasons))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBound {
    pub bounded: bool,
    /// `M` with `||T^n|| <= M` for all `n`.
    pub bound: Option<f64>,
}

/// Power bounded with `M = 1` whenever the analytic norm bound is at most 1.
pub fn power_bounded_reduction(op: &OperatorSpec) -> PowerBound {
    if op.norm_bound() <= 1.0 {
        PowerBound { bounded: true, bound: Some(1.0) }
    } else {
        PowerBound { bounded: false, bound: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketRow {
    pub k: u64,
    pub delta: f64,
    pub j_distance: f64,
    /// `||T^k x - y||`.
    pub orbit_distance: f64,
    pub holds: bool,
}

/// For `||T^n|| <= M`: `||T^k x - y|| - M delta <= j_k <= ||T^k x - y||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBracket {
    pub bound: f64,
    /// `min_k ||T^k x - y||` over the profile horizon.
    pub l_distance: f64,
    pub rows: Vec<BracketRow>,
    pub holds: bool,
}

/// Checks the bracket on every profile entry; `None` if `op` is not power bounded.
pub fn power_bracket(
    op: &OperatorSpec,
    x: &SeqVector,
    y: &SeqVector,
    profile: &DistanceProfile,
) -> Result<Option<PowerBracket>> {
    let Some(m) = power_bounded_reduction(op).bound else { return Ok(None) };
    let space = op.space();
    let x = x.clone().conform(&space)?;
    let y = y.clone().conform(&space)?;
    let mut orbit = Vec::with_capacity(profile.horizon as usize);
    let mut v = x;
    for _ in 0..profile.horizon {
        v = iterate(op, &v, 1)?;
        orbit.push(v.distance(&y)?);
    }
    let rows: Vec<BracketRow> = profile
        .entries
        .iter()
        .map(|e| {
            let o = orbit[(e.k - 1) as usize];
            let tol = 1e-9 * o.max(1.0);
            BracketRow {
                k: e.k,
                delta: e.delta,
                j_distance: e.distance,
                orbit_distance: o,
                holds: e.distance <= o + tol && e.distance >= o - m * e.delta - tol,
            }
        })
        .collect();
    let holds = rows.iter().all(|r| r.holds);
    let l_distance = orbit.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Some(PowerBracket { bound: m, l_distance, rows, holds }))
}

/// The operator with every declared flag cleared, recursively.
fn strip_flags(op: &OperatorSpec) -> OperatorSpec {
    let kind = match op.kind() {
        OperatorKind::DirectSum { components } => {
            OperatorKind::DirectSum { components: components.iter().map(strip_flags).collect() }
        }
        OperatorKind::PolynomialOf { base, coeffs } => {
            OperatorKind::PolynomialOf { base: Box::new(strip_flags(base)), coeffs: coeffs.clone() }
        }
        k => k.clone(),
    };
    make_operator(kind, Flags::default()).expect("stripping flags keeps a valid operator")
}

/// Structural equality after normalization; dense finite-dimensional
/// operators compare entrywise to `1e-12` relative.
pub fn same_operator(a: &OperatorSpec, b: &OperatorSpec) -> bool {
    if let (Some(ma), Some(mb)) = (a.dense_matrix(), b.dense_matrix()) {
        if ma.shape() != mb.shape() {
            return false;
        }
        let scale = ma.iter().chain(mb.iter()).map(|z| z.norm()).fold(1.0, f64::max);
        return ma.iter().zip(mb.iter()).all(|(p, q)| (p - q).norm() <= 1e-12 * scale);
    }
    strip_flags(a) == strip_flags(b)
}

/// Whether `op` is `S ⊕ S*` (in either order).
pub fn is_adjoint_sum(op: &OperatorSpec) -> bool {
    let Some([a, b]) = op.components() else { return false };
    let pairs = [(a, b), (b, a)];
    pairs.iter().any(|(s, t)| adjoint(s).map(|sa| same_operator(&sa, t)).unwrap_or(false))
}

pub fn adjoint_sum_verdict(op: &OperatorSpec) -> Option<Verdict> {
    is_adjoint_sum(op).then(|| Verdict::disqualified(vec![Reason::AdjointDirectSum]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingRow {
    pub k: u64,
    /// `<T^k a_n, b_n>`.
    pub lhs: [f64; 2],
    /// `<a_n, T*^k b_n>`.
    pub rhs: [f64; 2],
    pub gap: f64,
    pub holds: bool,
}

/// The pairing identity on a witness for `T ⊕ T*` with base `x ⊕ z` and
/// target `a ⊕ b`. Along a genuine witness both sides converge, to
/// `<a, z>` and `<x, b>` respectively, so any such limit forces
/// `<a, z> = <x, b>`; `forced_drift` is the violation of that equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingProbe {
    pub rows: Vec<PairingRow>,
    pub holds: bool,
    pub limit_lhs: [f64; 2],
    pub limit_rhs: [f64; 2],
    pub forced_drift: f64,
}

fn pair(z: Scalar) -> [f64; 2] {
    [z.re, z.im]
}

pub fn adjoint_pairing_probe(w: &Witness) -> Result<PairingProbe> {
    let op = w.op();
    let Some([t, ts]) = op.components() else {
        return Err(Error::PreconditionUnmet("expected a two-summand direct sum".into()));
    };
    if !adjoint(t).map(|a| same_operator(&a, ts)).unwrap_or(false) {
        return Err(Error::PreconditionUnmet("second summand is not the adjoint of the first".into()));
    }
    let split = |v: &SeqVector| -> Result<(SeqVector, SeqVector)> {
        let p = v.parts().ok_or_else(|| Error::InvalidVector("expected a two-part vector".into()))?;
        Ok((p[0].clone(), p[1].clone()))
    };
    let rows = w
        .pairs()
        .iter()
        .map(|p| {
            let (a, b) = split(&p.x)?;
            let ta = iterate(t, &a, p.k)?;
            let tb = iterate(ts, &b, p.k)?;
            let lhs = ta.inner(&b)?;
            let rhs = a.inner(&tb)?;
            let gap = (lhs - rhs).norm();
            let scale = (ta.norm() * b.norm()).max(a.norm() * tb.norm()).max(1.0);
            Ok(PairingRow { k: p.k, lhs: pair(lhs), rhs: pair(rhs), gap, holds: gap <= 1e-12 * scale })
        })
        .collect::<Result<Vec<_>>>()?;
    let (x, z) = split(w.base())?;
    let (a, b) = split(w.target())?;
    let ll = a.inner(&z)?;
    let lr = x.inner(&b)?;
    Ok(PairingProbe {
        holds: rows.iter().all(|r| r.holds),
        rows,
        limit_lhs: pair(ll),
        limit_rhs: pair(lr),
        forced_drift: (ll - lr).norm(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanProbeRow {
    pub target_norm: f64,
    /// Smallest distance over the whole profile.
    pub min_distance: f64,
    /// Smallest distance at the last power, over all levels.
    pub final_distance: f64,
    pub profile: DistanceProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanProbe {
    pub lambda: [f64; 2],
    pub size: usize,
    pub rows: Vec<JordanProbeRow>,
}

/// Distance profiles of `J_l(lambda)` from `x` to each target. For
/// `|lambda| < 1` every orbit tends to 0, so distances to `y` tend to `||y||`;
/// for `|lambda| > 1` the last coordinate of `x` grows like `|lambda|^k`.
pub fn jordan_probe(
    lambda: Scalar,
    size: usize,
    x: &SeqVector,
    targets: &[SeqVector],
    horizon: u64,
    schedule: &[f64],
    cfg: &RunConfig,
) -> Result<JordanProbe> {
    let op = OperatorSpec::jordan(lambda, size)?;
    let rows = targets
        .iter()
        .map(|y| {
            let profile = j_profile(&op, x, y, horizon, schedule, cfg)?;
            let final_distance =
                profile.entries.iter().filter(|e| e.k == horizon).map(|e| e.distance).fold(f64::INFINITY, f64::min);
            Ok(JordanProbeRow { target_norm: y.norm(), min_distance: profile.overall_min(), final_distance, profile })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JordanProbe { lambda: pair(lambda), size, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{EntrySeq, ShiftSpace, SpaceTag, WeightSeq};

    fn two_b() -> OperatorSpec {
        OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap()
    }

    #[test]
    fn half_shift_has_radius_below_one() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(0.5), ShiftSpace::L2).unwrap();
        let v = spectral_verdict(&op).unwrap();
        assert_eq!(v.reason, Some(Reason::SpectralRadiusBelowOne));
    }

    #[test]
    fn diagonal_two_three_lies_outside_the_disk() {
        let op = OperatorSpec::diagonal(
            EntrySeq::list(vec![Scalar::new(2.0, 0.0), Scalar::new(3.0, 0.0)], Scalar::new(3.0, 0.0)),
            SpaceTag::FiniteDim(2),
        )
        .unwrap();
        let v = spectral_verdict(&op).unwrap();
        assert_eq!(v.reason, Some(Reason::SpectrumOutsideDisk));
        assert_eq!(v.also, vec![Reason::MissesUnitCircle]);
    }

    #[test]
    fn two_b_plus_three_i_passes_through() {
        let three = OperatorSpec::scalar_identity(Scalar::new(3.0, 0.0), SpaceTag::FiniteDim(1)).unwrap();
        let op = OperatorSpec::direct_sum(vec![two_b(), three]).unwrap();
        assert!(spectral_verdict(&op).is_none());
        assert!(adjoint_sum_verdict(&op).is_none());
    }

    #[test]
    fn adjoint_sum_is_detected_in_either_order() {
        let t = two_b();
        let op = OperatorSpec::direct_sum(vec![t.clone(), adjoint(&t).unwrap()]).unwrap();
        assert_eq!(adjoint_sum_verdict(&op).unwrap().reason, Some(Reason::AdjointDirectSum));
        let op = OperatorSpec::direct_sum(vec![adjoint(&t).unwrap(), t]).unwrap();
        assert!(is_adjoint_sum(&op));
    }

    #[test]
    fn identity_bracket_is_exact() {
        let op = OperatorSpec::scalar_identity(Scalar::new(1.0, 0.0), SpaceTag::UnilateralL2).unwrap();
        assert_eq!(power_bounded_reduction(&op).bound, Some(1.0));
        assert!(!power_bounded_reduction(&two_b()).bounded);
        let x = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[1.0, 0.0]).unwrap();
        let y = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[0.0, 2.0]).unwrap();
        let p = j_profile(&op, &x, &y, 3, &[1.0, 0.5], &RunConfig::default()).unwrap();
        let b = power_bracket(&op, &x, &y, &p).unwrap().unwrap();
        assert!(b.holds);
        for r in &b.rows {
            assert!((r.j_distance - (r.orbit_distance - r.delta)).abs() < 1e-12);
        }
    }
}
