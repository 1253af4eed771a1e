//! Family certifiers: exact witness constructions for operators whose
//! J-class vectors are known in closed form.

use super::salas::{salas_bilateral, salas_unilateral, CriterionReport};
use super::verdict::{Verdict, CERTIFIED_LINF_CITATION, CERTIFIED_SUM_CITATION};
use crate::config::RunConfig;
use crate::error::Result;
use crate::operator::{inverse, spectrum, OperatorKind, OperatorSpec, SeqVector, ShiftSpace, SpaceTag};
use crate::scalar::Scalar;
use crate::witness::{
    expanding_sum_witness, linf_shift_witness, shift_criterion_witness, shift_preimage_witness, verify_documented,
    Witness,
};

pub(crate) enum Outcome {
    Certified(Box<Verdict>),
    /// The family certifier applies but the supplied base is not a J-class vector.
    BaseRejected(String),
    NotApplicable,
}

/// True iff every coordinate at index `>= tail_start` has modulus `<= tail_tol`.
pub fn c0_membership(x: &SeqVector, tail_tol: f64, tail_start: i64) -> bool {
    match x.parts() {
        Some(parts) => parts.iter().all(|p| c0_membership(p, tail_tol, tail_start)),
        None => {
            let b = x.as_block().expect("non-sum vectors are blocks");
            b.window().indices().filter(|&j| j >= tail_start).all(|j| b.get(j).norm() <= tail_tol)
        }
    }
}

/// `e_1` in every block, scaled to unit norm.
pub fn default_target(space: &SpaceTag) -> Result<SeqVector> {
    let v = ones_per_block(space)?;
    let n = v.norm();
    Ok(v.scale(Scalar::new(1.0 / n, 0.0)))
}

fn ones_per_block(space: &SpaceTag) -> Result<SeqVector> {
    match space {
        SpaceTag::DirectSum(parts) => SeqVector::sum(parts.iter().map(ones_per_block).collect::<Result<_>>()?),
        s => SeqVector::basis(s.clone(), 1),
    }
}

/// `e_1` in the first block and zero elsewhere.
pub fn default_base(space: &SpaceTag) -> Result<SeqVector> {
    match space {
        SpaceTag::DirectSum(parts) => SeqVector::sum(
            parts
                .iter()
                .enumerate()
                .map(|(i, s)| default_base(s).map(|v| if i == 0 { v } else { v.scale(Scalar::default()) }))
                .collect::<Result<_>>()?,
        ),
        s => SeqVector::basis(s.clone(), 1),
    }
}

/// One power per schedule level: the smallest `k` past the previous pick
/// whose one-pair witness has both documented errors within `delta`.
fn greedy_ks(schedule: &[f64], kmax: u64, errors: impl Fn(u64) -> Result<(f64, f64)>) -> Result<Option<Vec<u64>>> {
    let mut ks = Vec::with_capacity(schedule.len());
    let mut k = 0;
    for &delta in schedule {
        loop {
            k += 1;
            if k > kmax {
                return Ok(None);
            }
            let (b, t) = errors(k)?;
            if b <= delta && t <= delta {
                ks.push(k);
                break;
            }
        }
    }
    Ok(Some(ks))
}

fn documented(w: &Witness) -> (f64, f64) {
    let s = w.schedules().expect("constructions attach schedules");
    (s.base_tol[0], s.target_tol[0])
}

fn certified(citation: &str, w: Witness) -> Result<Verdict> {
    let report = verify_documented(&w)?;
    Ok(Verdict::certified(citation, w, report))
}

/// `lambda` for `lambda B` on `l^inf`, in either representation.
fn linf_multiplier(op: &OperatorSpec) -> Option<(Scalar, bool)> {
    match op.kind() {
        OperatorKind::BackwardShiftUni { weights, space: ShiftSpace::Linf } => {
            weights.as_constant().map(|c| (Scalar::new(c, 0.0), true))
        }
        OperatorKind::PolynomialOf { base, coeffs } => {
            let c = linf_multiplier(base)?.0;
            match coeffs.coeffs() {
                [z, mu] if *z == Scalar::default() => Some((*mu * c, false)),
                _ => None,
            }
        }
        _ => None,
    }
}

pub(crate) fn certify_linf(op: &OperatorSpec, base: Option<&SeqVector>, cfg: &RunConfig) -> Result<Outcome> {
    let Some((lambda, plain)) = linf_multiplier(op) else { return Ok(Outcome::NotApplicable) };
    if lambda.norm() <= 1.0 {
        return Ok(Outcome::NotApplicable);
    }
    let e1 = SeqVector::basis(SpaceTag::UnilateralLinf, 1)?;
    let x = base.cloned().unwrap_or_else(|| e1.clone());
    if !c0_membership(&x, cfg.c0_tail_tol, cfg.c0_tail_start) {
        return Ok(Outcome::BaseRejected(format!(
            "base is not in c_0 (a coordinate at index >= {} exceeds {:e}), so J(x) is not l^inf",
            cfg.c0_tail_start, cfg.c0_tail_tol
        )));
    }
    let y = default_target(&op.space())?;
    let kmax = cfg.criteria_horizon as u64;
    let mut notes = Vec::new();
    let w = if plain {
        let ks = greedy_ks(&cfg.delta_schedule, kmax, |k| Ok(documented(&shift_preimage_witness(op, &x, &y, &[k])?)))?;
        let Some(ks) = ks else { return Ok(Outcome::NotApplicable) };
        shift_preimage_witness(op, &x, &y, &ks)?
    } else {
        if x != e1 {
            notes.push("witness built for base e_1; the polynomial form admits only that closed form".to_string());
        }
        let ks = greedy_ks(&cfg.delta_schedule, kmax, |k| Ok(documented(&linf_shift_witness(lambda, &y, &[k])?)))?;
        let Some(ks) = ks else { return Ok(Outcome::NotApplicable) };
        linf_shift_witness(lambda, &y, &ks)?
    };
    let mut v = certified(CERTIFIED_LINF_CITATION, w)?;
    v.notes = notes;
    Ok(Outcome::Certified(Box::new(v)))
}

/// The weight-product criterion for a backward shift on `l^2`, if it is one.
pub fn shift_criterion(op: &OperatorSpec, cfg: &RunConfig) -> Result<Option<CriterionReport>> {
    match op.kind() {
        OperatorKind::BackwardShiftUni { weights, space: ShiftSpace::L2 } => {
            Ok(Some(salas_unilateral(weights, cfg.criteria_horizon, cfg.big_margin)?))
        }
        OperatorKind::BackwardShiftBi { weights } => {
            Ok(Some(salas_bilateral(weights, cfg.criteria_horizon, cfg.q_range, cfg.big_margin, cfg.small_margin)?))
        }
        _ => Ok(None),
    }
}

/// Spectrum exactly known and contained in `{|z| > 1}`.
fn is_expanding(op: &OperatorSpec) -> bool {
    let s = spectrum(op);
    s.is_exact() && s.outside_closed_unit_disk() && inverse(op).is_ok()
}

/// `S ⊕ T` with `S` expanding and `T` a criterion-positive shift, in either order.
pub(crate) fn certify_expanding_sum(
    op: &OperatorSpec,
    base: Option<&SeqVector>,
    cfg: &RunConfig,
) -> Result<(Outcome, Option<CriterionReport>)> {
    let Some(comps @ [_, _]) = op.components() else { return Ok((Outcome::NotApplicable, None)) };
    for i in 0..2 {
        let (s, t) = (&comps[i], &comps[1 - i]);
        if !is_expanding(s) {
            continue;
        }
        let Some(report) = shift_criterion(t, cfg)? else { continue };
        if !report.positive {
            continue;
        }
        let x = match base {
            Some(b) => b.clone(),
            None => {
                let mut parts =
                    vec![SeqVector::zeros(&s.space(), &s.space().default_support(1))?, SeqVector::basis(t.space(), 1)?];
                if i == 1 {
                    parts.swap(0, 1);
                }
                SeqVector::sum(parts)?
            }
        };
        let xp = x.parts().expect("conformed to a two-summand space");
        if xp[i].norm() > 0.0 {
            let note = "base has a nonzero component in the expanding summand S; since S^{-1} is power bounded \
                        with ||S^{-n}|| -> 0, J(x) is empty";
            return Ok((Outcome::BaseRejected(note.to_string()), Some(report)));
        }
        let y = default_target(&op.space())?;
        let yp = y.parts().expect("two-summand target");
        let build = |ks: &[u64]| -> Result<Witness> {
            let tail = shift_criterion_witness(t, &xp[1 - i], &yp[1 - i], ks)?;
            let w = expanding_sum_witness(op, i, &yp[i], &tail)?;
            let sched = w.schedules().expect("constructions attach schedules").clone();
            Witness::new(op.clone(), x.clone(), w.target().clone(), w.pairs().to_vec(), w.direction())?
                .with_schedules(sched.base_tol, sched.target_tol)
        };
        let ks = greedy_ks(&cfg.delta_schedule, cfg.criteria_horizon as u64, |k| Ok(documented(&build(&[k])?)))?;
        let Some(ks) = ks else { continue };
        let mut v = certified(CERTIFIED_SUM_CITATION, build(&ks)?)?;
        v.criterion = Some(report);
        return Ok((Outcome::Certified(Box::new(v)), None));
    }
    Ok((Outcome::NotApplicable, None))
}
