//! Classifiers: weight-product criteria, the `c_0` characterization on
//! `l^inf`, disqualifiers, Krylov checks and the verdict pipeline.
//!
//! The pipeline is deterministic: declared flags, finite dimension, spectral
//! data, power boundedness and the `T ⊕ T*` shape are checked in that order,
//! then the family certifiers, and otherwise a distance profile is reported.

mod certify;
mod disqualify;
mod krylov;
mod salas;
mod verdict;

pub use certify::{c0_membership, default_base, default_target, shift_criterion};
pub use disqualify::{
    adjoint_pairing_probe, adjoint_sum_verdict, declared_flag_reasons, finite_dim_verdict, is_adjoint_sum,
    jordan_probe, power_bounded_reduction, power_bracket, same_operator, spectral_reasons, spectral_verdict,
    BracketRow, JordanProbe, JordanProbeRow, PairingProbe, PairingRow, PowerBound, PowerBracket, SPECTRAL_MARGIN,
};
pub use krylov::{cyclic_preservation_check, dense_range_rank, krylov_is_cyclic, matrix_polynomial, RankReport};
pub use salas::{salas_bilateral, salas_unilateral, CriterionReport, QStats, BILATERAL_CITATION, UNILATERAL_CITATION};
pub use verdict::{
    Reason, Verdict, VerdictKind, CERTIFIED_LINF_CITATION, CERTIFIED_SUM_CITATION, INCONCLUSIVE_CITATION,
};

use certify::Outcome;

use crate::config::RunConfig;
use crate::error::Result;
use crate::operator::{OperatorSpec, SeqVector};
use crate::reach::j_profile;

/// Runs every disqualifier and certifier in a fixed order. `base` is the
/// candidate J-class vector; certifiers pick a canonical one when absent.
pub fn assemble_verdict(op: &OperatorSpec, base: Option<&SeqVector>, cfg: &RunConfig) -> Result<Verdict> {
    cfg.validate()?;
    let base = base.map(|b| b.clone().conform(&op.space())).transpose()?;
    let flags = declared_flag_reasons(op);
    if !flags.is_empty() {
        return Ok(Verdict::disqualified(flags));
    }
    if op.space().is_finite_dim() {
        return finite_dim_verdict(op);
    }
    let mut reasons = spectral_reasons(op);
    if power_bounded_reduction(op).bounded {
        reasons.push(Reason::PowerBoundedSmallLimitSet);
    }
    if !reasons.is_empty() {
        return Ok(Verdict::disqualified(reasons));
    }
    if let Some(v) = adjoint_sum_verdict(op) {
        return Ok(v);
    }

    let mut notes = Vec::new();
    let mut criterion = None;
    match certify::certify_linf(op, base.as_ref(), cfg)? {
        Outcome::Certified(v) => return Ok(*v),
        Outcome::BaseRejected(n) => notes.push(n),
        Outcome::NotApplicable => {}
    }
    if let Some(report) = shift_criterion(op, cfg)? {
        if report.positive {
            return Ok(Verdict::criterion_positive(report));
        }
        notes.push("weight-product criterion is negative at this horizon".to_string());
        criterion = Some(report);
    }
    match certify::certify_expanding_sum(op, base.as_ref(), cfg)? {
        (Outcome::Certified(v), _) => return Ok(*v),
        (Outcome::BaseRejected(n), report) => {
            notes.push(n);
            criterion = report;
        }
        (Outcome::NotApplicable, _) => {}
    }

    let x = match base {
        Some(b) => b,
        None => default_base(&op.space())?,
    };
    let y = default_target(&op.space())?;
    let profile = j_profile(op, &x, &y, cfg.horizon, &cfg.delta_schedule, cfg)?;
    let mut v = Verdict::inconclusive(profile);
    v.criterion = criterion;
    v.notes = notes;
    Ok(v)
}
