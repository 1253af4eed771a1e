//! Witness build specifications: one tagged JSON object per construction,
//! nesting for constructions that transform another witness.

use jclass_core::operator::{OperatorSpec, SeqVector};
use jclass_core::reach::{extract_witness, j_profile};
use jclass_core::scalar::JsonScalar;
use jclass_core::witness::{
    demote_witness, expanding_sum_witness, first_coord_sum_witness, linf_shift_witness, promote_witness,
    reverse_witness, scale_witness, shift_criterion_witness, shift_preimage_witness, translate_witness,
    zero_base_witness, zero_power_witness, RegularOrbit, Witness,
};
use jclass_core::{Result, RunConfig};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuildSpec {
    /// A witness given verbatim.
    Given {
        witness: Witness,
    },
    /// `x_n = e_1 + lambda^{-n} F^n y` for `lambda B` on `l^inf`.
    LinfShift {
        lambda: JsonScalar,
        y: SeqVector,
        ns: Vec<u64>,
    },
    ShiftPreimage {
        op: OperatorSpec,
        x: SeqVector,
        y: SeqVector,
        ks: Vec<u64>,
    },
    ShiftCriterion {
        op: OperatorSpec,
        x: SeqVector,
        y: SeqVector,
        ks: Vec<u64>,
    },
    /// Reach-engine profile followed by pair extraction; `horizon` and
    /// `schedule` default to the run configuration.
    Reach {
        op: OperatorSpec,
        x: SeqVector,
        y: SeqVector,
        #[serde(default)]
        horizon: Option<u64>,
        #[serde(default)]
        schedule: Option<Vec<f64>>,
    },
    FirstCoordSum {
        mu: JsonScalar,
        lambda: JsonScalar,
        tail: Box<BuildSpec>,
    },
    /// `expanding` is the position of the expanding summand in `op`.
    ExpandingSum {
        op: OperatorSpec,
        expanding: usize,
        u: SeqVector,
        tail: Box<BuildSpec>,
    },
    Reverse {
        of: Box<BuildSpec>,
    },
    Promote {
        of: Box<BuildSpec>,
    },
    Demote {
        of: Box<BuildSpec>,
    },
    Scale {
        of: Box<BuildSpec>,
        mu: JsonScalar,
    },
    ZeroPower {
        of: Box<BuildSpec>,
        m: u64,
    },
    Translate {
        of: Box<BuildSpec>,
        orbit: RegularOrbit,
    },
    /// Witnesses for `y_i ∈ J(0)`, combined with coefficients `c_i`.
    ZeroBase {
        terms: Vec<(JsonScalar, BuildSpec)>,
    },
}

impl BuildSpec {
    pub fn build(&self, cfg: &RunConfig) -> Result<Witness> {
        match self {
            BuildSpec::Given { witness } => Ok(witness.clone()),
            BuildSpec::LinfShift { lambda, y, ns } => linf_shift_witness(lambda.0, y, ns),
            BuildSpec::ShiftPreimage { op, x, y, ks } => shift_preimage_witness(op, x, y, ks),
            BuildSpec::ShiftCriterion { op, x, y, ks } => shift_criterion_witness(op, x, y, ks),
            BuildSpec::Reach { op, x, y, horizon, schedule } => {
                let space = op.space();
                let (x, y) = (x.clone().conform(&space)?, y.clone().conform(&space)?);
                let schedule = schedule.as_deref().unwrap_or(&cfg.delta_schedule);
                let profile = j_profile(op, &x, &y, horizon.unwrap_or(cfg.horizon), schedule, cfg)?;
                extract_witness(&profile, op, &x, &y, cfg)
            }
            BuildSpec::FirstCoordSum { mu, lambda, tail } => first_coord_sum_witness(mu.0, lambda.0, &tail.build(cfg)?),
            BuildSpec::ExpandingSum { op, expanding, u, tail } => {
                expanding_sum_witness(op, *expanding, u, &tail.build(cfg)?)
            }
            BuildSpec::Reverse { of } => reverse_witness(&of.build(cfg)?),
            BuildSpec::Promote { of } => promote_witness(&of.build(cfg)?, cfg.max_dim),
            BuildSpec::Demote { of } => demote_witness(&of.build(cfg)?),
            BuildSpec::Scale { of, mu } => scale_witness(&of.build(cfg)?, mu.0),
            BuildSpec::ZeroPower { of, m } => zero_power_witness(&of.build(cfg)?, *m),
            BuildSpec::Translate { of, orbit } => translate_witness(&of.build(cfg)?, orbit),
            BuildSpec::ZeroBase { terms } => {
                let ws = terms.iter().map(|(c, s)| Ok((c.0, s.build(cfg)?))).collect::<Result<Vec<_>>>()?;
                zero_base_witness(&ws)
            }
        }
    }
}
