//! Named examples as reproducible cases: an operator, candidate base
//! vectors with their expected verdict kinds, and probes with analytic pass
//! conditions. Also the logistic-map contrast, where the finite-dimensional
//! obstruction fails without linearity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::RunConfig;
use crate::criteria::{
    adjoint_pairing_probe, assemble_verdict, c0_membership, default_target, jordan_probe, Reason, Verdict, VerdictKind,
};
use crate::error::{Error, Result};
use crate::operator::{
    adjoint, apply, inverse, iterate, EntrySeq, OperatorSpec, SeqVector, ShiftSpace, SpaceTag, WeightSeq,
};
use crate::reach::{extract_witness, j_profile, l_distance};
use crate::scalar::Scalar;
use crate::witness::{first_coord_sum_witness, verify_documented, Direction, Witness, WitnessPair};

/// One analysis of the case operator (or of `op`, when given) from `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<SeqVector>,
    pub kind: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    /// For inconclusive verdicts: the smallest distance at the finest `delta` level must be at least this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "snake_case")]
pub enum Probe {
    /// `c0_membership(vector, tail_tol, tail_start) == expected`.
    C0Membership { label: String, vector: SeqVector, tail_tol: f64, tail_start: i64, expected: bool },
    /// For `||T|| <= 1/2` and unit `x, y`: every j-distance is at least
    /// `1 - (1 + delta) ||T||^k`, the orbit reaches 0 and stays far from `y`.
    Collapse { x: SeqVector, y: SeqVector, schedule: Vec<f64>, horizon: u64, l_floor: f64, zero_tol: f64 },
    /// Contracting Jordan block: distances to 0 fall below `tol`, distances to
    /// unit targets end within `tol` of `||y||`.
    JordanContracting {
        lambda: f64,
        size: usize,
        x: SeqVector,
        targets: Vec<SeqVector>,
        horizon: u64,
        schedule: Vec<f64>,
        tol: f64,
    },
    /// Expanding Jordan block from `x`: every distance to each target stays above `floor`.
    JordanExpanding {
        lambda: f64,
        size: usize,
        x: SeqVector,
        targets: Vec<SeqVector>,
        horizon: u64,
        schedule: Vec<f64>,
        floor: f64,
    },
    /// The last coordinate of a Jordan orbit is `lambda^k x_l` exactly.
    JordanLastCoordinate { lambda: f64, size: usize, x: SeqVector, horizon: u64 },
    /// A nonzero component `c` in a summand `mu I` with `|mu| > 1` forces
    /// `j_k >= |mu|^k (|c| - delta) - ||y||` at every level with `delta < |c|`.
    Diverging { base: SeqVector, block: usize, growth: f64, horizon: u64, schedule: Vec<f64>, min_final: f64 },
    /// `lambda I_C ⊕ T` from `0 ⊕ x` to `mu ⊕ y`, with the tail extracted from a
    /// reach profile of `T` from `x` to `y`.
    FirstCoordSum {
        mu: Scalar,
        lambda: Scalar,
        tail_op: OperatorSpec,
        x: SeqVector,
        y: SeqVector,
        horizon: u64,
        schedule: Vec<f64>,
    },
    /// A fabricated witness for `T ⊕ T*`: the pairing identity holds on every
    /// pair while the limit equality is violated by `expected_drift`.
    Pairing { witness: Witness, expected_drift: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryCase {
    pub name: String,
    pub summary: String,
    pub citation: String,
    pub op: OperatorSpec,
    pub expectations: Vec<Expectation>,
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictCheck {
    pub label: String,
    pub expected: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_reason: Option<Reason>,
    pub observed: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    pub citation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
    /// Smallest distance at the finest `delta` level of an inconclusive profile.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_floor: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeCheck {
    pub probe: String,
    pub pass: bool,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub citation: String,
    pub pass: bool,
    pub verdicts: Vec<VerdictCheck>,
    pub probes: Vec<ProbeCheck>,
}

const NAMES: [&str; 11] = [
    "adjoint-sum",
    "bilateral-split",
    "expanding-sum",
    "half-shift",
    "inverse-pair",
    "jordan-contracting",
    "jordan-expanding",
    "linf-two-shift",
    "two-B-hypercyclic",
    "two-I-plus-three-B",
    "two-I-plus-two-B",
];

/// Case names in sorted order.
pub fn list_cases() -> Vec<&'static str> {
    NAMES.to_vec()
}

fn re(v: f64) -> Scalar {
    Scalar::new(v, 0.0)
}

fn l2_shift(c: f64) -> Result<OperatorSpec> {
    OperatorSpec::backward_shift(WeightSeq::constant(c), ShiftSpace::L2)
}

fn scalar_c(lambda: f64) -> Result<OperatorSpec> {
    OperatorSpec::scalar_identity(re(lambda), SpaceTag::FiniteDim(1))
}

fn c_vec(z: f64) -> Result<SeqVector> {
    SeqVector::block(SpaceTag::FiniteDim(1), 1, vec![re(z)])
}

fn e1(space: SpaceTag) -> Result<SeqVector> {
    SeqVector::basis(space, 1)
}

fn expect(label: &str, base: Option<SeqVector>, kind: VerdictKind, reason: Option<Reason>) -> Expectation {
    Expectation { label: label.to_string(), op: None, base, kind, reason, min_floor: None }
}

/// Seeded unit vectors with coordinates uniform in the complex unit square.
fn random_units(space: &SpaceTag, dim: usize, count: usize, seed: u64) -> Result<Vec<SeqVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords: Vec<Scalar> =
                (0..dim).map(|_| Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let v = SeqVector::block(space.clone(), 1, coords)?;
            let n = v.norm();
            Ok(v.scale(re(1.0 / n)))
        })
        .collect()
}

pub fn build_case(name: &str, cfg: &RunConfig) -> Result<GalleryCase> {
    use VerdictKind::*;
    let l2 = SpaceTag::UnilateralL2;
    let schedule = cfg.delta_schedule.clone();
    let k = cfg.horizon;
    let case = |summary: &str, citation: &str, op, expectations, probes| GalleryCase {
        name: name.to_string(),
        summary: summary.to_string(),
        citation: citation.to_string(),
        op,
        expectations,
        probes,
    };
    let c = match name {
        "half-shift" => {
            let op = l2_shift(0.5)?;
            let units = random_units(&l2, cfg.truncation / 2, 2, cfg.seed)?;
            case(
                "1/2 B on l2: every orbit tends to 0, so L(x) = J(x) = {0}",
                Reason::SpectralRadiusBelowOne.citation(),
                op,
                vec![expect("default base", None, Disqualified, Some(Reason::SpectralRadiusBelowOne))],
                vec![Probe::Collapse {
                    x: units[0].clone(),
                    y: units[1].clone(),
                    schedule: vec![0.5, 0.25, 0.1],
                    horizon: k,
                    l_floor: 0.9,
                    zero_tol: 1e-6,
                }],
            )
        }
        "linf-two-shift" => {
            let linf = SpaceTag::UnilateralLinf;
            let ones = SeqVector::from_reals(linf.clone(), 1, &vec![1.0; 32])?;
            let harmonic: Vec<f64> = (1..=1000).map(|j| 1.0 / j as f64).collect();
            let harmonic = SeqVector::from_reals(linf.clone(), 1, &harmonic)?;
            case(
                "2B on l^inf: J(x) = l^inf exactly for x in c_0",
                crate::criteria::CERTIFIED_LINF_CITATION,
                OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::Linf)?,
                vec![
                    expect("base e_1", Some(e1(linf.clone())?), JClassCertified, None),
                    expect("base all-ones", Some(ones.clone()), Inconclusive, None),
                ],
                vec![
                    Probe::C0Membership {
                        label: "e_1".into(),
                        vector: e1(linf)?,
                        tail_tol: cfg.c0_tail_tol,
                        tail_start: cfg.c0_tail_start,
                        expected: true,
                    },
                    Probe::C0Membership {
                        label: "1/j tail".into(),
                        vector: harmonic,
                        tail_tol: 1e-2,
                        tail_start: 100,
                        expected: true,
                    },
                    Probe::C0Membership {
                        label: "all-ones".into(),
                        vector: ones,
                        tail_tol: cfg.c0_tail_tol,
                        tail_start: cfg.c0_tail_start,
                        expected: false,
                    },
                ],
            )
        }
        "two-I-plus-two-B" => {
            let op = OperatorSpec::direct_sum(vec![scalar_c(2.0)?, l2_shift(2.0)?])?;
            let y = e1(l2.clone())?;
            let w = SeqVector::from_reals(l2.clone(), 1, &[0.5, -0.25, 0.125])?;
            case(
                "2I ⊕ 2B is not hypercyclic, yet J(0 ⊕ y) is the whole space",
                crate::criteria::CERTIFIED_SUM_CITATION,
                op,
                vec![
                    expect("base 0 ⊕ y", Some(SeqVector::sum(vec![c_vec(0.0)?, y.clone()])?), JClassCertified, None),
                    expect("base 1 ⊕ y", Some(SeqVector::sum(vec![c_vec(1.0)?, y.clone()])?), Inconclusive, None),
                ],
                vec![
                    Probe::FirstCoordSum {
                        mu: re(0.75),
                        lambda: re(2.0),
                        tail_op: l2_shift(2.0)?,
                        x: y.clone(),
                        y: w,
                        horizon: k,
                        schedule: schedule.clone(),
                    },
                    Probe::Diverging {
                        base: SeqVector::sum(vec![c_vec(1.0)?, y])?,
                        block: 0,
                        growth: 2.0,
                        horizon: k,
                        schedule: schedule.clone(),
                        min_final: 1e6,
                    },
                ],
            )
        }
        "two-I-plus-three-B" => {
            let op = OperatorSpec::direct_sum(vec![scalar_c(2.0)?, l2_shift(3.0)?])?;
            let y = e1(l2.clone())?;
            let x = SeqVector::sum(vec![c_vec(1.0)?, y.clone()])?;
            let three_b = l2_shift(3.0)?;
            let py = apply(&three_b, &y)?.combine(re(1.0), &y, re(-2.0))?;
            case(
                "2I ⊕ 3B: x = 1 ⊕ y is cyclic with J(x) empty, while J(P(T) x) is the whole space for P(z) = z - 2",
                crate::criteria::CERTIFIED_SUM_CITATION,
                op,
                vec![
                    expect("base x = 1 ⊕ y", Some(x.clone()), Inconclusive, None),
                    expect(
                        "base P(T) x = 0 ⊕ P(3B) y",
                        Some(SeqVector::sum(vec![c_vec(0.0)?, py])?),
                        JClassCertified,
                        None,
                    ),
                ],
                vec![Probe::Diverging {
                    base: x,
                    block: 0,
                    growth: 2.0,
                    horizon: k,
                    schedule: schedule.clone(),
                    min_final: 1e6,
                }],
            )
        }
        "expanding-sum" => {
            let s = OperatorSpec::diagonal(EntrySeq::list(vec![re(2.0), re(3.0)], re(3.0)), SpaceTag::FiniteDim(2))?;
            let op = OperatorSpec::direct_sum(vec![s, l2_shift(2.0)?])?;
            let zero = SeqVector::from_reals(SpaceTag::FiniteDim(2), 1, &[0.0, 0.0])?;
            let u = SeqVector::from_reals(SpaceTag::FiniteDim(2), 1, &[0.0, 1.0])?;
            let y = e1(l2.clone())?;
            case(
                "S ⊕ T with sigma(S) outside the closed disk and T hypercyclic: the J-class vectors are {0} ⊕ Y",
                crate::criteria::CERTIFIED_SUM_CITATION,
                op,
                vec![
                    expect("default base", None, JClassCertified, None),
                    expect("base 0 ⊕ y", Some(SeqVector::sum(vec![zero, y.clone()])?), JClassCertified, None),
                    expect("base u ⊕ y, u != 0", Some(SeqVector::sum(vec![u.clone(), y.clone()])?), Inconclusive, None),
                ],
                vec![Probe::Diverging {
                    base: SeqVector::sum(vec![u, y])?,
                    block: 0,
                    growth: 3.0,
                    horizon: k,
                    schedule: schedule.clone(),
                    min_final: 1e6,
                }],
            )
        }
        "inverse-pair" => {
            let s = OperatorSpec::bilateral_shift(WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 })?;
            let op = OperatorSpec::direct_sum(vec![scalar_c(2.0)?, s])?;
            let inv = inverse(&op)?;
            let mut inv_expect = expect("inverse, default base", None, Inconclusive, None);
            inv_expect.op = Some(inv);
            inv_expect.min_floor = Some(0.5);
            case(
                "lambda I_C ⊕ S is J-class while its inverse lambda^{-1} I_C ⊕ S^{-1} is not",
                crate::criteria::CERTIFIED_SUM_CITATION,
                op,
                vec![expect("default base", None, JClassCertified, None), inv_expect],
                vec![],
            )
        }
        "adjoint-sum" => {
            let t = l2_shift(2.0)?;
            let op = OperatorSpec::direct_sum(vec![t.clone(), adjoint(&t)?])?;
            let y = e1(l2.clone())?;
            let zero = y.scale(Scalar::default());
            let pairs = [2u64, 4, 6, 8]
                .iter()
                .map(|&k| {
                    let a = SeqVector::basis(l2.clone(), 1 + k as i64)?.scale(re(0.5f64.powi(k as i32)));
                    Ok(WitnessPair { k, x: SeqVector::sum(vec![a, y.clone()])? })
                })
                .collect::<Result<Vec<_>>>()?;
            let fake = Witness::new(
                op.clone(),
                SeqVector::sum(vec![zero.clone(), y.clone()])?,
                SeqVector::sum(vec![y, zero])?,
                pairs,
                Direction::Forward,
            )?;
            case(
                "2B ⊕ (2B)*: no operator of the form T ⊕ T* is J-class",
                Reason::AdjointDirectSum.citation(),
                op,
                vec![expect("default base", None, Disqualified, Some(Reason::AdjointDirectSum))],
                vec![Probe::Pairing { witness: fake, expected_drift: 1.0 }],
            )
        }
        "jordan-contracting" | "jordan-expanding" => {
            let contracting = name == "jordan-contracting";
            let lambda = if contracting { 0.5 } else { 1.5 };
            let size = 3;
            let c3 = SpaceTag::FiniteDim(size);
            let op = OperatorSpec::jordan(re(lambda), size)?;
            let mut targets = random_units(&c3, size, 4, cfg.seed ^ 0x5eed)?;
            let probes = if contracting {
                let x = random_units(&c3, size, 1, cfg.seed ^ 0xa11)?.remove(0);
                targets.insert(0, SeqVector::from_reals(c3.clone(), 1, &[0.0; 3])?);
                vec![Probe::JordanContracting {
                    lambda,
                    size,
                    x,
                    targets,
                    horizon: k,
                    schedule: vec![0.25, 0.1, 0.01],
                    tol: 1e-6,
                }]
            } else {
                let last = SeqVector::from_reals(c3.clone(), 1, &[0.3, -0.2, 1.0])?;
                vec![
                    Probe::JordanExpanding {
                        lambda,
                        size,
                        x: e1(c3)?,
                        targets,
                        horizon: k,
                        schedule: vec![0.25, 0.1, 0.01],
                        floor: 0.1,
                    },
                    Probe::JordanLastCoordinate { lambda, size, x: last, horizon: k },
                ]
            };
            case(
                if contracting {
                    "Jordan block with |lambda| < 1: J(x) = {0}"
                } else {
                    "Jordan block with |lambda| > 1: the last coordinate of every orbit with x_l != 0 blows up"
                },
                Reason::FiniteDimensional.citation(),
                op,
                vec![expect("default base", None, Disqualified, Some(Reason::FiniteDimensional))],
                probes,
            )
        }
        "bilateral-split" => case(
            "bilateral shift with weights 2 on indices >= 1 and 1/2 below: hypercyclic",
            crate::criteria::BILATERAL_CITATION,
            OperatorSpec::bilateral_shift(WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 })?,
            vec![expect("default base", None, HypercyclicCriterionPositive, None)],
            vec![],
        ),
        "two-B-hypercyclic" => case(
            "2B on l2 is hypercyclic, so J(x) = l2 for every x",
            crate::criteria::UNILATERAL_CITATION,
            l2_shift(2.0)?,
            vec![expect("default base", None, HypercyclicCriterionPositive, None)],
            vec![],
        ),
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(c)
}

fn check_verdict(e: &Expectation, v: &Verdict) -> VerdictCheck {
    let profile_floor = v.profile.as_ref().and_then(|p| p.levels.last()).map(|l| l.min_distance);
    let witness_verified = v.verification.as_ref().map(|r| r.pass);
    let pass = v.kind == e.kind
        && (e.reason.is_none() || e.reason == v.reason)
        && witness_verified.unwrap_or(true)
        && e.min_floor.is_none_or(|f| profile_floor.is_some_and(|p| p >= f))
        && !v.citation.is_empty();
    VerdictCheck {
        label: e.label.clone(),
        expected: e.kind,
        expected_reason: e.reason,
        observed: v.kind,
        reason: v.reason,
        citation: v.citation.clone(),
        witness_verified,
        profile_floor,
        notes: v.notes.clone(),
        pass,
    }
}

fn check(probe: &str, pass: bool, detail: serde_json::Value) -> ProbeCheck {
    ProbeCheck { probe: probe.to_string(), pass, detail }
}

fn run_probe(op: &OperatorSpec, p: &Probe, cfg: &RunConfig) -> Result<ProbeCheck> {
    Ok(match p {
        Probe::C0Membership { label, vector, tail_tol, tail_start, expected } => {
            let got = c0_membership(vector, *tail_tol, *tail_start);
            check("c0_membership", got == *expected, json!({"label": label, "member": got, "expected": expected}))
        }
        Probe::Collapse { x, y, schedule, horizon, l_floor, zero_tol } => {
            let norm = op.norm_bound();
            let profile = j_profile(op, x, y, *horizon, schedule, cfg)?;
            let worst = profile
                .entries
                .iter()
                .map(|e| e.distance - (1.0 - (1.0 + e.delta) * norm.powi(e.k as i32)))
                .fold(f64::INFINITY, f64::min);
            let (l_y, _) = l_distance(op, x, y, *horizon, cfg)?;
            let zero = y.scale(Scalar::default());
            let (l_0, _) = l_distance(op, x, &zero, *horizon, cfg)?;
            check(
                "collapse",
                worst >= -1e-9 && l_y >= *l_floor && l_0 < *zero_tol,
                json!({"min_slack_over_bound": worst, "l_distance_to_y": l_y, "l_distance_to_0": l_0}),
            )
        }
        Probe::JordanContracting { lambda, size, x, targets, horizon, schedule, tol } => {
            let probe = jordan_probe(re(*lambda), *size, x, targets, *horizon, schedule, cfg)?;
            let rows: Vec<_> = probe
                .rows
                .iter()
                .map(|r| json!({"target_norm": r.target_norm, "min": r.min_distance, "final": r.final_distance}))
                .collect();
            let pass = probe.rows.iter().all(|r| {
                if r.target_norm == 0.0 {
                    r.min_distance < *tol
                } else {
                    (r.final_distance - r.target_norm).abs() <= *tol
                }
            });
            check("jordan_contracting", pass, json!({"rows": rows}))
        }
        Probe::JordanExpanding { lambda, size, x, targets, horizon, schedule, floor } => {
            let probe = jordan_probe(re(*lambda), *size, x, targets, *horizon, schedule, cfg)?;
            let mins: Vec<f64> = probe.rows.iter().map(|r| r.min_distance).collect();
            check("jordan_expanding", mins.iter().all(|m| m >= floor), json!({"min_distances": mins, "floor": floor}))
        }
        Probe::JordanLastCoordinate { lambda, size, x, horizon } => {
            let j = OperatorSpec::jordan(re(*lambda), *size)?;
            let v = iterate(&j, x, *horizon)?;
            let last = v.coord(*size as i64);
            let expected = x.coord(*size as i64) * lambda.powi(*horizon as i32);
            let err = (last - expected).norm() / expected.norm().max(1.0);
            check("jordan_last_coordinate", err <= 1e-12, json!({"last": last.norm(), "expected": expected.norm()}))
        }
        Probe::Diverging { base, block, growth, horizon, schedule, min_final } => {
            let y = default_target(&op.space())?;
            let c = base.parts().and_then(|p| p.get(*block)).map(|b| b.norm()).unwrap_or(0.0);
            let profile = j_profile(op, base, &y, *horizon, schedule, cfg)?;
            let yn = y.norm();
            let mut bound_ok = true;
            for e in profile.entries.iter().filter(|e| e.delta < c) {
                let bound = growth.powi(e.k as i32) * (c - e.delta) - yn;
                bound_ok &= e.distance >= bound - 1e-9 * bound.abs().max(1.0);
            }
            let last = profile.level_entries(profile.schedule.len() - 1).last().map(|e| e.distance).unwrap_or(0.0);
            check("diverging", bound_ok && last >= *min_final, json!({"component_norm": c, "final_distance": last}))
        }
        Probe::FirstCoordSum { mu, lambda, tail_op, x, y, horizon, schedule } => {
            let profile = j_profile(tail_op, x, y, *horizon, schedule, cfg)?;
            let tail = extract_witness(&profile, tail_op, x, y, cfg)?;
            let w = first_coord_sum_witness(*mu, *lambda, &tail)?;
            let r = verify_documented(&w)?;
            check("first_coord_sum", r.pass, json!({"ks": w.ks(), "pass": r.pass}))
        }
        Probe::Pairing { witness, expected_drift } => {
            let probe = adjoint_pairing_probe(witness)?;
            let verified = verify_documented(witness).map(|r| r.pass).unwrap_or(false);
            let errs = witness.errors()?;
            let pass = probe.holds && (probe.forced_drift - expected_drift).abs() <= 1e-12;
            check(
                "adjoint_pairing",
                pass,
                json!({"pairing_holds": probe.holds, "forced_drift": probe.forced_drift, "documented_pass": verified,
                       "target_errors": errs.iter().map(|e| e.1).collect::<Vec<_>>()}),
            )
        }
    })
}

/// Runs every expectation and probe of the case.
pub fn run_case(name: &str, cfg: &RunConfig) -> Result<CaseReport> {
    let case = build_case(name, cfg)?;
    let verdicts = case
        .expectations
        .iter()
        .map(|e| {
            let op = e.op.as_ref().unwrap_or(&case.op);
            let v = assemble_verdict(op, e.base.as_ref(), cfg)?;
            Ok(check_verdict(e, &v))
        })
        .collect::<Result<Vec<_>>>()?;
    let probes = case.probes.iter().map(|p| run_probe(&case.op, p, cfg)).collect::<Result<Vec<_>>>()?;
    let pass = verdicts.iter().all(|v| v.pass) && probes.iter().all(|p| p.pass);
    Ok(CaseReport { name: case.name, citation: case.citation, pass, verdicts, probes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub seed: f64,
    pub iterations: usize,
    pub bins: usize,
    pub visited: usize,
    pub fraction: f64,
    /// Orbit points per bin.
    pub counts: Vec<u64>,
}

/// Longest cycle recognized as degenerate.
const SHORT_CYCLE: usize = 16;

/// Fraction of `bins` equal subintervals of `(0, 1)` visited by the orbit of
/// `f(x) = 4x(1 - x)`. The map is chaotic on `(0, 1)`, so a generic orbit is
/// dense: unlike linear maps on finite-dimensional spaces, `J(x)` is the whole
/// interval here.
pub fn logistic_orbit_coverage(seed: f64, iterations: usize, bins: usize) -> Result<Coverage> {
    if !(seed > 0.0 && seed < 1.0) {
        return Err(Error::DegenerateSeed(format!("seed {seed} is not in (0, 1)")));
    }
    if bins < 2 {
        return Err(Error::InvalidConfig("need at least two bins".into()));
    }
    let mut counts = vec![0u64; bins];
    let mut recent = [f64::NAN; SHORT_CYCLE];
    let mut x = seed;
    for n in 0..iterations {
        if x <= 0.0 || x >= 1.0 {
            return Err(Error::DegenerateSeed(format!("orbit of {seed} leaves (0, 1) at step {n}")));
        }
        if recent.contains(&x) {
            return Err(Error::DegenerateSeed(format!(
                "orbit of {seed} enters a cycle of length <= {SHORT_CYCLE} by step {n}"
            )));
        }
        recent[n % SHORT_CYCLE] = x;
        counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
        x = 4.0 * x * (1.0 - x);
    }
    let visited = counts.iter().filter(|&&c| c > 0).count();
    Ok(Coverage { seed, iterations, bins, visited, fraction: visited as f64 / bins as f64, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case_is_an_error() {
        assert_eq!(run_case("no-such-case", &RunConfig::default()).unwrap_err().kind(), "UnknownCase");
    }

    #[test]
    fn logistic_fixed_point_and_escape_are_degenerate() {
        assert_eq!(logistic_orbit_coverage(0.75, 10, 8).unwrap_err().kind(), "DegenerateSeed");
        assert_eq!(logistic_orbit_coverage(0.5, 10, 8).unwrap_err().kind(), "DegenerateSeed");
        assert_eq!(logistic_orbit_coverage(0.0, 10, 8).unwrap_err().kind(), "DegenerateSeed");
    }

    #[test]
    fn logistic_generic_seed_covers_the_interval() {
        let c = logistic_orbit_coverage(0.123, 100_000, 256).unwrap();
        assert!(c.fraction >= 0.99);
    }
}
