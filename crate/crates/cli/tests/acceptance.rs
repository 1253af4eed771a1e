//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the test log; exits non-zero if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use jclass_core::criteria::{
    c0_membership, cyclic_preservation_check, jordan_probe, salas_bilateral, salas_unilateral,
};
use jclass_core::gallery::{list_cases, logistic_orbit_coverage, run_case};
use jclass_core::operator::{iterate, OperatorSpec, SeqVector, ShiftSpace, SpaceTag, WeightSeq};
use jclass_core::reach::{constrained_lsq, extract_witness, j_profile, l_distance};
use jclass_core::witness::{
    demote_witness, linf_shift_witness, promote_witness, reverse_witness, scale_witness, shift_criterion_witness,
    translate_witness, verify_documented, zero_base_witness, zero_power_witness, Direction, RegularOrbit, Witness,
    WitnessPair,
};
use jclass_core::{RunConfig, Scalar};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Outcome of one criterion: pass flag and a one-line summary.
type Outcome = (bool, String);

/// Name, runtime budget and check.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn shift(c: f64, space: ShiftSpace) -> OperatorSpec {
    OperatorSpec::backward_shift(WeightSeq::constant(c), space).unwrap()
}

fn ks(range: std::ops::RangeInclusive<u64>) -> Vec<u64> {
    range.collect()
}

fn documented(w: &Witness) -> bool {
    verify_documented(w).map(|r| r.pass).unwrap_or(false)
}

fn linf_exactness() -> Outcome {
    let mut r = rng(1);
    let lambda = re(2.0);
    let ns = ks(1..=20);
    let (mut worst_target, mut worst_base) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let y = random_vector(&mut r, &SpaceTag::UnilateralLinf, 32);
        let w = linf_shift_witness(lambda, &y, &ns).unwrap();
        for p in w.pairs() {
            let hit = iterate(w.op(), &p.x, p.k).unwrap().distance(&y).unwrap();
            let base = p.x.distance(w.base()).unwrap();
            worst_target = worst_target.max(hit);
            worst_base = worst_base.max((base - y.norm() / 2f64.powi(p.k as i32)).abs());
        }
    }
    let space = SpaceTag::UnilateralLinf;
    let e1 = SeqVector::basis(space.clone(), 1).unwrap();
    let harmonic: Vec<f64> = (1..=1000).map(|j| 1.0 / j as f64).collect();
    let harmonic = SeqVector::from_reals(space.clone(), 1, &harmonic).unwrap();
    let ones = SeqVector::from_reals(space, 1, &[1.0; 1000]).unwrap();
    let c0 = c0_membership(&e1, 1e-6, 32)
        && c0_membership(&harmonic, 0.01, 100)
        && !c0_membership(&ones, 1e-6, 32)
        && !c0_membership(&ones, 0.01, 100);
    let pass = worst_target <= 1e-12 && worst_base <= 1e-12 && c0;
    (pass, format!("max target error {worst_target:.1e}, max base-norm deviation {worst_base:.1e}, c0 checks {c0}"))
}

fn half_shift_collapse() -> Outcome {
    let cfg = RunConfig::default();
    let op = shift(0.5, ShiftSpace::L2);
    let schedule = [0.5, 0.25, 0.1];
    let mut r = rng(2);
    let (mut worst_gap, mut max_zero) = (f64::INFINITY, 0.0f64);
    let (mut min_orbit, mut at_k, mut min_late) = (f64::INFINITY, 0, f64::INFINITY);
    for _ in 0..20 {
        let x = random_unit(&mut r, &SpaceTag::UnilateralL2, 8);
        let y = random_unit(&mut r, &SpaceTag::UnilateralL2, 8);
        let p = j_profile(&op, &x, &y, 40, &schedule, &cfg).unwrap();
        for e in &p.entries {
            worst_gap = worst_gap.min(e.distance - (1.0 - (1.0 + e.delta) / 2f64.powi(e.k as i32)));
        }
        let (d, k) = l_distance(&op, &x, &y, 40, &cfg).unwrap();
        if d < min_orbit {
            (min_orbit, at_k) = (d, k);
        }
        // From k = 4 on, ||T^k x - y|| >= 1 - 2^-4.
        let late = iterate(&op, &x, 4).unwrap();
        min_late = min_late.min(l_distance(&op, &late, &y, 36, &cfg).unwrap().0);
        let zero = y.scale(re(0.0));
        max_zero = max_zero.max(l_distance(&op, &x, &zero, 40, &cfg).unwrap().0);
    }
    let pass = worst_gap >= -1e-9 && min_orbit >= 0.9 && max_zero < 1e-6;
    (
        pass,
        format!(
            "bound slack {worst_gap:.3e}, min orbit distance to y {min_orbit:.4} at k = {at_k} ({min_late:.4} over k >= 4), orbit distance to 0 {max_zero:.1e}"
        ),
    )
}

/// Exact minimum of `||A e - b||` over the real disk of radius `delta` for
/// invertible 2 x 2 `A`: zero when `A^{-1} b` is feasible, otherwise attained
/// on the circle, searched at 10^6 equally spaced points.
fn disk_oracle(a: &DMatrix<f64>, b: &DVector<f64>, delta: f64) -> f64 {
    let free = a.clone().try_inverse().expect("invertible") * b;
    if free.norm() <= delta {
        return 0.0;
    }
    (0..1_000_000)
        .map(|t| {
            let (s, c) = (t as f64 * std::f64::consts::TAU / 1e6).sin_cos();
            let r0 = a[(0, 0)] * delta * c + a[(0, 1)] * delta * s - b[0];
            let r1 = a[(1, 0)] * delta * c + a[(1, 1)] * delta * s - b[1];
            r0.hypot(r1)
        })
        .fold(f64::INFINITY, f64::min)
}

fn trs_soundness() -> Outcome {
    let mut r = rng(3);
    let (mut boundary, mut monotone, mut active) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..1000 {
        let m = r.gen_range(1..=16);
        let n = r.gen_range(1..=16);
        let a = DMatrix::from_fn(m, n, |_, _| cplx(&mut r));
        let b = random_dvector(&mut r, m);
        let top = r.gen_range(0.05..3.0);
        let mut last = 0.0f64;
        for (i, delta) in [top, top / 2.0, top / 4.0, top / 8.0].into_iter().enumerate() {
            let (e, res, mult) = constrained_lsq(&a, &b, delta).unwrap();
            if mult > 0.0 {
                active += 1;
                boundary = boundary.max((e.norm() - delta).abs() / delta);
            }
            if i > 0 {
                monotone = monotone.max((last - res) / b.norm().max(1.0));
            }
            last = res;
        }
    }
    let mut grid_gap = 0.0f64;
    for _ in 0..20 {
        let a = loop {
            let a = DMatrix::<f64>::from_fn(2, 2, |_, _| r.gen_range(-2.0..2.0));
            if a.determinant().abs() > 0.1 {
                break a;
            }
        };
        let b = DVector::from_fn(2, |_, _| r.gen_range(-3.0..3.0));
        let delta = r.gen_range(0.1..2.0);
        let (_, res, _) = constrained_lsq(&a.map(re), &b.map(re), delta).unwrap();
        let oracle = disk_oracle(&a, &b, delta);
        assert!(res <= oracle + 1e-12, "solver {res} above oracle {oracle}");
        grid_gap = grid_gap.max((res - oracle).abs());
    }
    let pass = boundary <= 1e-8 && monotone <= 1e-12 && grid_gap <= 1e-3;
    (
        pass,
        format!(
            "{active} active solves with max relative boundary gap {boundary:.1e}, residual increase {monotone:.1e}, grid gap {grid_gap:.1e}"
        ),
    )
}

fn log_products_exact(report: &jclass_core::criteria::CriterionReport, alpha: impl Fn(i64) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for s in &report.q_stats {
        let (mut fwd, mut bwd) = (0.0f64, 0.0f64);
        for n in 1..=report.horizon as i64 {
            fwd += alpha(n + s.q).ln();
            worst = worst.max((s.log_forward[(n - 1) as usize] - fwd).abs());
            if report.bilateral {
                bwd += alpha(s.q - (n - 1)).ln();
                worst = worst.max((s.log_backward[(n - 1) as usize] - bwd).abs());
            }
        }
    }
    worst
}

fn weight_products() -> Outcome {
    let uni = |c: f64| salas_unilateral(&WeightSeq::constant(c), 64, 1e6).unwrap();
    let (two, half, one) = (uni(2.0), uni(0.5), uni(1.0));
    let split =
        salas_bilateral(&WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 }, 64, (-8, 8), 1e6, 1e-6).unwrap();
    let bi_two = salas_bilateral(&WeightSeq::constant(2.0), 64, (-8, 8), 1e6, 1e-6).unwrap();
    let verdicts = two.positive && !half.positive && !one.positive && split.positive && !bi_two.positive;
    let drift = [
        log_products_exact(&two, |_| 2.0),
        log_products_exact(&half, |_| 0.5),
        log_products_exact(&one, |_| 1.0),
        log_products_exact(&split, |j| if j >= 1 { 2.0 } else { 0.5 }),
        log_products_exact(&bi_two, |_| 2.0),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    (verdicts && drift <= 1e-12, format!("verdicts as expected: {verdicts}, max log-product deviation {drift:.1e}"))
}

fn jordan_probes() -> Outcome {
    let cfg = RunConfig::default();
    let space = SpaceTag::FiniteDim(3);
    let mut r = rng(5);
    let x = random_unit(&mut r, &space, 3);
    let zero = x.scale(re(0.0));
    let mut targets = vec![zero];
    targets.extend((0..10).map(|_| random_unit(&mut r, &space, 3)));
    let contracting = jordan_probe(re(0.5), 3, &x, &targets, 40, &[0.25, 0.1], &cfg).unwrap();
    let to_zero = contracting.rows[0].min_distance;
    let collapse =
        contracting.rows[1..].iter().map(|row| (row.final_distance - row.target_norm).abs()).fold(0.0, f64::max);
    let e1 = SeqVector::basis(space.clone(), 1).unwrap();
    let units: Vec<SeqVector> = (0..20).map(|_| random_unit(&mut r, &space, 3)).collect();
    let expanding = jordan_probe(re(1.5), 3, &e1, &units, 40, &[0.25, 0.1], &cfg).unwrap();
    let floor = expanding.rows.iter().map(|row| row.min_distance).fold(f64::INFINITY, f64::min);
    let pass = to_zero < 1e-6 && collapse <= 1e-6 && floor >= 0.1;
    (
        pass,
        format!("contracting: distance to 0 {to_zero:.1e}, max | d - ||y|| | {collapse:.1e}; expanding: min distance {floor:.4}"),
    )
}

/// `0_C ⊕ w`: the tail witness with a zero scalar summand in front.
fn with_scalar_summand(first: OperatorSpec, tail: &Witness) -> Witness {
    let c = SpaceTag::FiniteDim(1);
    let zero = || SeqVector::block(c.clone(), 1, vec![re(0.0)]).unwrap();
    let lift = |v: &SeqVector| SeqVector::sum(vec![zero(), v.clone()]).unwrap();
    let op = OperatorSpec::direct_sum(vec![first, tail.op().clone()]).unwrap();
    let pairs = tail.pairs().iter().map(|p| WitnessPair { k: p.k, x: lift(&p.x) }).collect();
    Witness::new(op, lift(tail.base()), lift(tail.target()), pairs, Direction::Forward).unwrap()
}

fn witness_transformations() -> Outcome {
    let cfg = RunConfig::default();
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let mut r = rng(6);
    let uni = SpaceTag::UnilateralL2;
    let two_b = shift(2.0, ShiftSpace::L2);

    // Reversal round trip on the split bilateral shift and on bilateral 2B from base 0.
    let split = OperatorSpec::bilateral_shift(WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 }).unwrap();
    for _ in 0..10 {
        let x = random_unit(&mut r, &SpaceTag::BilateralL2, 6);
        let y = random_unit(&mut r, &SpaceTag::BilateralL2, 6);
        let w = shift_criterion_witness(&split, &x, &y, &[8, 16, 24, 32, 40]).unwrap();
        let back = reverse_witness(&w).unwrap();
        let again = reverse_witness(&back).unwrap();
        let recovered = w
            .pairs()
            .iter()
            .zip(again.pairs())
            .all(|(a, b)| a.k == b.k && a.x.distance(&b.x).unwrap() <= 1e-12 * a.x.norm().max(1.0));
        checks.push(("reverse", documented(&w) && documented(&back) && documented(&again) && recovered));
    }
    let bi_two = OperatorSpec::bilateral_shift(WeightSeq::constant(2.0)).unwrap();
    let y = random_unit(&mut r, &SpaceTag::BilateralL2, 4);
    let zero = y.scale(re(0.0));
    let deep = RunConfig { horizon: 30, ..cfg.clone() };
    let p = j_profile(&bi_two, &zero, &y, 30, &[1.0, 0.1, 0.01], &deep).unwrap();
    let certified = extract_witness(&p, &bi_two, &zero, &y, &deep).unwrap();
    checks.push(("reverse extracted", documented(&reverse_witness(&certified).unwrap())));

    // Promotion of sup-norm witnesses, and promotion undone on the split shift.
    for _ in 0..10 {
        let y = random_vector(&mut r, &SpaceTag::UnilateralLinf, 8);
        let w = linf_shift_witness(re(2.0), &y, &ks(1..=12)).unwrap();
        let once = promote_witness(&w, cfg.max_dim).unwrap();
        let twice = promote_witness(&once, cfg.max_dim).unwrap();
        checks.push(("promote", documented(&once) && documented(&twice)));
        let x = random_unit(&mut r, &SpaceTag::BilateralL2, 4);
        let yb = random_unit(&mut r, &SpaceTag::BilateralL2, 4);
        let w = shift_criterion_witness(&split, &x, &yb, &[10, 20, 30]).unwrap();
        let undone = demote_witness(&promote_witness(&w, cfg.max_dim).unwrap()).unwrap();
        checks.push(("demote", documented(&undone) && undone.target().distance(&yb).unwrap() <= 1e-12));
    }

    // Connectivity grid: lambda x for lambda = 0, 0.1, ..., 1 reaches y.
    let x = random_unit(&mut r, &uni, 6);
    let y = random_unit(&mut r, &uni, 6);
    let powers = ks(1..=40);
    for i in 1..=10 {
        let lambda = i as f64 / 10.0;
        let w = shift_criterion_witness(&two_b, &x, &y.scale(re(1.0 / lambda)), &powers).unwrap();
        let scaled = scale_witness(&w, re(lambda)).unwrap();
        let on_grid = scaled.base().distance(&x.scale(re(lambda))).unwrap() <= 1e-12
            && scaled.target().distance(&y).unwrap() <= 1e-12;
        checks.push(("grid point", documented(&scaled) && on_grid));
    }
    let ladder: Vec<(Scalar, Witness)> = (1..=10)
        .map(|m| {
            let lambda = 2f64.powi(-m);
            let w = shift_criterion_witness(&two_b, &x, &y.scale(re(1.0 / lambda)), &powers).unwrap();
            (re(lambda), scale_witness(&w, re(lambda)).unwrap())
        })
        .collect();
    let at_zero = zero_base_witness(&ladder).unwrap();
    checks.push(("grid point 0", documented(&at_zero) && at_zero.base().norm() == 0.0));

    // Regrouping for powers of the operator.
    let zero = y.scale(re(0.0));
    let from_zero = shift_criterion_witness(&two_b, &zero, &y, &ks(1..=30)).unwrap();
    for m in [1, 2, 3, 5] {
        checks.push(("zero power", documented(&zero_power_witness(&from_zero, m).unwrap())));
    }
    let odd = shift_criterion_witness(&two_b, &zero, &y, &[3, 5, 7, 9, 11, 13]).unwrap();
    let regrouped = zero_power_witness(&odd, 2).unwrap();
    let bookkeeping = regrouped
        .pairs()
        .iter()
        .zip(odd.pairs())
        .all(|(g, p)| g.k == (p.k - 1) / 2 && g.x.distance(&iterate(&two_b, &p.x, 1).unwrap()).unwrap() <= 1e-15);
    checks.push(("zero power residues", documented(&regrouped) && bookkeeping));

    // Translation by a kernel vector, a fixed point, and a period-two point.
    let e1 = SeqVector::basis(uni, 1).unwrap();
    let kernel = translate_witness(&from_zero, &RegularOrbit::Kernel { z: e1.clone() }).unwrap();
    checks.push(("translate kernel", documented(&kernel) && kernel.base().distance(&e1).unwrap() == 0.0));
    let c = SpaceTag::FiniteDim(1);
    let one = SeqVector::block(c.clone(), 1, vec![re(1.0)]).unwrap();
    let z = SeqVector::sum(vec![one, zero.clone()]).unwrap();
    let id = OperatorSpec::scalar_identity(re(1.0), c.clone()).unwrap();
    let fixed =
        translate_witness(&with_scalar_summand(id, &from_zero), &RegularOrbit::FixedPoint { z: z.clone() }).unwrap();
    checks.push(("translate fixed point", documented(&fixed)));
    let flip = OperatorSpec::scalar_identity(re(-1.0), c).unwrap();
    let squared = zero_power_witness(&with_scalar_summand(flip, &from_zero), 2).unwrap();
    let periodic = translate_witness(&squared, &RegularOrbit::FixedPoint { z }).unwrap();
    checks.push(("translate periodic", documented(&periodic)));

    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let pass = failed.is_empty();
    (
        pass,
        format!(
            "{} of {} transformed witnesses verify{}",
            checks.len() - failed.len(),
            checks.len(),
            if pass { String::new() } else { format!("; failing: {}", failed.join(", ")) }
        ),
    )
}

fn cyclic_preservation() -> Outcome {
    let held = (0..200u64)
        .filter(|&seed| {
            let t = cyclic_trial(seed, 0.1, 1e6);
            cyclic_preservation_check(&t.m, &t.p, &t.x, 1e-10).map(|r| r.full).unwrap_or(false)
        })
        .count();
    (held == 200, format!("{held} of 200 trials keep a cyclic vector"))
}

fn gallery() -> Outcome {
    let cfg = RunConfig::default();
    let names = list_cases();
    let mut failing = Vec::new();
    for name in &names {
        let rep = run_case(name, &cfg).unwrap();
        let cited = !rep.citation.is_empty() && rep.verdicts.iter().all(|v| !v.citation.is_empty());
        if !(rep.pass && cited) {
            failing.push(*name);
        }
    }
    let dir = std::env::temp_dir().join(format!("jclass-acceptance-{}", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_jclass"))
        .args(["gallery", "run", "--all", "--out"])
        .arg(&dir)
        .output()
        .unwrap()
        .status;
    let _ = std::fs::remove_dir_all(&dir);
    let pass = failing.is_empty() && status.success();
    (
        pass,
        format!(
            "{} of {} cases match with citations, `gallery run --all` exit {:?}",
            names.len() - failing.len(),
            names.len(),
            status.code()
        ),
    )
}

fn logistic_contrast() -> Outcome {
    let c = logistic_orbit_coverage(0.123, 100_000, 256).unwrap();
    let degenerate = logistic_orbit_coverage(0.75, 100_000, 256).map_err(|e| e.kind());
    let pass = c.fraction >= 0.99 && degenerate == Err("DegenerateSeed");
    (pass, format!("coverage {:.4} ({} of 256 bins), seed 0.75 -> {degenerate:?}", c.fraction, c.visited))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("sup-norm shift witnesses are exact", Duration::from_secs(5), linf_exactness),
        ("contracting shift collapses J onto L", Duration::from_secs(10), half_shift_collapse),
        ("trust-region solver is sound", Duration::from_secs(60), trs_soundness),
        ("weight-product criteria", Duration::from_secs(1), weight_products),
        ("Jordan block probes", Duration::from_secs(30), jordan_probes),
        ("witness transformations verify", Duration::MAX, witness_transformations),
        ("polynomials with dense range keep cyclic vectors", Duration::MAX, cyclic_preservation),
        ("gallery regression", Duration::from_secs(300), gallery),
        ("logistic orbit density contrast", Duration::MAX, logistic_contrast),
    ];
    let mut all = true;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let ok = pass && in_time;
        all &= ok;
        let budget = if limit == Duration::MAX { String::new() } else { format!(", limit {}s", limit.as_secs()) };
        println!(
            "{} criterion {}: {name}: {detail} [{:.2}s{budget}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
