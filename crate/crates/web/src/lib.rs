//! Browser bindings for three interactive probes. Every export returns a JSON
//! string and raises a JS `Error` carrying the core error kind on failure.

use jclass_core::criteria::salas_bilateral;
use jclass_core::gallery::logistic_orbit_coverage;
use jclass_core::operator::{iterate, OperatorSpec, SeqVector, ShiftSpace, SpaceTag, WeightSeq};
use jclass_core::reach::j_profile;
use jclass_core::{Error, RunConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Powers probed by the profile explorer are capped so a slider cannot
/// request a truncation past the default dimension limit.
const MAX_K: u64 = 120;

fn js(e: Error) -> JsError {
    JsError::new(&format!("{}: {e}", e.kind()))
}

fn to_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

#[derive(Serialize)]
struct ShiftProfile {
    k: Vec<u64>,
    /// `dist(e_target, T^k(ball(e_base, delta)))`.
    j_distance: Vec<f64>,
    /// `||T^k e_base - e_target||`.
    orbit_distance: Vec<f64>,
}

/// Distances from `e_target` to `T^k(ball(e_base, delta))` for the constant
/// weighted backward shift `weight * B` on `l^2`, for `k = 1..=kmax`.
#[wasm_bindgen]
pub fn shift_profile(weight: f64, base: u32, target: u32, delta: f64, kmax: u32) -> Result<String, JsError> {
    let kmax = u64::from(kmax).clamp(1, MAX_K);
    let cfg = RunConfig { horizon: kmax, ..RunConfig::default() };
    let op = OperatorSpec::backward_shift(WeightSeq::constant(weight), ShiftSpace::L2).map_err(js)?;
    let x = SeqVector::basis(SpaceTag::UnilateralL2, i64::from(base.max(1))).map_err(js)?;
    let y = SeqVector::basis(SpaceTag::UnilateralL2, i64::from(target.max(1))).map_err(js)?;
    let profile = j_profile(&op, &x, &y, kmax, &[delta], &cfg).map_err(js)?;
    let mut orbit_distance = Vec::with_capacity(kmax as usize);
    let mut v = x;
    for _ in 0..kmax {
        v = iterate(&op, &v, 1).map_err(js)?;
        orbit_distance.push(v.distance(&y).map_err(js)?);
    }
    Ok(to_string(&ShiftProfile {
        k: profile.entries.iter().map(|e| e.k).collect(),
        j_distance: profile.entries.iter().map(|e| e.distance).collect(),
        orbit_distance,
    }))
}

#[derive(Serialize)]
struct ProductCurves {
    q: i64,
    /// `ln prod_{i=1}^n alpha_{i+q}` for `n = 1..=horizon`.
    log_forward: Vec<f64>,
    /// `ln prod_{i=0}^{n-1} alpha_{q-i}` for `n = 1..=horizon`.
    log_backward: Vec<f64>,
    log_big: f64,
    log_small: f64,
    first_n: Option<u64>,
    positive: bool,
}

/// Log weight products of the bilateral shift with weights `positive` on
/// indices `>= 1` and `nonpositive` on indices `<= 0`, at offset `q`.
#[wasm_bindgen]
pub fn salas_curves(positive: f64, nonpositive: f64, horizon: u32, q: i32) -> Result<String, JsError> {
    let cfg = RunConfig::default();
    let weights = WeightSeq::TwoSidedSplit { positive, nonpositive };
    let q = i64::from(q);
    let report = salas_bilateral(&weights, horizon as usize, (q, q), cfg.big_margin, cfg.small_margin).map_err(js)?;
    let stats = report.q_stats.into_iter().next().expect("one offset requested");
    Ok(to_string(&ProductCurves {
        q,
        log_forward: stats.log_forward,
        log_backward: stats.log_backward,
        log_big: cfg.big_margin.ln(),
        log_small: cfg.small_margin.ln(),
        first_n: stats.first_n,
        positive: report.positive,
    }))
}

/// Bin counts of an orbit of the logistic map `4x(1 - x)` on `(0, 1)`.
#[wasm_bindgen]
pub fn logistic_histogram(seed: f64, iterations: u32, bins: u32) -> Result<String, JsError> {
    let c = logistic_orbit_coverage(seed, iterations as usize, bins as usize).map_err(js)?;
    Ok(to_string(&c))
}
