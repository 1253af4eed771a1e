//! Horizon surrogates for the weight-product characterizations of hypercyclic
//! weighted backward shifts on `l^2`.
//!
//! Products are accumulated as sums of `ln alpha_i` in index order, so the
//! statistics are reproducible bit-for-bit and never overflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::WeightSeq;

/// Relative slack on margin comparisons, absorbing summation roundoff.
const LOG_SLACK: f64 = 1e-12;

pub const UNILATERAL_CITATION: &str = "A unilateral weighted backward shift on l^2 is hypercyclic iff \
sup_n prod_{i=1}^n alpha_i = +inf; a hypercyclic operator satisfies J(x) = X for every x.";
pub const BILATERAL_CITATION: &str = "A bilateral weighted backward shift on l^2(Z) is hypercyclic iff for \
every q there are k_n -> inf with prod_{i=1}^{k_n} alpha_{i+q} -> inf and prod_{i=0}^{k_n-1} alpha_{q-i} -> 0; \
a hypercyclic operator satisfies J(x) = X for every x.";

/// Statistics for one offset `q`. Backward fields are absent for unilateral shifts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QStats {
    pub q: i64,
    /// Running sup over `n <= N` of `sum_{i=1}^n ln alpha_{i+q}`, and its first argmax.
    pub log_forward_sup: f64,
    pub forward_sup_n: u64,
    /// Running inf over `n <= N` of `sum_{i=0}^{n-1} ln alpha_{q-i}`, and its first argmin.
    pub log_backward_inf: Option<f64>,
    pub backward_inf_n: Option<u64>,
    /// The forward sum sets a new record after `n = floor(0.9 N)`.
    pub growing_last_decade: bool,
    /// Smallest `n` meeting every margin for this `q`.
    pub first_n: Option<u64>,
    pub pass: bool,
    #[serde(skip)]
    pub log_forward: Vec<f64>,
    #[serde(skip)]
    pub log_backward: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub horizon: usize,
    pub bilateral: bool,
    /// `M_0`: forward products must reach it.
    pub big_margin: f64,
    /// `m_0`: backward products must fall to it (bilateral only).
    pub small_margin: Option<f64>,
    pub q_stats: Vec<QStats>,
    /// Smallest `n` meeting the margins for every `q` at once (diagnostic).
    pub uniform_n: Option<u64>,
    pub positive: bool,
    pub citation: String,
}

impl CriterionReport {
    /// Columns `q, n, log_forward_product, log_backward_product`; the last is
    /// empty for unilateral shifts.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(e.to_string());
        w.write_record(["q", "n", "log_forward_product", "log_backward_product"]).map_err(io)?;
        for s in &self.q_stats {
            for (i, f) in s.log_forward.iter().enumerate() {
                let b = s.log_backward.get(i).map(|b| format!("{b:e}")).unwrap_or_default();
                w.write_record([s.q.to_string(), (i + 1).to_string(), format!("{f:e}"), b]).map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn at_least(value: f64, threshold: f64) -> bool {
    value >= threshold - LOG_SLACK * threshold.abs().max(1.0)
}

fn at_most(value: f64, threshold: f64) -> bool {
    value <= threshold + LOG_SLACK * threshold.abs().max(1.0)
}

/// Prefix sums `s_n = sum_{i<n} ln alpha(index(i))`, `n = 1..=horizon`.
fn log_prefix(weights: &WeightSeq, horizon: usize, index: impl Fn(i64) -> i64) -> Vec<f64> {
    let mut acc = 0.0;
    (0..horizon as i64)
        .map(|i| {
            acc += weights.weight(index(i)).ln();
            acc
        })
        .collect()
}

/// First index of the extreme value under `better`.
fn extreme(values: &[f64], better: impl Fn(f64, f64) -> bool) -> (f64, u64) {
    values
        .iter()
        .enumerate()
        .fold((values[0], 1), |best, (i, &v)| if better(v, best.0) { (v, i as u64 + 1) } else { best })
}

fn growing_last_decade(forward: &[f64]) -> bool {
    let cut = forward.len() * 9 / 10;
    let head = forward[..cut].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail = forward[cut..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    tail > head + LOG_SLACK * head.abs().max(1.0) || (cut == 0 && tail.is_finite())
}

fn check_margins(horizon: usize, big: f64, small: Option<f64>) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidConfig("criterion horizon must be positive".into()));
    }
    if !(big > 1.0 && big.is_finite()) {
        return Err(Error::InvalidConfig("growth margin must exceed 1".into()));
    }
    if let Some(m) = small {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::InvalidConfig("decay margin must lie in (0, 1)".into()));
        }
    }
    Ok(())
}

/// Positive iff `sup_{n<=N} prod_{i=1}^n alpha_i >= M_0` and the running sup
/// still sets a record in the last tenth of the horizon.
pub fn salas_unilateral(weights: &WeightSeq, horizon: usize, big_margin: f64) -> Result<CriterionReport> {
    check_margins(horizon, big_margin, None)?;
    weights.validate(false)?;
    let forward = log_prefix(weights, horizon, |i| i + 1);
    let (log_forward_sup, forward_sup_n) = extreme(&forward, |a, b| a > b);
    let growing = growing_last_decade(&forward);
    let threshold = big_margin.ln();
    let first_n = forward.iter().position(|&f| at_least(f, threshold)).map(|i| i as u64 + 1);
    let pass = first_n.is_some() && growing;
    let stats = QStats {
        q: 0,
        log_forward_sup,
        forward_sup_n,
        log_backward_inf: None,
        backward_inf_n: None,
        growing_last_decade: growing,
        first_n,
        pass,
        log_forward: forward,
        log_backward: Vec::new(),
    };
    Ok(CriterionReport {
        horizon,
        bilateral: false,
        big_margin,
        small_margin: None,
        q_stats: vec![stats],
        uniform_n: first_n,
        positive: pass,
        citation: UNILATERAL_CITATION.to_string(),
    })
}

/// Positive iff for every `q` in `q_range` some `n <= N` has
/// `prod_{i=1}^n alpha_{i+q} >= M_0` and `prod_{i=0}^{n-1} alpha_{q-i} <= m_0`.
pub fn salas_bilateral(
    weights: &WeightSeq,
    horizon: usize,
    q_range: (i64, i64),
    big_margin: f64,
    small_margin: f64,
) -> Result<CriterionReport> {
    check_margins(horizon, big_margin, Some(small_margin))?;
    if q_range.0 > q_range.1 {
        return Err(Error::InvalidConfig("q_range must satisfy lo <= hi".into()));
    }
    weights.validate(true)?;
    let (big, small) = (big_margin.ln(), small_margin.ln());
    let q_stats: Vec<QStats> = (q_range.0..=q_range.1)
        .map(|q| {
            let forward = log_prefix(weights, horizon, |i| i + 1 + q);
            let backward = log_prefix(weights, horizon, |i| q - i);
            let (log_forward_sup, forward_sup_n) = extreme(&forward, |a, b| a > b);
            let (binf, binf_n) = extreme(&backward, |a, b| a < b);
            let first_n =
                (0..horizon).find(|&i| at_least(forward[i], big) && at_most(backward[i], small)).map(|i| i as u64 + 1);
            QStats {
                q,
                log_forward_sup,
                forward_sup_n,
                log_backward_inf: Some(binf),
                backward_inf_n: Some(binf_n),
                growing_last_decade: growing_last_decade(&forward),
                first_n,
                pass: first_n.is_some(),
                log_forward: forward,
                log_backward: backward,
            }
        })
        .collect();
    let uniform_n = (0..horizon)
        .find(|&i| q_stats.iter().all(|s| at_least(s.log_forward[i], big) && at_most(s.log_backward[i], small)))
        .map(|i| i as u64 + 1);
    let positive = q_stats.iter().all(|s| s.pass);
    Ok(CriterionReport {
        horizon,
        bilateral: true,
        big_margin,
        small_margin: Some(small_margin),
        q_stats,
        uniform_n,
        positive,
        citation: BILATERAL_CITATION.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_two_is_positive_with_exact_sup() {
        let r = salas_unilateral(&WeightSeq::constant(2.0), 64, 1e6).unwrap();
        assert!(r.positive);
        let s = &r.q_stats[0];
        assert_eq!(s.forward_sup_n, 64);
        assert!((s.log_forward_sup - 64.0 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(s.first_n, Some(20));
    }

    #[test]
    fn constant_half_and_one_are_negative() {
        assert!(!salas_unilateral(&WeightSeq::constant(0.5), 64, 1e6).unwrap().positive);
        let one = salas_unilateral(&WeightSeq::constant(1.0), 64, 1e6).unwrap();
        assert!(!one.positive);
        assert_eq!(one.q_stats[0].log_forward_sup, 0.0);
    }

    #[test]
    fn split_bilateral_is_positive_and_constant_two_is_not() {
        let split = WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 };
        let r = salas_bilateral(&split, 64, (-8, 8), 1e6, 1e-6).unwrap();
        assert!(r.positive);
        let q8 = r.q_stats.iter().find(|s| s.q == 8).unwrap();
        assert_eq!(q8.first_n, Some(36));
        assert_eq!(r.uniform_n, Some(36));
        assert!(!salas_bilateral(&WeightSeq::constant(2.0), 64, (-8, 8), 1e6, 1e-6).unwrap().positive);
        assert!(!salas_bilateral(&WeightSeq::constant(1.0), 64, (-8, 8), 1e6, 1e-6).unwrap().positive);
    }

    #[test]
    fn csv_has_one_row_per_q_and_n() {
        let split = WeightSeq::TwoSidedSplit { positive: 2.0, nonpositive: 0.5 };
        let r = salas_bilateral(&split, 5, (-1, 1), 10.0, 0.1).unwrap();
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + 3 * 5);
        assert!(csv.starts_with("q,n,log_forward_product,log_backward_product"));
    }
}
