//! Run-wide numerical settings shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::DEFAULT_MAX_DIM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Largest truncation (total coordinates) any operation may build.
    pub max_dim: usize,
    /// Largest power `k` explored by distance profiles.
    pub horizon: u64,
    /// Strictly decreasing perturbation radii.
    pub delta_schedule: Vec<f64>,
    /// Distance at or below which a profile level counts as reached.
    pub eps_accept: f64,
    /// Growth margin for weight-product criteria.
    pub big_margin: f64,
    /// Decay margin for weight-product criteria.
    pub small_margin: f64,
    /// Horizon for weight-product criteria.
    pub criteria_horizon: usize,
    /// Inclusive `[lo, hi]` range of offsets `q` for bilateral criteria.
    pub q_range: (i64, i64),
    pub seed: u64,
    /// Singular values below `trs_rank_tol * sigma_max` are treated as zero in the solver.
    pub trs_rank_tol: f64,
    /// Relative threshold for numerical rank in cyclicity checks.
    pub rank_tol: f64,
    /// Default number of coordinates for generated sequence windows.
    pub truncation: usize,
    /// A vector passes the `c_0` test when every coordinate at index
    /// `>= c0_tail_start` has modulus `<= c0_tail_tol`.
    pub c0_tail_tol: f64,
    pub c0_tail_start: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_dim: DEFAULT_MAX_DIM,
            horizon: 40,
            delta_schedule: vec![1.0, 1e-1, 1e-2, 1e-3, 1e-4],
            eps_accept: 1e-6,
            big_margin: 1e6,
            small_margin: 1e-6,
            criteria_horizon: 512,
            q_range: (-8, 8),
            seed: 0,
            trs_rank_tol: 1e-12,
            rank_tol: 1e-10,
            truncation: 64,
            c0_tail_tol: 1e-6,
            c0_tail_start: 32,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.max_dim == 0 || self.horizon == 0 || self.criteria_horizon == 0 || self.truncation == 0 {
            return bad("dimensions and horizons must be positive");
        }
        validate_schedule(&self.delta_schedule)?;
        if !(self.eps_accept > 0.0) {
            return bad("eps_accept must be positive");
        }
        if !(self.big_margin > 1.0 && self.small_margin > 0.0 && self.small_margin < 1.0) {
            return bad("margins must satisfy big_margin > 1 > small_margin > 0");
        }
        if self.q_range.0 > self.q_range.1 {
            return bad("q_range must satisfy lo <= hi");
        }
        if !(self.c0_tail_tol >= 0.0) {
            return bad("c0_tail_tol must be nonnegative");
        }
        if !(self.trs_rank_tol > 0.0 && self.rank_tol > 0.0) {
            return bad("rank tolerances must be positive");
        }
        Ok(())
    }

    /// Overrides `max_dim` from `JCLASS_MAX_DIM` when set.
    pub fn with_env(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var("JCLASS_MAX_DIM") {
            self.max_dim = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("JCLASS_MAX_DIM is not a positive integer: {v}")))?;
        }
        self.validate()?;
        Ok(self)
    }
}

pub fn validate_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidConfig("delta schedule is empty".into()));
    }
    if schedule.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(Error::InvalidConfig("delta schedule entries must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidConfig("delta schedule must be strictly decreasing".into()));
    }
    Ok(())
}
