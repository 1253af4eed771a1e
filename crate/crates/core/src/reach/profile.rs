//! Distance profiles over `(k, delta)` grids and witness extraction.

use serde::{Deserialize, Serialize};

use super::ReachKernel;
use crate::config::{validate_schedule, RunConfig};
use crate::error::{Error, Result};
use crate::operator::{OperatorSpec, SeqVector};
use crate::witness::{Direction, Witness, WitnessPair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub k: u64,
    pub delta: f64,
    pub distance: f64,
    pub active: bool,
    pub multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub delta: f64,
    pub min_distance: f64,
    /// Smallest `k` attaining the minimum.
    pub argmin_k: u64,
    pub reached: bool,
}

/// Entries are sorted by `k`, then by position in the schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub horizon: u64,
    pub schedule: Vec<f64>,
    pub eps_accept: f64,
    pub entries: Vec<ProfileEntry>,
    pub levels: Vec<LevelSummary>,
}

impl DistanceProfile {
    /// Every level reached the acceptance threshold.
    pub fn certified(&self) -> bool {
        self.levels.iter().all(|l| l.reached)
    }

    pub fn overall_min(&self) -> f64 {
        self.levels.iter().map(|l| l.min_distance).fold(f64::INFINITY, f64::min)
    }

    pub fn level_entries(&self, level: usize) -> impl Iterator<Item = &ProfileEntry> {
        let n = self.schedule.len();
        self.entries.iter().skip(level).step_by(n)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(e.to_string());
        w.write_record(["k", "delta", "distance", "active", "multiplier"]).map_err(io)?;
        for e in &self.entries {
            w.write_record([
                e.k.to_string(),
                format!("{:e}", e.delta),
                format!("{:e}", e.distance),
                e.active.to_string(),
                format!("{:e}", e.multiplier),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(feature = "parallel")]
fn map_ks<T: Send>(ks: Vec<u64>, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    use rayon::prelude::*;
    ks.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ks<T>(ks: Vec<u64>, f: impl Fn(u64) -> Result<T>) -> Result<Vec<T>> {
    ks.into_iter().map(f).collect()
}

/// Distances for every `1 <= k <= horizon` and every `delta` of the schedule.
/// The solver state for a given `k` is shared by all levels; results are
/// assembled by index, so they do not depend on evaluation order.
pub fn j_profile(
    op: &OperatorSpec,
    x: &SeqVector,
    y: &SeqVector,
    horizon: u64,
    schedule: &[f64],
    cfg: &RunConfig,
) -> Result<DistanceProfile> {
    validate_schedule(schedule)?;
    if horizon == 0 {
        return Err(Error::InvalidConfig("horizon must be positive".into()));
    }
    let rows = map_ks((1..=horizon).collect(), |k| {
        let kernel = ReachKernel::new(op, x, y, k, None, cfg)?;
        schedule
            .iter()
            .map(|&delta| {
                let r = kernel.solve(delta)?;
                Ok(ProfileEntry {
                    k,
                    delta,
                    distance: r.distance,
                    active: r.constraint_active,
                    multiplier: r.multiplier,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let entries: Vec<ProfileEntry> = rows.into_iter().flatten().collect();
    let n = schedule.len();
    let levels = schedule
        .iter()
        .enumerate()
        .map(|(i, &delta)| {
            let (min_distance, argmin_k) = entries.iter().skip(i).step_by(n).fold((f64::INFINITY, 0), |best, e| {
                if e.distance < best.0 {
                    (e.distance, e.k)
                } else {
                    best
                }
            });
            LevelSummary { delta, min_distance, argmin_k, reached: min_distance <= cfg.eps_accept }
        })
        .collect();
    Ok(DistanceProfile { horizon, schedule: schedule.to_vec(), eps_accept: cfg.eps_accept, entries, levels })
}

/// One pair per schedule level: the smallest profiled `k` above the previous
/// pick that reaches `eps_accept`, or, if none remains in the profile, the
/// first later `k` (up to twice the horizon) that does on re-solving.
/// Attached schedules are `delta_n (1 + 1e-10)` and `eps_accept`.
pub fn extract_witness(
    profile: &DistanceProfile,
    op: &OperatorSpec,
    x: &SeqVector,
    y: &SeqVector,
    cfg: &RunConfig,
) -> Result<Witness> {
    let eps = profile.eps_accept;
    let mut last_k = 0;
    let mut pairs = Vec::with_capacity(profile.schedule.len());
    for (level, &delta) in profile.schedule.iter().enumerate() {
        let not_cert = Error::NotCertifiable { level, delta };
        if !profile.levels[level].reached {
            return Err(not_cert);
        }
        let from_profile = profile.level_entries(level).find(|e| e.k > last_k && e.distance <= eps).map(|e| e.k);
        let candidates: Vec<u64> = match from_profile {
            Some(k) => vec![k],
            None => ((last_k + 1).max(profile.horizon + 1)..=2 * profile.horizon.max(last_k + 1)).collect(),
        };
        let mut chosen = None;
        for k in candidates {
            let r = ReachKernel::new(op, x, y, k, None, cfg)?.solve(delta)?;
            if r.distance <= eps && r.perturbation.norm() <= delta * (1.0 + 1e-10) {
                chosen = Some((k, r));
                break;
            }
        }
        let (k, r) = chosen.ok_or(not_cert)?;
        pairs.push(WitnessPair { k, x: x.add(&r.perturbation)? });
        last_k = k;
    }
    let base_tol = profile.schedule.iter().map(|d| d * (1.0 + 1e-10)).collect();
    let target_tol = vec![eps; pairs.len()];
    Witness::new(op.clone(), x.clone(), y.clone(), pairs, Direction::Forward)?.with_schedules(base_tol, target_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{ShiftSpace, SpaceTag, WeightSeq};
    use crate::scalar::Scalar;
    use crate::witness::verify_documented;

    #[test]
    fn linf_two_shift_is_certified_at_every_level() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::Linf).unwrap();
        let x = SeqVector::basis(SpaceTag::UnilateralLinf, 1).unwrap();
        let y = SeqVector::from_reals(SpaceTag::UnilateralLinf, 1, &[3.0, -1.0, 0.5]).unwrap();
        let cfg = RunConfig::default();
        let p = j_profile(&op, &x, &y, 40, &[1.0, 0.1, 0.01], &cfg).unwrap();
        assert!(p.certified());
        let w = extract_witness(&p, &op, &x, &y, &cfg).unwrap();
        assert!(verify_documented(&w).unwrap().pass);
    }

    #[test]
    fn half_shift_is_not_certifiable() {
        let op = OperatorSpec::backward_shift(WeightSeq::constant(0.5), ShiftSpace::L2).unwrap();
        let x = SeqVector::basis(SpaceTag::UnilateralL2, 1).unwrap();
        let cfg = RunConfig::default();
        let p = j_profile(&op, &x, &x, 10, &[0.5, 0.25], &cfg).unwrap();
        for e in p.entries.iter().filter(|e| e.k >= 2) {
            assert!(e.distance >= 0.5);
        }
        assert_eq!(extract_witness(&p, &op, &x, &x, &cfg).unwrap_err().kind(), "NotCertifiable");
    }

    #[test]
    fn identity_profile_is_distance_minus_delta() {
        let op = OperatorSpec::scalar_identity(Scalar::new(1.0, 0.0), SpaceTag::UnilateralL2).unwrap();
        let x = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[1.0, 0.0]).unwrap();
        let y = SeqVector::from_reals(SpaceTag::UnilateralL2, 1, &[0.0, 2.0]).unwrap();
        let p = j_profile(&op, &x, &y, 3, &[1.0, 0.5], &RunConfig::default()).unwrap();
        let gap = 5f64.sqrt();
        for e in &p.entries {
            assert!((e.distance - (gap - e.delta)).abs() < 1e-12);
        }
        let w = extract_witness(
            &j_profile(&op, &x, &x, 3, &[1.0, 0.5], &RunConfig::default()).unwrap(),
            &op,
            &x,
            &x,
            &RunConfig::default(),
        )
        .unwrap();
        assert_eq!(w.ks(), vec![1, 2]);
    }
}
