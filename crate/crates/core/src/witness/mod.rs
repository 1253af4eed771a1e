//! Finite witnesses `(k_n, x_n)` for membership `y ∈ J(x)` and their exact
//! constructions and transformations.
//!
//! A witness is a finite prefix: `k_n` strictly increasing, `x_n` close to the
//! base and `T^{k_n} x_n` close to the target. Every constructor attaches the
//! tolerance schedules it guarantees, computed by worst-case triangle
//! inequalities.

mod build;
mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{decode_failure, Error, Result};
use crate::operator::{inverse, iterate, OperatorSpec, SeqVector};

pub use build::{
    expanding_inverse_witness, expanding_sum_witness, first_coord_sum_witness, linf_scaled_shift, linf_shift_witness,
    shift_criterion_witness, shift_preimage_witness,
};
pub use transform::{
    demote_witness, promote_witness, reverse_witness, scale_witness, translate_witness, zero_base_witness,
    zero_power_witness, RegularOrbit,
};

/// Forward witnesses iterate `T`; backward ones iterate `T^{-1}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub k: u64,
    pub x: SeqVector,
}

/// Per-pair bounds for `||x_n - x||` and `||T^{k_n} x_n - y||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedules {
    pub base_tol: Vec<f64>,
    pub target_tol: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWitness", into = "RawWitness")]
pub struct Witness {
    op: OperatorSpec,
    base: SeqVector,
    target: SeqVector,
    pairs: Vec<WitnessPair>,
    direction: Direction,
    schedules: Option<Schedules>,
}

#[derive(Serialize, Deserialize)]
struct RawWitness {
    op: OperatorSpec,
    base: SeqVector,
    target: SeqVector,
    pairs: Vec<WitnessPair>,
    #[serde(default)]
    direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedules: Option<Schedules>,
}

impl TryFrom<RawWitness> for Witness {
    type Error = Error;
    fn try_from(r: RawWitness) -> Result<Self> {
        let w = Witness::new(r.op, r.base, r.target, r.pairs, r.direction).map_err(decode_failure)?;
        match r.schedules {
            Some(s) => w.with_schedules(s.base_tol, s.target_tol).map_err(decode_failure),
            None => Ok(w),
        }
    }
}

impl From<Witness> for RawWitness {
    fn from(w: Witness) -> Self {
        RawWitness {
            op: w.op,
            base: w.base,
            target: w.target,
            pairs: w.pairs,
            direction: w.direction,
            schedules: w.schedules,
        }
    }
}

impl Witness {
    /// Vectors are re-tagged with the operator's space, so files may omit it.
    pub fn new(
        op: OperatorSpec,
        base: SeqVector,
        target: SeqVector,
        pairs: Vec<WitnessPair>,
        direction: Direction,
    ) -> Result<Witness> {
        let space = op.space();
        let base = base.conform(&space)?;
        let target = target.conform(&space)?;
        if pairs.is_empty() {
            return Err(Error::InvalidWitness("a witness needs at least one pair".into()));
        }
        let pairs = pairs
            .into_iter()
            .map(|p| Ok(WitnessPair { k: p.k, x: p.x.conform(&space)? }))
            .collect::<Result<Vec<_>>>()?;
        if pairs[0].k == 0 {
            return Err(Error::InvalidWitness("powers must be positive".into()));
        }
        if pairs.windows(2).any(|w| w[1].k <= w[0].k) {
            return Err(Error::InvalidWitness("powers must be strictly increasing".into()));
        }
        Ok(Witness { op, base, target, pairs, direction, schedules: None })
    }

    pub fn with_schedules(mut self, base_tol: Vec<f64>, target_tol: Vec<f64>) -> Result<Witness> {
        check_lengths(self.pairs.len(), &base_tol, &target_tol)?;
        self.schedules = Some(Schedules { base_tol, target_tol });
        Ok(self)
    }

    pub fn op(&self) -> &OperatorSpec {
        &self.op
    }

    pub fn base(&self) -> &SeqVector {
        &self.base
    }

    pub fn target(&self) -> &SeqVector {
        &self.target
    }

    pub fn pairs(&self) -> &[WitnessPair] {
        &self.pairs
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn schedules(&self) -> Option<&Schedules> {
        self.schedules.as_ref()
    }

    pub fn ks(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.k).collect()
    }

    /// The operator whose powers the witness uses.
    pub fn acting_operator(&self) -> Result<OperatorSpec> {
        match self.direction {
            Direction::Forward => Ok(self.op.clone()),
            Direction::Backward => inverse(&self.op),
        }
    }

    /// `(||x_n - x||, ||T^{k_n} x_n - y||)` per pair.
    pub fn errors(&self) -> Result<Vec<(f64, f64)>> {
        let act = self.acting_operator()?;
        self.pairs
            .iter()
            .map(|p| Ok((p.x.distance(&self.base)?, iterate(&act, &p.x, p.k)?.distance(&self.target)?)))
            .collect()
    }

    /// Attached schedules, or the measured errors when none are attached.
    pub(crate) fn schedules_or_measured(&self) -> Result<Schedules> {
        if let Some(s) = &self.schedules {
            return Ok(s.clone());
        }
        let errs = self.errors()?;
        Ok(Schedules { base_tol: errs.iter().map(|e| e.0).collect(), target_tol: errs.iter().map(|e| e.1).collect() })
    }
}

fn check_lengths(n: usize, base_tol: &[f64], target_tol: &[f64]) -> Result<()> {
    if base_tol.len() != n || target_tol.len() != n {
        return Err(Error::InvalidWitness(format!(
            "schedules have lengths {} and {}, expected {n}",
            base_tol.len(),
            target_tol.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub k: u64,
    pub base_error: f64,
    pub target_error: f64,
    pub base_tol: f64,
    pub target_tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub direction: Direction,
    pub rows: Vec<VerificationRow>,
    pub pass: bool,
    /// Whether `||x_n - x||` is nonincreasing; informational only.
    pub base_errors_nonincreasing: bool,
}

impl VerificationReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(e.to_string());
        w.write_record(["k", "base_error", "target_error", "base_tol", "target_tol", "pass"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                format!("{:e}", r.base_error),
                format!("{:e}", r.target_error),
                format!("{:e}", r.base_tol),
                format!("{:e}", r.target_tol),
                r.pass.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Recomputes both error columns by exact iteration and compares them with
/// the supplied schedules.
pub fn verify_witness(w: &Witness, base_tol: &[f64], target_tol: &[f64]) -> Result<VerificationReport> {
    check_lengths(w.pairs.len(), base_tol, target_tol)?;
    let errs = w.errors()?;
    let rows: Vec<VerificationRow> = w
        .pairs
        .iter()
        .zip(errs)
        .zip(base_tol.iter().zip(target_tol))
        .map(|((p, (be, te)), (bt, tt))| VerificationRow {
            k: p.k,
            base_error: be,
            target_error: te,
            base_tol: *bt,
            target_tol: *tt,
            pass: be <= *bt && te <= *tt,
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    let base_errors_nonincreasing = rows.windows(2).all(|r| r[1].base_error <= r[0].base_error);
    Ok(VerificationReport { direction: w.direction, rows, pass, base_errors_nonincreasing })
}

/// Verification against the witness's own schedules.
pub fn verify_documented(w: &Witness) -> Result<VerificationReport> {
    let s =
        w.schedules.as_ref().ok_or_else(|| Error::InvalidWitness("witness carries no tolerance schedules".into()))?;
    verify_witness(w, &s.base_tol, &s.target_tol)
}

/// Relative slack added to computed bounds to absorb floating-point roundoff.
pub(crate) const ROUNDOFF: f64 = 1e-12;

pub(crate) fn slack(bound: f64, scale: f64) -> f64 {
    bound * (1.0 + ROUNDOFF) + ROUNDOFF * scale.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{ShiftSpace, SpaceTag, WeightSeq};

    fn e(j: i64) -> SeqVector {
        SeqVector::basis(SpaceTag::UnilateralL2, j).unwrap()
    }

    fn two_b() -> OperatorSpec {
        OperatorSpec::backward_shift(WeightSeq::constant(2.0), ShiftSpace::L2).unwrap()
    }

    #[test]
    fn powers_must_increase() {
        let pairs = vec![WitnessPair { k: 3, x: e(1) }, WitnessPair { k: 3, x: e(1) }];
        assert!(Witness::new(two_b(), e(1), e(1), pairs, Direction::Forward).is_err());
        assert!(Witness::new(two_b(), e(1), e(1), vec![], Direction::Forward).is_err());
    }

    #[test]
    fn noisy_witness_fails_tight_tolerance() {
        let x1 = e(1).add(&e(3).scale(0.25.into())).unwrap();
        let w =
            Witness::new(two_b(), e(1), e(1), vec![WitnessPair { k: 2, x: x1.clone() }], Direction::Forward).unwrap();
        let ok = verify_witness(&w, &[0.25 + 1e-12], &[1e-12]).unwrap();
        assert!(ok.pass);
        let noisy = x1.add(&e(5).scale(1e-3.into())).unwrap();
        let w = Witness::new(two_b(), e(1), e(1), vec![WitnessPair { k: 2, x: noisy }], Direction::Forward).unwrap();
        assert!(!verify_witness(&w, &[1.0], &[1e-6]).unwrap().pass);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let w = Witness::new(
            two_b(),
            e(1),
            e(1),
            vec![WitnessPair { k: 2, x: e(3).scale(0.25.into()) }],
            Direction::Forward,
        )
        .unwrap()
        .with_schedules(vec![2.0], vec![1.0])
        .unwrap();
        let s = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }
}
