//! Weight generators for shifts and entry generators for diagonal operators.
//!
//! Indices follow the coordinate convention of the spaces: unilateral
//! sequences start at 1, bilateral ones run over all integers. Finite lists
//! occupy indices `1..=len` and the tail value fills every other index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSeq {
    Constant {
        value: f64,
    },
    FiniteThenTail {
        values: Vec<f64>,
        tail: f64,
    },
    /// `alpha_j = c * ratio^(j - 1)`.
    Geometric {
        c: f64,
        ratio: f64,
    },
    /// `positive` for indices >= 1, `nonpositive` for indices <= 0.
    TwoSidedSplit {
        positive: f64,
        nonpositive: f64,
    },
}

impl WeightSeq {
    pub fn constant(value: f64) -> Self {
        WeightSeq::Constant { value }
    }

    pub fn weight(&self, j: i64) -> f64 {
        match self {
            WeightSeq::Constant { value } => *value,
            WeightSeq::FiniteThenTail { values, tail } => {
                if j >= 1 && (j as usize) <= values.len() {
                    values[(j - 1) as usize]
                } else {
                    *tail
                }
            }
            WeightSeq::Geometric { c, ratio } => c * ratio.powf((j - 1) as f64),
            WeightSeq::TwoSidedSplit { positive, nonpositive } => {
                if j >= 1 {
                    *positive
                } else {
                    *nonpositive
                }
            }
        }
    }

    fn generators(&self) -> Vec<f64> {
        match self {
            WeightSeq::Constant { value } => vec![*value],
            WeightSeq::FiniteThenTail { values, tail } => {
                values.iter().copied().chain(std::iter::once(*tail)).collect()
            }
            WeightSeq::Geometric { c, ratio } => vec![*c, *ratio],
            WeightSeq::TwoSidedSplit { positive, nonpositive } => vec![*positive, *nonpositive],
        }
    }

    pub fn validate(&self, bilateral: bool) -> Result<()> {
        for (i, v) in self.generators().into_iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::UnboundedWeights(format!("non-finite generator value {v}")));
            }
            if v <= 0.0 {
                return Err(Error::NonPositiveWeight { index: i as i64 + 1, value: v });
            }
        }
        if let WeightSeq::Geometric { ratio, .. } = self {
            if bilateral && *ratio != 1.0 {
                return Err(Error::UnboundedWeights("geometric weights over Z are bounded only with ratio 1".into()));
            }
            if *ratio > 1.0 {
                return Err(Error::UnboundedWeights(format!("geometric ratio {ratio} > 1")));
            }
        }
        Ok(())
    }

    pub fn sup(&self, bilateral: bool) -> f64 {
        match self {
            WeightSeq::Constant { value } => *value,
            WeightSeq::FiniteThenTail { values, tail } => values.iter().copied().fold(*tail, f64::max),
            WeightSeq::Geometric { c, .. } => *c,
            WeightSeq::TwoSidedSplit { positive, nonpositive } => {
                if bilateral {
                    positive.max(*nonpositive)
                } else {
                    *positive
                }
            }
        }
    }

    pub fn inf(&self, bilateral: bool) -> f64 {
        match self {
            WeightSeq::Constant { value } => *value,
            WeightSeq::FiniteThenTail { values, tail } => values.iter().copied().fold(*tail, f64::min),
            WeightSeq::Geometric { c, ratio } => {
                if *ratio < 1.0 {
                    0.0
                } else {
                    *c
                }
            }
            WeightSeq::TwoSidedSplit { positive, nonpositive } => {
                if bilateral {
                    positive.min(*nonpositive)
                } else {
                    *positive
                }
            }
        }
    }

    /// Pointwise reciprocal weights.
    pub fn reciprocal(&self) -> WeightSeq {
        match self {
            WeightSeq::Constant { value } => WeightSeq::Constant { value: 1.0 / value },
            WeightSeq::FiniteThenTail { values, tail } => {
                WeightSeq::FiniteThenTail { values: values.iter().map(|v| 1.0 / v).collect(), tail: 1.0 / tail }
            }
            WeightSeq::Geometric { c, ratio } => WeightSeq::Geometric { c: 1.0 / c, ratio: 1.0 / ratio },
            WeightSeq::TwoSidedSplit { positive, nonpositive } => {
                WeightSeq::TwoSidedSplit { positive: 1.0 / positive, nonpositive: 1.0 / nonpositive }
            }
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            WeightSeq::Constant { value } => Some(*value),
            WeightSeq::FiniteThenTail { values, tail } if values.iter().all(|v| v == tail) => Some(*tail),
            WeightSeq::Geometric { c, ratio } if *ratio == 1.0 => Some(*c),
            WeightSeq::TwoSidedSplit { positive, nonpositive } if positive == nonpositive => Some(*positive),
            _ => None,
        }
    }

    /// `prod_{i=j}^{j+k-1} alpha_i`, multiplied left to right.
    pub fn product(&self, j: i64, k: u64) -> f64 {
        (0..k as i64).fold(1.0, |acc, t| acc * self.weight(j + t))
    }

    /// `sum_{i=j}^{j+k-1} ln alpha_i`.
    pub fn log_product(&self, j: i64, k: u64) -> f64 {
        (0..k as i64).map(|t| self.weight(j + t).ln()).sum()
    }

    /// Spectral radius `lim_n sup_j (prod_{i=j}^{j+n-1} alpha_i)^(1/n)` of the
    /// weighted shift. Exact for every generator family: finitely many
    /// exceptional weights never affect the limit.
    pub fn shift_spectral_radius(&self, bilateral: bool) -> f64 {
        match self {
            WeightSeq::Constant { value } => *value,
            WeightSeq::FiniteThenTail { tail, .. } => *tail,
            WeightSeq::Geometric { c, ratio } => {
                if *ratio < 1.0 {
                    0.0
                } else {
                    *c
                }
            }
            WeightSeq::TwoSidedSplit { positive, nonpositive } => {
                if bilateral {
                    positive.max(*nonpositive)
                } else {
                    *positive
                }
            }
        }
    }
}

/// Generates diagonal entries `d_1, d_2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntrySeq {
    Constant {
        #[serde(with = "crate::scalar::serde_scalar")]
        value: Scalar,
    },
    ListThenTail {
        values: Vec<Scalar>,
        #[serde(with = "crate::scalar::serde_scalar")]
        tail: Scalar,
    },
}

impl EntrySeq {
    pub fn list(values: Vec<Scalar>, tail: Scalar) -> Self {
        EntrySeq::ListThenTail { values, tail }
    }

    pub fn entry(&self, j: i64) -> Scalar {
        match self {
            EntrySeq::Constant { value } => *value,
            EntrySeq::ListThenTail { values, tail } => {
                if j >= 1 && (j as usize) <= values.len() {
                    values[(j - 1) as usize]
                } else {
                    *tail
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all: Vec<Scalar> = match self {
            EntrySeq::Constant { value } => vec![*value],
            EntrySeq::ListThenTail { values, tail } => values.iter().copied().chain([*tail]).collect(),
        };
        if all.iter().any(|z| !is_finite(*z)) {
            return Err(Error::UnboundedWeights("non-finite diagonal entry".into()));
        }
        Ok(())
    }

    /// Closure of the set of entries actually used on a space of dimension
    /// `dim` (`None` for infinite dimension). Finite, so the closure is the set.
    pub fn entry_set(&self, dim: Option<usize>) -> Vec<Scalar> {
        match self {
            EntrySeq::Constant { value } => vec![*value],
            EntrySeq::ListThenTail { values, tail } => match dim {
                Some(d) => (1..=d as i64).map(|j| self.entry(j)).collect(),
                None => values.iter().copied().chain([*tail]).collect(),
            },
        }
    }

    pub fn conj(&self) -> EntrySeq {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> EntrySeq {
        match self {
            EntrySeq::Constant { value } => EntrySeq::Constant { value: f(*value) },
            EntrySeq::ListThenTail { values, tail } => {
                EntrySeq::ListThenTail { values: values.iter().map(|z| f(*z)).collect(), tail: f(*tail) }
            }
        }
    }
}
