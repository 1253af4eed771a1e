use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive integer index range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexWindow {
    pub lo: i64,
    pub hi: i64,
}

impl IndexWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidVector(format!("empty window [{lo}, {hi}]")));
        }
        Ok(IndexWindow { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: i64) -> bool {
        self.lo <= j && j <= self.hi
    }

    pub fn hull(&self, other: &IndexWindow) -> IndexWindow {
        IndexWindow { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for IndexWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    L2,
    Sup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceTag {
    #[serde(alias = "l2")]
    UnilateralL2,
    #[serde(alias = "l2_bilateral")]
    BilateralL2,
    #[serde(alias = "linf")]
    UnilateralLinf,
    FiniteDim(usize),
    DirectSum(Vec<SpaceTag>),
}

impl SpaceTag {
    /// Norm of the space. On `FiniteDim(1)` the l2 and sup norms coincide, so
    /// one-dimensional summands are compatible with either kind of sum.
    pub fn norm(&self) -> Result<NormKind> {
        match self {
            SpaceTag::UnilateralL2 | SpaceTag::BilateralL2 | SpaceTag::FiniteDim(_) => Ok(NormKind::L2),
            SpaceTag::UnilateralLinf => Ok(NormKind::Sup),
            SpaceTag::DirectSum(parts) => {
                let mut kind: Option<NormKind> = None;
                for p in parts {
                    if p.is_neutral() {
                        continue;
                    }
                    let k = p.norm()?;
                    match kind {
                        None => kind = Some(k),
                        Some(prev) if prev != k => return Err(Error::MixedNormSum),
                        _ => {}
                    }
                }
                Ok(kind.unwrap_or(NormKind::L2))
            }
        }
    }

    fn is_neutral(&self) -> bool {
        matches!(self, SpaceTag::FiniteDim(1))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceTag::FiniteDim(0) => Err(Error::InvalidSpec("finite dimension must be positive".into())),
            SpaceTag::DirectSum(parts) => {
                if parts.len() < 2 {
                    return Err(Error::InvalidSpec("direct sum needs at least two summands".into()));
                }
                for p in parts {
                    p.validate()?;
                }
                self.norm().map(|_| ())
            }
            _ => Ok(()),
        }
    }

    pub fn is_hilbert(&self) -> bool {
        match self {
            SpaceTag::UnilateralLinf => false,
            SpaceTag::DirectSum(parts) => parts.iter().all(|p| p.is_neutral() || p.is_hilbert()),
            _ => true,
        }
    }

    pub fn is_finite_dim(&self) -> bool {
        match self {
            SpaceTag::FiniteDim(_) => true,
            SpaceTag::DirectSum(parts) => parts.iter().all(SpaceTag::is_finite_dim),
            _ => false,
        }
    }

    /// Smallest admissible index, `None` for bilateral spaces.
    pub fn min_index(&self) -> Option<i64> {
        match self {
            SpaceTag::BilateralL2 => None,
            _ => Some(1),
        }
    }

    /// Natural starting window of `len` coordinates (the whole space when finite).
    pub fn default_support(&self, len: usize) -> Support {
        match self {
            SpaceTag::FiniteDim(d) => Support::Window(IndexWindow { lo: 1, hi: *d as i64 }),
            SpaceTag::DirectSum(parts) => Support::Sum(parts.iter().map(|p| p.default_support(len)).collect()),
            _ => Support::Window(IndexWindow { lo: 1, hi: len.max(1) as i64 }),
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::UnilateralL2 => write!(f, "l2(N)"),
            SpaceTag::BilateralL2 => write!(f, "l2(Z)"),
            SpaceTag::UnilateralLinf => write!(f, "linf(N)"),
            SpaceTag::FiniteDim(d) => write!(f, "C^{d}"),
            SpaceTag::DirectSum(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", names.join(" + "))
            }
        }
    }
}

/// Window layout of a (possibly block-structured) vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Support {
    Window(IndexWindow),
    Sum(Vec<Support>),
}

impl Support {
    pub fn total_len(&self) -> usize {
        match self {
            Support::Window(w) => w.len(),
            Support::Sum(parts) => parts.iter().map(Support::total_len).sum(),
        }
    }

    pub fn hull(&self, other: &Support) -> Result<Support> {
        match (self, other) {
            (Support::Window(a), Support::Window(b)) => Ok(Support::Window(a.hull(b))),
            (Support::Sum(a), Support::Sum(b)) if a.len() == b.len() => {
                Ok(Support::Sum(a.iter().zip(b).map(|(x, y)| x.hull(y)).collect::<Result<_>>()?))
            }
            _ => Err(Error::SpaceMismatch { expected: format!("{self:?}"), found: format!("{other:?}") }),
        }
    }

    pub fn check_max(&self, max_dim: usize) -> Result<()> {
        let n = self.total_len();
        if n > max_dim {
            return Err(Error::WindowOverflow { requested: n, max: max_dim });
        }
        Ok(())
    }

    pub fn as_window(&self) -> Option<IndexWindow> {
        match self {
            Support::Window(w) => Some(*w),
            Support::Sum(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_sums_are_rejected() {
        let s = SpaceTag::DirectSum(vec![SpaceTag::UnilateralL2, SpaceTag::UnilateralLinf]);
        assert_eq!(s.validate(), Err(Error::MixedNormSum));
        let ok = SpaceTag::DirectSum(vec![SpaceTag::FiniteDim(1), SpaceTag::UnilateralLinf]);
        assert_eq!(ok.norm().unwrap(), NormKind::Sup);
        let bad = SpaceTag::DirectSum(vec![SpaceTag::FiniteDim(2), SpaceTag::UnilateralLinf]);
        assert_eq!(bad.validate(), Err(Error::MixedNormSum));
    }

    #[test]
    fn single_summand_is_rejected() {
        let s = SpaceTag::DirectSum(vec![SpaceTag::UnilateralL2]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn space_tags_parse_with_aliases() {
        let s: SpaceTag = serde_json::from_str("\"l2\"").unwrap();
        assert_eq!(s, SpaceTag::UnilateralL2);
        let s: SpaceTag = serde_json::from_str("{\"finite_dim\": 3}").unwrap();
        assert_eq!(s, SpaceTag::FiniteDim(3));
    }
}
