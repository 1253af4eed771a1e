//! Finitely supported coordinate vectors.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::space::{IndexWindow, NormKind, SpaceTag, Support};
use crate::error::{Error, Result};
use crate::scalar::{is_finite, Scalar};

/// One coordinate block: `coords[i]` is the coordinate at index `lo + i`;
/// everything outside the window is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqBlock {
    #[serde(default = "default_space")]
    pub space: SpaceTag,
    pub lo: i64,
    pub coords: Vec<Scalar>,
}

fn default_space() -> SpaceTag {
    SpaceTag::UnilateralL2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeqVector {
    Sum { sum: Vec<SeqVector> },
    Block(SeqBlock),
}

impl SeqBlock {
    pub fn window(&self) -> IndexWindow {
        IndexWindow { lo: self.lo, hi: self.lo + self.coords.len() as i64 - 1 }
    }

    pub fn get(&self, j: i64) -> Scalar {
        let off = j - self.lo;
        if off < 0 {
            return Scalar::default();
        }
        self.coords.get(off as usize).copied().unwrap_or_default()
    }

    fn normalized(mut self) -> Result<SeqBlock> {
        if let SpaceTag::DirectSum(_) = self.space {
            return Err(Error::InvalidVector("a single block cannot live in a direct sum".into()));
        }
        if let Some(z) = self.coords.iter().find(|z| !is_finite(**z)) {
            return Err(Error::InvalidVector(format!("non-finite coordinate {z}")));
        }
        if self.coords.is_empty() {
            self.coords.push(Scalar::default());
        }
        if let Some(min) = self.space.min_index() {
            if self.lo < min {
                return Err(Error::InvalidVector(format!("index {} below {} in {}", self.lo, min, self.space)));
            }
        }
        if let SpaceTag::FiniteDim(d) = self.space {
            let hi = self.window().hi;
            if hi > d as i64 {
                // Trailing zeros beyond the dimension are harmless.
                let keep = (d as i64 - self.lo + 1).max(0) as usize;
                if self.coords[keep..].iter().any(|z| *z != Scalar::default()) {
                    return Err(Error::InvalidVector(format!("window {} exceeds dimension {d}", self.window())));
                }
                self.coords.truncate(keep);
            }
            let mut full = vec![Scalar::default(); d];
            for (i, z) in self.coords.iter().enumerate() {
                full[(self.lo - 1) as usize + i] = *z;
            }
            self.lo = 1;
            self.coords = full;
        }
        Ok(self)
    }
}

impl SeqVector {
    pub fn block(space: SpaceTag, lo: i64, coords: Vec<Scalar>) -> Result<SeqVector> {
        Ok(SeqVector::Block(SeqBlock { space, lo, coords }.normalized()?))
    }

    pub fn from_reals(space: SpaceTag, lo: i64, values: &[f64]) -> Result<SeqVector> {
        SeqVector::block(space, lo, values.iter().map(|v| Scalar::new(*v, 0.0)).collect())
    }

    pub fn sum(parts: Vec<SeqVector>) -> Result<SeqVector> {
        if parts.len() < 2 {
            return Err(Error::InvalidVector("direct sum vector needs two parts".into()));
        }
        let v = SeqVector::Sum { sum: parts };
        v.space().validate()?;
        Ok(v)
    }

    /// The zero vector laid out on `support`.
    pub fn zeros(space: &SpaceTag, support: &Support) -> Result<SeqVector> {
        match (space, support) {
            (SpaceTag::DirectSum(spaces), Support::Sum(supports)) if spaces.len() == supports.len() => {
                SeqVector::sum(spaces.iter().zip(supports).map(|(s, w)| SeqVector::zeros(s, w)).collect::<Result<_>>()?)
            }
            (SpaceTag::DirectSum(_), _) | (_, Support::Sum(_)) => {
                Err(Error::SpaceMismatch { expected: space.to_string(), found: format!("{support:?}") })
            }
            (s, Support::Window(w)) => SeqVector::block(s.clone(), w.lo, vec![Scalar::default(); w.len()]),
        }
    }

    /// Standard basis vector `e_j` of a non-sum space.
    pub fn basis(space: SpaceTag, j: i64) -> Result<SeqVector> {
        SeqVector::block(space, j, vec![Scalar::new(1.0, 0.0)])
    }

    pub fn space(&self) -> SpaceTag {
        match self {
            SeqVector::Block(b) => b.space.clone(),
            SeqVector::Sum { sum } => SpaceTag::DirectSum(sum.iter().map(SeqVector::space).collect()),
        }
    }

    pub fn support(&self) -> Support {
        match self {
            SeqVector::Block(b) => Support::Window(b.window()),
            SeqVector::Sum { sum } => Support::Sum(sum.iter().map(SeqVector::support).collect()),
        }
    }

    pub fn as_block(&self) -> Option<&SeqBlock> {
        match self {
            SeqVector::Block(b) => Some(b),
            SeqVector::Sum { .. } => None,
        }
    }

    pub fn parts(&self) -> Option<&[SeqVector]> {
        match self {
            SeqVector::Sum { sum } => Some(sum),
            SeqVector::Block(_) => None,
        }
    }

    /// Coordinate `j` of a single-block vector (zero outside the window).
    pub fn coord(&self, j: i64) -> Scalar {
        self.as_block().map(|b| b.get(j)).unwrap_or_default()
    }

    /// Re-tags the vector with `space` (file formats may omit it) and re-validates.
    pub fn conform(self, space: &SpaceTag) -> Result<SeqVector> {
        match (self, space) {
            (SeqVector::Sum { sum }, SpaceTag::DirectSum(spaces)) => {
                if sum.len() != spaces.len() {
                    return Err(Error::SpaceMismatch {
                        expected: space.to_string(),
                        found: format!("{} summands", sum.len()),
                    });
                }
                SeqVector::sum(sum.into_iter().zip(spaces).map(|(v, s)| v.conform(s)).collect::<Result<_>>()?)
            }
            (SeqVector::Block(b), s) if !matches!(s, SpaceTag::DirectSum(_)) => {
                SeqVector::block(s.clone(), b.lo, b.coords)
            }
            (v, s) => Err(Error::SpaceMismatch { expected: s.to_string(), found: v.space().to_string() }),
        }
    }

    pub fn check_space(&self, space: &SpaceTag) -> Result<()> {
        let own = self.space();
        if &own != space {
            return Err(Error::SpaceMismatch { expected: space.to_string(), found: own.to_string() });
        }
        Ok(())
    }

    /// Norm of the ambient space: l2 (root-sum-square across blocks) or sup.
    pub fn norm(&self) -> f64 {
        let kind = self.space().norm().unwrap_or(NormKind::L2);
        self.norm_as(kind)
    }

    pub fn norm_as(&self, kind: NormKind) -> f64 {
        match self {
            SeqVector::Block(b) => match kind {
                NormKind::L2 => b.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
                NormKind::Sup => b.coords.iter().map(|z| z.norm()).fold(0.0, f64::max),
            },
            SeqVector::Sum { sum } => match kind {
                NormKind::L2 => sum.iter().map(|v| v.norm_as(kind).powi(2)).sum::<f64>().sqrt(),
                NormKind::Sup => sum.iter().map(|v| v.norm_as(kind)).fold(0.0, f64::max),
            },
        }
    }

    /// Hilbert-space inner product `<self, other> = sum self_j * conj(other_j)`.
    pub fn inner(&self, other: &SeqVector) -> Result<Scalar> {
        match (self, other) {
            (SeqVector::Block(a), SeqVector::Block(b)) => {
                let w = a.window();
                Ok(w.indices().map(|j| a.get(j) * b.get(j).conj()).sum())
            }
            (SeqVector::Sum { sum: a }, SeqVector::Sum { sum: b }) if a.len() == b.len() => {
                let mut acc = Scalar::default();
                for (x, y) in a.iter().zip(b) {
                    acc += x.inner(y)?;
                }
                Ok(acc)
            }
            _ => Err(self.mismatch(other)),
        }
    }

    fn mismatch(&self, other: &SeqVector) -> Error {
        Error::SpaceMismatch { expected: self.space().to_string(), found: other.space().to_string() }
    }

    /// `a * self + b * other` on the hull of both windows.
    pub fn combine(&self, a: Scalar, other: &SeqVector, b: Scalar) -> Result<SeqVector> {
        match (self, other) {
            (SeqVector::Block(x), SeqVector::Block(y)) => {
                if x.space != y.space {
                    return Err(self.mismatch(other));
                }
                let w = x.window().hull(&y.window());
                let coords = w.indices().map(|j| a * x.get(j) + b * y.get(j)).collect();
                SeqVector::block(x.space.clone(), w.lo, coords)
            }
            (SeqVector::Sum { sum: xs }, SeqVector::Sum { sum: ys }) if xs.len() == ys.len() => {
                SeqVector::sum(xs.iter().zip(ys).map(|(x, y)| x.combine(a, y, b)).collect::<Result<_>>()?)
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn add(&self, other: &SeqVector) -> Result<SeqVector> {
        self.combine(Scalar::new(1.0, 0.0), other, Scalar::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &SeqVector) -> Result<SeqVector> {
        self.combine(Scalar::new(1.0, 0.0), other, Scalar::new(-1.0, 0.0))
    }

    pub fn scale(&self, mu: Scalar) -> SeqVector {
        match self {
            SeqVector::Block(b) => SeqVector::Block(SeqBlock {
                space: b.space.clone(),
                lo: b.lo,
                coords: b.coords.iter().map(|z| z * mu).collect(),
            }),
            SeqVector::Sum { sum } => SeqVector::Sum { sum: sum.iter().map(|v| v.scale(mu)).collect() },
        }
    }

    /// Distance `||self - other||` in the ambient norm.
    pub fn distance(&self, other: &SeqVector) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Coordinates laid out on `support` (dropping anything outside it).
    pub fn restrict(&self, support: &Support) -> Result<SeqVector> {
        match (self, support) {
            (SeqVector::Block(b), Support::Window(w)) => {
                let coords = w.indices().map(|j| b.get(j)).collect();
                SeqVector::block(b.space.clone(), w.lo, coords)
            }
            (SeqVector::Sum { sum }, Support::Sum(ws)) if sum.len() == ws.len() => {
                SeqVector::sum(sum.iter().zip(ws).map(|(v, w)| v.restrict(w)).collect::<Result<_>>()?)
            }
            _ => Err(Error::SpaceMismatch { expected: format!("{support:?}"), found: format!("{:?}", self.support()) }),
        }
    }

    /// Concatenated coordinates on `support`.
    pub fn flatten(&self, support: &Support) -> Result<DVector<Scalar>> {
        let mut out = Vec::with_capacity(support.total_len());
        self.flatten_into(support, &mut out)?;
        Ok(DVector::from_vec(out))
    }

    fn flatten_into(&self, support: &Support, out: &mut Vec<Scalar>) -> Result<()> {
        match (self, support) {
            (SeqVector::Block(b), Support::Window(w)) => {
                out.extend(w.indices().map(|j| b.get(j)));
                Ok(())
            }
            (SeqVector::Sum { sum }, Support::Sum(ws)) if sum.len() == ws.len() => {
                for (v, w) in sum.iter().zip(ws) {
                    v.flatten_into(w, out)?;
                }
                Ok(())
            }
            _ => Err(Error::SpaceMismatch { expected: format!("{support:?}"), found: format!("{:?}", self.support()) }),
        }
    }

    /// Inverse of [`SeqVector::flatten`].
    pub fn unflatten(space: &SpaceTag, support: &Support, data: &[Scalar]) -> Result<SeqVector> {
        if data.len() != support.total_len() {
            return Err(Error::InvalidVector(format!(
                "expected {} coordinates, got {}",
                support.total_len(),
                data.len()
            )));
        }
        let mut offset = 0;
        SeqVector::unflatten_at(space, support, data, &mut offset)
    }

    fn unflatten_at(space: &SpaceTag, support: &Support, data: &[Scalar], offset: &mut usize) -> Result<SeqVector> {
        match (space, support) {
            (SpaceTag::DirectSum(spaces), Support::Sum(ws)) if spaces.len() == ws.len() => {
                let parts = spaces
                    .iter()
                    .zip(ws)
                    .map(|(s, w)| SeqVector::unflatten_at(s, w, data, offset))
                    .collect::<Result<_>>()?;
                SeqVector::sum(parts)
            }
            (s, Support::Window(w)) if !matches!(s, SpaceTag::DirectSum(_)) => {
                let coords = data[*offset..*offset + w.len()].to_vec();
                *offset += w.len();
                SeqVector::block(s.clone(), w.lo, coords)
            }
            _ => Err(Error::SpaceMismatch { expected: space.to_string(), found: format!("{support:?}") }),
        }
    }
}
