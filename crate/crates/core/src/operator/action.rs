//! Application, powers, polynomials and finite truncations of operators.

use nalgebra::{DMatrix, DVector};

use super::space::{IndexWindow, SpaceTag, Support};
use super::vector::{SeqBlock, SeqVector};
use super::{OperatorKind, OperatorSpec, PolynomialCoeffs};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_DIM: usize = 4096;

/// Finite matrix of `T^k` between two supports: for every vector `v`
/// supported in `in_support`, `(T^k v)` restricted to `out_support` equals
/// `matrix * v` (coordinates flattened block by block).
#[derive(Debug, Clone)]
pub struct Truncation {
    pub matrix: DMatrix<Scalar>,
    pub in_support: Support,
    pub out_support: Support,
}

pub fn apply(op: &OperatorSpec, v: &SeqVector) -> Result<SeqVector> {
    iterate(op, v, 1)
}

/// `T^k v`. Shift families use the closed-form weight products.
pub fn iterate(op: &OperatorSpec, v: &SeqVector, k: u64) -> Result<SeqVector> {
    v.check_space(&op.space())?;
    iterate_unchecked(op, v, k)
}

fn iterate_unchecked(op: &OperatorSpec, v: &SeqVector, k: u64) -> Result<SeqVector> {
    if k == 0 {
        return Ok(v.clone());
    }
    match op.kind() {
        OperatorKind::DirectSum { components } => {
            let parts = v.parts().ok_or_else(|| mismatch(op, v))?;
            if parts.len() != components.len() {
                return Err(mismatch(op, v));
            }
            SeqVector::sum(
                components.iter().zip(parts).map(|(c, p)| iterate_unchecked(c, p, k)).collect::<Result<_>>()?,
            )
        }
        OperatorKind::PolynomialOf { base, coeffs } => {
            let mut acc = v.clone();
            for _ in 0..k {
                acc = horner(base, coeffs, &acc, None)?;
            }
            Ok(acc)
        }
        _ => {
            let b = v.as_block().ok_or_else(|| mismatch(op, v))?;
            iterate_block(op, b, k)
        }
    }
}

fn mismatch(op: &OperatorSpec, v: &SeqVector) -> Error {
    Error::SpaceMismatch { expected: op.space().to_string(), found: v.space().to_string() }
}

fn block_from(space: &SpaceTag, lo: i64, hi: i64, f: impl Fn(i64) -> Scalar) -> Result<SeqVector> {
    if hi < lo {
        // Everything was shifted out; the zero vector keeps a one-slot window.
        let at = space.min_index().map_or(lo, |m| lo.max(m));
        return SeqVector::block(space.clone(), at, vec![Scalar::default()]);
    }
    SeqVector::block(space.clone(), lo, (lo..=hi).map(f).collect())
}

fn iterate_block(op: &OperatorSpec, b: &SeqBlock, k: u64) -> Result<SeqVector> {
    let w = b.window();
    let space = &b.space;
    let ki = k as i64;
    match op.kind() {
        OperatorKind::BackwardShiftUni { weights, .. } => {
            let lo = (w.lo - ki).max(1);
            block_from(space, lo, w.hi - ki, |j| b.get(j + ki) * weights.product(j, k))
        }
        OperatorKind::BackwardShiftBi { weights } => {
            block_from(space, w.lo - ki, w.hi - ki, |j| b.get(j + ki) * weights.product(j, k))
        }
        OperatorKind::ForwardShiftUni { weights } | OperatorKind::ForwardShiftBi { weights } => {
            block_from(space, w.lo + ki, w.hi + ki, |j| b.get(j - ki) * weights.product(j - ki, k))
        }
        OperatorKind::Diagonal { entries, .. } => {
            block_from(space, w.lo, w.hi, |j| b.get(j) * entries.entry(j).powu(k as u32))
        }
        OperatorKind::ScalarIdentity { lambda, .. } => {
            let f = lambda.powu(k as u32);
            Ok(SeqVector::Block(b.clone()).scale(f))
        }
        OperatorKind::JordanBlock { .. } | OperatorKind::FiniteMatrix { .. } => {
            let m = op.dense_matrix().expect("finite-dimensional family");
            let mut x = DVector::from_vec(b.coords.clone());
            for _ in 0..k {
                x = &m * x;
            }
            SeqVector::block(space.clone(), 1, x.iter().copied().collect())
        }
        OperatorKind::DirectSum { .. } | OperatorKind::PolynomialOf { .. } => unreachable!("handled by caller"),
    }
}

/// Horner evaluation `p(T) v`, optionally guarding the window size.
fn horner(op: &OperatorSpec, p: &PolynomialCoeffs, v: &SeqVector, max_dim: Option<usize>) -> Result<SeqVector> {
    let c = p.coeffs();
    let mut acc = v.scale(c[c.len() - 1]);
    for ci in c.iter().rev().skip(1) {
        acc = iterate_unchecked(op, &acc, 1)?.combine(Scalar::new(1.0, 0.0), v, *ci)?;
        if let Some(max) = max_dim {
            acc.support().check_max(max)?;
        }
    }
    Ok(acc)
}

/// `p(T) v = sum_i c_i T^i v`.
pub fn polynomial_apply(op: &OperatorSpec, p: &PolynomialCoeffs, v: &SeqVector, max_dim: usize) -> Result<SeqVector> {
    v.check_space(&op.space())?;
    horner(op, p, v, Some(max_dim))
}

/// Input support whose coordinates determine `T^k` on `out`, chosen so that
/// `T^k` maps it back into `out`.
fn in_support(op: &OperatorSpec, k: u64, out: &Support) -> Result<Support> {
    let ki = k as i64;
    match (op.kind(), out) {
        (OperatorKind::DirectSum { components }, Support::Sum(outs)) if outs.len() == components.len() => {
            Ok(Support::Sum(components.iter().zip(outs).map(|(c, o)| in_support(c, k, o)).collect::<Result<_>>()?))
        }
        (OperatorKind::DirectSum { .. }, _) | (_, Support::Sum(_)) => {
            Err(Error::SpaceMismatch { expected: op.space().to_string(), found: format!("{out:?}") })
        }
        (OperatorKind::PolynomialOf { base, coeffs }, _) => {
            let top = coeffs.degree() as u64 * k;
            let mut acc = in_support(base, 0, out)?;
            for i in 1..=top {
                acc = acc.hull(&in_support(base, i, out)?)?;
            }
            Ok(acc)
        }
        (kind, Support::Window(w)) => {
            let w = *w;
            let win = |lo: i64, hi: i64| Support::Window(IndexWindow { lo, hi });
            Ok(match kind {
                _ if k == 0 => Support::Window(w),
                OperatorKind::BackwardShiftUni { .. } => {
                    // Coordinates 1..=k are annihilated by T^k, so they may be kept.
                    if w.lo == 1 {
                        win(1, w.hi + ki)
                    } else {
                        win(w.lo + ki, w.hi + ki)
                    }
                }
                OperatorKind::BackwardShiftBi { .. } => win(w.lo + ki, w.hi + ki),
                OperatorKind::ForwardShiftUni { .. } => {
                    let hi = w.hi - ki;
                    if hi < 1 {
                        win(1, 1)
                    } else {
                        win((w.lo - ki).max(1), hi)
                    }
                }
                OperatorKind::ForwardShiftBi { .. } => win(w.lo - ki, w.hi - ki),
                _ => Support::Window(w),
            })
        }
    }
}

fn check_out_support(space: &SpaceTag, out: &Support) -> Result<()> {
    match (space, out) {
        (SpaceTag::DirectSum(spaces), Support::Sum(outs)) if spaces.len() == outs.len() => {
            spaces.iter().zip(outs).try_for_each(|(s, o)| check_out_support(s, o))
        }
        (SpaceTag::FiniteDim(d), Support::Window(w)) => {
            if w.lo != 1 || w.hi != *d as i64 {
                return Err(Error::InvalidVector(format!("finite-dimensional window must be [1, {d}], got {w}")));
            }
            Ok(())
        }
        (s, Support::Window(w)) if !matches!(s, SpaceTag::DirectSum(_)) => match s.min_index() {
            Some(m) if w.lo < m => Err(Error::InvalidVector(format!("window {w} outside {s}"))),
            _ => Ok(()),
        },
        _ => Err(Error::SpaceMismatch { expected: space.to_string(), found: format!("{out:?}") }),
    }
}

/// Dense representation of `T^k` from the derived input support to `out`.
pub fn truncation_matrix(op: &OperatorSpec, k: u64, out: &Support, max_dim: usize) -> Result<Truncation> {
    let space = op.space();
    check_out_support(&space, out)?;
    out.check_max(max_dim)?;
    let input = in_support(op, k, out)?;
    input.check_max(max_dim)?;
    let matrix = build_matrix(op, &space, k, &input, out)?;
    Ok(Truncation { matrix, in_support: input, out_support: out.clone() })
}

fn build_matrix(
    op: &OperatorSpec,
    space: &SpaceTag,
    k: u64,
    input: &Support,
    out: &Support,
) -> Result<DMatrix<Scalar>> {
    if let (
        OperatorKind::DirectSum { components },
        SpaceTag::DirectSum(spaces),
        Support::Sum(ins),
        Support::Sum(outs),
    ) = (op.kind(), space, input, out)
    {
        let mut m = DMatrix::zeros(out.total_len(), input.total_len());
        let (mut r, mut c) = (0, 0);
        for (((comp, s), i), o) in components.iter().zip(spaces).zip(ins).zip(outs) {
            let block = build_matrix(comp, s, k, i, o)?;
            m.view_mut((r, c), (block.nrows(), block.ncols())).copy_from(&block);
            r += block.nrows();
            c += block.ncols();
        }
        return Ok(m);
    }
    let w = input
        .as_window()
        .ok_or_else(|| Error::SpaceMismatch { expected: space.to_string(), found: format!("{input:?}") })?;
    let mut m = DMatrix::zeros(out.total_len(), w.len());
    for (col, idx) in w.indices().enumerate() {
        let e = SeqVector::basis(space.clone(), idx)?;
        let image = iterate_unchecked(op, &e, k)?.flatten(out)?;
        m.set_column(col, &image);
    }
    Ok(m)
}
