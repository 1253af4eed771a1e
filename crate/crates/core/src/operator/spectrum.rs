//! Family-analytic spectra and spectral radii.
//!
//! Exact pieces come from closed forms (diagonal entries, Jordan eigenvalues,
//! the disk spectrum of unilateral weighted shifts, the circle spectrum of
//! constant bilateral shifts) or from a converged complex Schur form. Anything
//! else is `Unknown` and never feeds a disqualifier.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{OperatorKind, OperatorSpec, SpaceTag};
use crate::scalar::Scalar;

/// Tolerance for deciding `|lambda| = 1`.
pub const CIRCLE_TOL: f64 = 1e-9;
const SCHUR_EPS: f64 = 1e-14;
const SCHUR_MAX_ITER: usize = 10_000;
const BOUNDARY_SAMPLES: usize = 4096;
const GELFAND_HORIZON: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SpectrumPiece {
    Points {
        #[serde(with = "points_serde")]
        points: Vec<Scalar>,
    },
    /// Closed disk `|z| <= radius` centred at the origin.
    Disk {
        radius: f64,
    },
    /// Circle `|z| = radius`.
    Circle {
        radius: f64,
    },
    Unknown,
}

mod points_serde {
    use crate::scalar::{JsonScalar, Scalar};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| JsonScalar(*z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        Ok(Vec::<JsonScalar>::deserialize(d)?.into_iter().map(|z| z.0).collect())
    }
}

impl SpectrumPiece {
    fn is_exact(&self) -> bool {
        !matches!(self, SpectrumPiece::Unknown)
    }

    fn min_modulus(&self) -> Option<f64> {
        match self {
            SpectrumPiece::Points { points } => points.iter().map(|z| z.norm()).reduce(f64::min),
            SpectrumPiece::Disk { .. } => Some(0.0),
            SpectrumPiece::Circle { radius } => Some(*radius),
            SpectrumPiece::Unknown => None,
        }
    }

    fn max_modulus(&self) -> Option<f64> {
        match self {
            SpectrumPiece::Points { points } => points.iter().map(|z| z.norm()).reduce(f64::max),
            SpectrumPiece::Disk { radius } | SpectrumPiece::Circle { radius } => Some(*radius),
            SpectrumPiece::Unknown => None,
        }
    }

    fn meets_unit_circle(&self) -> CircleAnswer {
        let hit = match self {
            SpectrumPiece::Points { points } => points.iter().any(|z| (z.norm() - 1.0).abs() <= CIRCLE_TOL),
            SpectrumPiece::Disk { radius } => *radius >= 1.0 - CIRCLE_TOL,
            SpectrumPiece::Circle { radius } => (radius - 1.0).abs() <= CIRCLE_TOL,
            SpectrumPiece::Unknown => return CircleAnswer::Unknown,
        };
        if hit {
            CircleAnswer::Yes
        } else {
            CircleAnswer::No
        }
    }
}

/// Union of pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub pieces: Vec<SpectrumPiece>,
}

impl Spectrum {
    fn single(piece: SpectrumPiece) -> Self {
        Spectrum { pieces: vec![piece] }
    }

    pub fn is_exact(&self) -> bool {
        self.pieces.iter().all(SpectrumPiece::is_exact)
    }

    /// `min |z|` over the spectrum when every piece is exact.
    pub fn min_modulus(&self) -> Option<f64> {
        self.pieces.iter().map(SpectrumPiece::min_modulus).try_fold(f64::INFINITY, |a, m| m.map(|m| a.min(m)))
    }

    /// `max |z|` over the spectrum when every piece is exact.
    pub fn max_modulus(&self) -> Option<f64> {
        self.pieces.iter().map(SpectrumPiece::max_modulus).try_fold(0.0, |a, m| m.map(|m| f64::max(a, m)))
    }

    /// A `Yes` from any piece decides the union; a `No` needs every piece exact.
    pub fn meets_unit_circle(&self) -> CircleAnswer {
        let answers: Vec<_> = self.pieces.iter().map(SpectrumPiece::meets_unit_circle).collect();
        if answers.contains(&CircleAnswer::Yes) {
            CircleAnswer::Yes
        } else if answers.contains(&CircleAnswer::Unknown) {
            CircleAnswer::Unknown
        } else {
            CircleAnswer::No
        }
    }

    /// Exact spectrum contained in `|z| > 1`.
    pub fn outside_closed_unit_disk(&self) -> bool {
        self.min_modulus().is_some_and(|m| m > 1.0 + CIRCLE_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleAnswer {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadius {
    pub value: f64,
    pub exact: bool,
}

/// Eigenvalues from a converged complex Schur form.
pub(crate) fn eigenvalues(m: &DMatrix<Scalar>) -> Option<Vec<Scalar>> {
    let schur = nalgebra::Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER)?;
    let (_, t) = schur.unpack();
    Some(t.diagonal().iter().copied().collect())
}

pub fn spectrum(op: &OperatorSpec) -> Spectrum {
    match op.kind() {
        OperatorKind::BackwardShiftUni { weights, .. } | OperatorKind::ForwardShiftUni { weights } => {
            Spectrum::single(SpectrumPiece::Disk { radius: weights.shift_spectral_radius(false) })
        }
        OperatorKind::BackwardShiftBi { weights } | OperatorKind::ForwardShiftBi { weights } => {
            match weights.as_constant() {
                Some(a) => Spectrum::single(SpectrumPiece::Circle { radius: a }),
                None => Spectrum::single(SpectrumPiece::Unknown),
            }
        }
        OperatorKind::Diagonal { entries, space } => {
            let dim = match space {
                SpaceTag::FiniteDim(d) => Some(*d),
                _ => None,
            };
            Spectrum::single(SpectrumPiece::Points { points: entries.entry_set(dim) })
        }
        OperatorKind::ScalarIdentity { lambda, .. } | OperatorKind::JordanBlock { lambda, .. } => {
            Spectrum::single(SpectrumPiece::Points { points: vec![*lambda] })
        }
        OperatorKind::FiniteMatrix { entries } => match eigenvalues(&entries.0) {
            Some(points) => Spectrum::single(SpectrumPiece::Points { points }),
            None => Spectrum::single(SpectrumPiece::Unknown),
        },
        OperatorKind::DirectSum { components } => {
            Spectrum { pieces: components.iter().flat_map(|c| spectrum(c).pieces).collect() }
        }
        OperatorKind::PolynomialOf { base, coeffs } => {
            // Spectral mapping is exact on finite point sets only.
            let pieces = spectrum(base)
                .pieces
                .into_iter()
                .map(|p| match p {
                    SpectrumPiece::Points { points } => {
                        SpectrumPiece::Points { points: points.iter().map(|z| coeffs.eval(*z)).collect() }
                    }
                    _ => SpectrumPiece::Unknown,
                })
                .collect();
            Spectrum { pieces }
        }
    }
}

pub fn spectral_radius(op: &OperatorSpec) -> SpectralRadius {
    if let Some(value) = spectrum(op).max_modulus() {
        return SpectralRadius { value, exact: true };
    }
    match op.kind() {
        OperatorKind::BackwardShiftBi { weights } | OperatorKind::ForwardShiftBi { weights } => {
            SpectralRadius { value: weights.shift_spectral_radius(true), exact: true }
        }
        OperatorKind::DirectSum { components } => {
            components.iter().map(spectral_radius).fold(SpectralRadius { value: 0.0, exact: true }, |a, r| {
                SpectralRadius { value: a.value.max(r.value), exact: a.exact && r.exact }
            })
        }
        OperatorKind::PolynomialOf { base, coeffs } => polynomial_radius(base, coeffs),
        _ => SpectralRadius { value: gelfand_estimate(op, GELFAND_HORIZON).min(op.norm_bound()), exact: false },
    }
}

/// `max |p|` over the base spectrum by the maximum modulus principle:
/// the disk and the circle both attain it on the circle of their radius.
fn polynomial_radius(base: &OperatorSpec, coeffs: &super::PolynomialCoeffs) -> SpectralRadius {
    let sp = spectrum(base);
    let mut value: f64 = 0.0;
    let mut exact = true;
    for piece in &sp.pieces {
        match piece {
            SpectrumPiece::Points { points } => {
                value = points.iter().map(|z| coeffs.eval(*z).norm()).fold(value, f64::max);
            }
            SpectrumPiece::Disk { radius } | SpectrumPiece::Circle { radius } => {
                exact = exact && coeffs.degree() == 0;
                value = (0..BOUNDARY_SAMPLES)
                    .map(|i| {
                        let t = std::f64::consts::TAU * i as f64 / BOUNDARY_SAMPLES as f64;
                        coeffs.eval(Scalar::from_polar(*radius, t)).norm()
                    })
                    .fold(value, f64::max);
            }
            SpectrumPiece::Unknown => {
                let r = spectral_radius(base);
                let bound: f64 =
                    coeffs.coeffs().iter().enumerate().map(|(i, c)| c.norm() * r.value.powi(i as i32)).sum();
                return SpectralRadius { value: bound, exact: false };
            }
        }
    }
    SpectralRadius { value, exact }
}

/// `min_{n <= horizon} ||T^n||^{1/n}`, an upper bound that decreases to the
/// spectral radius. Shift norms come from weight products, dense operators
/// from operator 2-norms of their powers.
pub fn gelfand_estimate(op: &OperatorSpec, horizon: usize) -> f64 {
    let horizon = horizon.max(1);
    match op.kind() {
        OperatorKind::BackwardShiftUni { weights, .. } | OperatorKind::ForwardShiftUni { weights } => {
            shift_gelfand(weights, false, horizon)
        }
        OperatorKind::BackwardShiftBi { weights } | OperatorKind::ForwardShiftBi { weights } => {
            shift_gelfand(weights, true, horizon)
        }
        OperatorKind::DirectSum { components } => {
            components.iter().map(|c| gelfand_estimate(c, horizon)).fold(0.0, f64::max)
        }
        _ => match op.dense_matrix() {
            Some(m) => matrix_gelfand(&m, horizon),
            None => spectrum(op).max_modulus().unwrap_or_else(|| op.norm_bound()),
        },
    }
}

/// `||T^n|| = sup_j prod_{i=j}^{j+n-1} alpha_i`; every family is eventually
/// constant or monotone, so the sup is attained in a window around the
/// exceptional indices.
fn shift_gelfand(weights: &super::WeightSeq, bilateral: bool, horizon: usize) -> f64 {
    let span = match weights {
        super::WeightSeq::FiniteThenTail { values, .. } => values.len() as i64 + 1,
        _ => 1,
    };
    let mut best = f64::INFINITY;
    for n in 1..=horizon as u64 {
        let lo = if bilateral { 1 - n as i64 } else { 1 };
        let log_norm = (lo..=span).map(|j| weights.log_product(j, n)).fold(f64::NEG_INFINITY, f64::max);
        best = best.min((log_norm / n as f64).exp());
    }
    best
}

fn matrix_gelfand(m: &DMatrix<Scalar>, horizon: usize) -> f64 {
    let mut power = m.clone();
    let mut log_scale = 0.0;
    let mut best = f64::INFINITY;
    for n in 1..=horizon {
        let norm = power.clone().svd(false, false).singular_values.max();
        if norm == 0.0 {
            return 0.0;
        }
        let log_norm = log_scale + norm.ln();
        best = best.min((log_norm / n as f64).exp());
        power.unscale_mut(norm);
        log_scale += norm.ln();
        power = &power * m;
    }
    best
}

/// Family-analytic unit-circle test.
pub fn spectrum_meets_unit_circle(op: &OperatorSpec) -> CircleAnswer {
    spectrum(op).meets_unit_circle()
}
