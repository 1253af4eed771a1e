#![allow(dead_code)]

use jclass_core::operator::{
    EntrySeq, IndexWindow, OperatorSpec, PolynomialCoeffs, SeqVector, ShiftSpace, SpaceTag, Support, WeightSeq,
};
use jclass_core::Scalar;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

pub fn cplx(r: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn random_weights(r: &mut ChaCha8Rng, bilateral: bool) -> WeightSeq {
    // Geometric weights over Z are unbounded unless the ratio is 1.
    let family = if bilateral { [0, 1, 3][r.gen_range(0..3)] } else { r.gen_range(0..3) };
    match family {
        0 => WeightSeq::constant(r.gen_range(0.3..2.5)),
        1 => WeightSeq::FiniteThenTail {
            values: (0..r.gen_range(1..6)).map(|_| r.gen_range(0.3..2.5)).collect(),
            tail: r.gen_range(0.3..2.5),
        },
        2 => WeightSeq::Geometric { c: r.gen_range(0.5..2.0), ratio: r.gen_range(0.8..1.0) },
        _ => WeightSeq::TwoSidedSplit { positive: r.gen_range(0.3..2.5), nonpositive: r.gen_range(0.3..2.5) },
    }
}

pub fn random_matrix(r: &mut ChaCha8Rng, d: usize) -> DMatrix<Scalar> {
    DMatrix::from_fn(d, d, |_, _| cplx(r))
}

pub fn random_dvector(r: &mut ChaCha8Rng, d: usize) -> DVector<Scalar> {
    DVector::from_fn(d, |_, _| cplx(r))
}

/// One operator on a Hilbert space, drawn from every family.
pub fn random_hilbert_operator(r: &mut ChaCha8Rng) -> OperatorSpec {
    match r.gen_range(0..9) {
        0 => OperatorSpec::backward_shift(random_weights(r, false), ShiftSpace::L2).unwrap(),
        1 => OperatorSpec::bilateral_shift(random_weights(r, true)).unwrap(),
        2 => OperatorSpec::new(jclass_core::operator::OperatorKind::ForwardShiftUni {
            weights: random_weights(r, false),
        })
        .unwrap(),
        3 => {
            let entries = EntrySeq::list((0..r.gen_range(1..5)).map(|_| cplx(r)).collect(), cplx(r));
            OperatorSpec::diagonal(entries, SpaceTag::UnilateralL2).unwrap()
        }
        4 => OperatorSpec::scalar_identity(cplx(r), SpaceTag::FiniteDim(r.gen_range(1..4))).unwrap(),
        5 => OperatorSpec::jordan(cplx(r), r.gen_range(1..5)).unwrap(),
        6 => {
            let d = r.gen_range(1..5);
            OperatorSpec::matrix(random_matrix(r, d)).unwrap()
        }
        7 => {
            let a = OperatorSpec::backward_shift(random_weights(r, false), ShiftSpace::L2).unwrap();
            let b = OperatorSpec::jordan(cplx(r), 2).unwrap();
            OperatorSpec::direct_sum(vec![b, a]).unwrap()
        }
        _ => {
            let base = OperatorSpec::bilateral_shift(random_weights(r, true)).unwrap();
            let coeffs = PolynomialCoeffs::new(vec![cplx(r), re(r.gen_range(0.5..1.5))]).unwrap();
            OperatorSpec::polynomial_of(base, coeffs).unwrap()
        }
    }
}

/// A window of `len` coordinates admissible in `space`.
pub fn random_support(r: &mut ChaCha8Rng, space: &SpaceTag, len: usize) -> Support {
    match space {
        SpaceTag::FiniteDim(_) => space.default_support(len),
        SpaceTag::DirectSum(parts) => Support::Sum(parts.iter().map(|p| random_support(r, p, len)).collect()),
        SpaceTag::BilateralL2 => {
            let lo = r.gen_range(-6..4);
            Support::Window(IndexWindow::new(lo, lo + len as i64 - 1).unwrap())
        }
        _ => {
            let lo = r.gen_range(1..4);
            Support::Window(IndexWindow::new(lo, lo + len as i64 - 1).unwrap())
        }
    }
}

pub fn random_on(r: &mut ChaCha8Rng, space: &SpaceTag, support: &Support) -> SeqVector {
    let data: Vec<Scalar> = (0..support.total_len()).map(|_| cplx(r)).collect();
    SeqVector::unflatten(space, support, &data).unwrap()
}

pub fn random_vector(r: &mut ChaCha8Rng, space: &SpaceTag, len: usize) -> SeqVector {
    let s = random_support(r, space, len);
    random_on(r, space, &s)
}

pub fn random_unit(r: &mut ChaCha8Rng, space: &SpaceTag, len: usize) -> SeqVector {
    let v = random_vector(r, space, len);
    let n = v.norm();
    v.scale(re(1.0 / n))
}

/// `|a - b| <= tol * max(1, scale)`.
pub fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * scale.max(1.0)
}

/// Eigenvalues from the triangular factor of a complex Schur form.
pub fn eigenvalues(m: &DMatrix<Scalar>) -> Vec<Scalar> {
    let (_, t) = m.clone().schur().unpack();
    t.diagonal().iter().copied().collect()
}

/// Monic polynomial with the given roots, lowest degree first.
pub fn from_roots(roots: &[Scalar]) -> PolynomialCoeffs {
    let mut c = vec![re(1.0)];
    for &r in roots {
        let mut next = vec![Scalar::default(); c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= r * a;
        }
        c = next;
    }
    PolynomialCoeffs::new(c).unwrap()
}

/// A matrix with a cyclic vector whose normalized Krylov basis is well
/// conditioned, and a polynomial whose roots stay at least `gap` away from
/// the spectrum.
pub struct CyclicTrial {
    pub m: DMatrix<Scalar>,
    pub x: DVector<Scalar>,
    pub p: PolynomialCoeffs,
}

pub fn cyclic_trial(seed: u64, gap: f64, max_condition: f64) -> CyclicTrial {
    let mut r = rng(seed);
    loop {
        let d = r.gen_range(1..=8);
        let m = random_matrix(&mut r, d);
        let x = random_dvector(&mut r, d);
        let cond = jclass_core::criteria::krylov_is_cyclic(&m, &x, 1e-10).unwrap().condition;
        if !(cond.is_finite() && cond <= max_condition) {
            continue;
        }
        let eig = eigenvalues(&m);
        let degree = r.gen_range(1..=4);
        let mut roots = Vec::with_capacity(degree);
        while roots.len() < degree {
            let z = Scalar::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            if eig.iter().all(|e| (e - z).norm() >= gap) {
                roots.push(z);
            }
        }
        return CyclicTrial { m, x, p: from_roots(&roots) };
    }
}
