//! Norm-constrained least squares `min ||A e - b||_2` subject to `||e||_2 <= delta`.
//!
//! In the singular basis `A = U diag(sigma) V*`, `beta = U* b`, the minimizer
//! is `e = V c` with `c_i = sigma_i beta_i / (sigma_i^2 + lambda)`. The
//! multiplier is zero when the minimum-norm solution `beta_i / sigma_i` is
//! feasible; otherwise it is the root of `||c(lambda)|| = delta`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_SECULAR_ITER: usize = 200;
pub const SECULAR_TOL: f64 = 1e-12;

/// The problem reduced to its singular basis.
#[derive(Debug, Clone)]
pub struct SecularSystem {
    pub sigma: Vec<f64>,
    pub beta: Vec<Scalar>,
    /// Norm of the part of `b` outside the numerical range of `A`.
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecularSolution {
    /// Minimizer coordinates in the singular basis.
    pub coeffs: Vec<Scalar>,
    pub residual: f64,
    /// Part of the residual inside the range of `A`.
    pub range_residual: f64,
    pub floor: f64,
    pub norm: f64,
    pub multiplier: f64,
    pub active: bool,
    pub iterations: usize,
    pub converged: bool,
}

impl SecularSystem {
    /// `sigma_i <= rank_tol * max sigma` counts as zero and moves `beta_i` into the floor.
    pub fn new(sigma: Vec<f64>, beta: Vec<Scalar>, floor: f64, rank_tol: f64) -> Self {
        let smax = sigma.iter().copied().fold(0.0, f64::max);
        let mut kept_s = Vec::with_capacity(sigma.len());
        let mut kept_b = Vec::with_capacity(sigma.len());
        let mut floor2 = floor * floor;
        for (s, b) in sigma.into_iter().zip(beta) {
            if smax > 0.0 && s > rank_tol * smax {
                kept_s.push(s);
                kept_b.push(b);
            } else {
                floor2 += b.norm_sqr();
            }
        }
        SecularSystem { sigma: kept_s, beta: kept_b, floor: floor2.sqrt() }
    }

    fn coeffs(&self, lambda: f64) -> Vec<Scalar> {
        self.sigma.iter().zip(&self.beta).map(|(s, b)| b * (s / (s * s + lambda))).collect()
    }

    fn norm_and_slope(&self, lambda: f64) -> (f64, f64) {
        let mut n2 = 0.0;
        let mut d = 0.0;
        for (s, b) in self.sigma.iter().zip(&self.beta) {
            let q = s * s + lambda;
            let a2 = s * s * b.norm_sqr();
            n2 += a2 / (q * q);
            d += a2 / (q * q * q);
        }
        (n2.sqrt(), d)
    }

    fn finish(
        &self,
        mut coeffs: Vec<Scalar>,
        lambda: f64,
        delta: f64,
        iterations: usize,
        converged: bool,
    ) -> SecularSolution {
        let mut norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > delta {
            let f = delta / norm;
            coeffs.iter_mut().for_each(|c| *c *= f);
            norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        }
        let range2: f64 =
            self.sigma.iter().zip(&self.beta).zip(&coeffs).map(|((s, b), c)| (c * s - b).norm_sqr()).sum();
        let range_residual = range2.sqrt();
        SecularSolution {
            coeffs,
            residual: (range2 + self.floor * self.floor).sqrt(),
            range_residual,
            floor: self.floor,
            norm,
            multiplier: lambda,
            active: lambda > 0.0,
            iterations,
            converged,
        }
    }

    pub fn solve(&self, delta: f64) -> Result<SecularSolution> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("perturbation radius must be positive, got {delta}")));
        }
        let free = self.coeffs(0.0);
        let free_norm = free.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if free_norm <= delta {
            return Ok(self.finish(free, 0.0, delta, 0, true));
        }
        // g(lambda) = 1/||c(lambda)|| - 1/delta is increasing and nearly linear;
        // g(0) < 0 and g(smax ||beta|| / delta) >= 0.
        let smax = self.sigma.iter().copied().fold(0.0, f64::max);
        let bnorm = self.beta.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
        let (mut lo, mut hi) = (0.0, smax * bnorm / delta);
        let mut lambda = 0.0;
        let mut best = (f64::INFINITY, hi);
        for it in 1..=MAX_SECULAR_ITER {
            let (n, slope) = self.norm_and_slope(lambda);
            let gap = (n - delta).abs();
            if n <= delta && gap < best.0 {
                best = (gap, lambda);
            }
            if gap <= SECULAR_TOL * delta {
                return Ok(self.finish(self.coeffs(lambda), lambda, delta, it, true));
            }
            if n > delta {
                lo = lambda;
            } else {
                hi = lambda;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(self.finish(self.coeffs(hi), hi, delta, it, true));
            }
            let g = 1.0 / n - 1.0 / delta;
            let dg = slope / (n * n * n);
            let step = lambda - g / dg;
            lambda = if step.is_finite() && step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        }
        let lambda = if best.0.is_finite() { best.1 } else { hi };
        Ok(self.finish(self.coeffs(lambda), lambda, delta, MAX_SECULAR_ITER, false))
    }
}

/// Dense problem with a cached SVD; `solve` may be called for many radii.
#[derive(Debug, Clone)]
pub struct TrsProblem {
    system: SecularSystem,
    /// Right singular vectors of the kept singular values, one per column.
    v: DMatrix<Scalar>,
}

impl TrsProblem {
    pub fn new(a: &DMatrix<Scalar>, b: &DVector<Scalar>, rank_tol: f64) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::NumericalBreakdown(format!("matrix has {} rows, vector {}", a.nrows(), b.len())));
        }
        if a.iter().chain(b.iter()).any(|z| !crate::scalar::is_finite(*z)) {
            return Err(Error::NumericalBreakdown("non-finite input".into()));
        }
        let n = a.ncols();
        if a.nrows() == 0 || n == 0 {
            return Ok(TrsProblem {
                system: SecularSystem { sigma: vec![], beta: vec![], floor: b.norm() },
                v: DMatrix::zeros(n, 0),
            });
        }
        let svd = nalgebra::SVD::try_new(a.clone(), true, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::NumericalBreakdown("SVD did not converge".into()))?;
        let u = svd.u.as_ref().expect("requested U");
        let vt = svd.v_t.as_ref().expect("requested V*");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| smax > 0.0 && svd.singular_values[i] > rank_tol * smax)
            .collect();
        let mut in_range = DVector::<Scalar>::zeros(b.len());
        let mut sigma = Vec::with_capacity(keep.len());
        let mut beta = Vec::with_capacity(keep.len());
        let mut v = DMatrix::<Scalar>::zeros(n, keep.len());
        for (col, &i) in keep.iter().enumerate() {
            let ui = u.column(i);
            let bi = ui.dotc(b);
            in_range += ui * bi;
            sigma.push(svd.singular_values[i]);
            beta.push(bi);
            v.set_column(col, &vt.row(i).adjoint());
        }
        let floor = (b - in_range).norm();
        Ok(TrsProblem { system: SecularSystem { sigma, beta, floor }, v })
    }

    pub fn system(&self) -> &SecularSystem {
        &self.system
    }

    /// Returns the minimizer `e*` and the solution record.
    pub fn solve(&self, delta: f64) -> Result<(DVector<Scalar>, SecularSolution)> {
        let sol = self.system.solve(delta)?;
        let c = DVector::from_column_slice(&sol.coeffs);
        Ok((&self.v * c, sol))
    }
}

/// `(e*, residual, multiplier)`; fails with `NonConvergence` when the secular
/// iteration hits its cap.
pub fn constrained_lsq(a: &DMatrix<Scalar>, b: &DVector<Scalar>, delta: f64) -> Result<(DVector<Scalar>, f64, f64)> {
    let (e, sol) = TrsProblem::new(a, b, 1e-12)?.solve(delta)?;
    if !sol.converged {
        return Err(Error::NonConvergence { iterations: sol.iterations });
    }
    Ok((e, sol.residual, sol.multiplier))
}
