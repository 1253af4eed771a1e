use serde::{Deserialize, Serialize};

use crate::error::{decode_failure, Error, Result};
use crate::scalar::{is_finite, JsonScalar, Scalar};

/// `c_0 + c_1 z + ... + c_n z^n` with `c_n != 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<JsonScalar>", into = "Vec<JsonScalar>")]
pub struct PolynomialCoeffs {
    coeffs: Vec<Scalar>,
}

impl PolynomialCoeffs {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::EmptyPolynomial),
            Some(c) if *c == Scalar::default() => Err(Error::EmptyPolynomial),
            _ if coeffs.iter().any(|c| !is_finite(*c)) => {
                Err(Error::InvalidSpec("non-finite polynomial coefficient".into()))
            }
            _ => Ok(PolynomialCoeffs { coeffs }),
        }
    }

    pub fn from_reals(coeffs: &[f64]) -> Result<Self> {
        PolynomialCoeffs::new(coeffs.iter().map(|c| Scalar::new(*c, 0.0)).collect())
    }

    /// `z^m`.
    pub fn monomial(m: usize) -> Self {
        let mut coeffs = vec![Scalar::default(); m + 1];
        coeffs[m] = Scalar::new(1.0, 0.0);
        PolynomialCoeffs { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::default(), |acc, c| acc * z + c)
    }

    pub fn mul(&self, other: &PolynomialCoeffs) -> PolynomialCoeffs {
        let mut out = vec![Scalar::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialCoeffs { coeffs: out }
    }

    pub fn pow(&self, k: u64) -> PolynomialCoeffs {
        let mut acc = PolynomialCoeffs { coeffs: vec![Scalar::new(1.0, 0.0)] };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(&self) -> PolynomialCoeffs {
        PolynomialCoeffs { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }
}

impl TryFrom<Vec<JsonScalar>> for PolynomialCoeffs {
    type Error = Error;
    fn try_from(v: Vec<JsonScalar>) -> Result<Self> {
        PolynomialCoeffs::new(v.into_iter().map(|s| s.0).collect()).map_err(decode_failure)
    }
}

impl From<PolynomialCoeffs> for Vec<JsonScalar> {
    fn from(p: PolynomialCoeffs) -> Self {
        p.coeffs.into_iter().map(JsonScalar).collect()
    }
}
