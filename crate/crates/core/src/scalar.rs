//! Complex scalars. Real data is carried with a zero imaginary part.

pub use num_complex::Complex64;

pub type Scalar = Complex64;

#[inline]
pub fn real(re: f64) -> Scalar {
    Scalar::new(re, 0.0)
}

#[inline]
pub fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Accepts either a bare number or a `[re, im]` pair; always writes the pair.
pub mod serde_scalar {
    use super::Scalar;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(re) => Scalar::new(re, 0.0),
            Repr::Pair([re, im]) => Scalar::new(re, im),
        })
    }
}

/// Serde newtype for lists that may mix bare numbers and pairs.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct JsonScalar(#[serde(with = "serde_scalar")] pub Scalar);
