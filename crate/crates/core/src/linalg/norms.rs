use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{eigenvalues, ComplexMatrix};
use crate::error::{Error, Result};

/// Exponent of an ℓ_p norm: a finite `p >= 1` or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub const ONE: PNorm = PNorm::Finite(1.0);
    pub const TWO: PNorm = PNorm::Finite(2.0);

    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            Err(Error::InvalidPNorm(p))
        } else if p.is_infinite() {
            Ok(PNorm::Infinity)
        } else {
            Ok(PNorm::Finite(p))
        }
    }

    /// `1/p`, zero for infinity.
    pub fn reciprocal(self) -> f64 {
        match self {
            PNorm::Finite(p) => 1.0 / p,
            PNorm::Infinity => 0.0,
        }
    }

    /// `1/p'` for the Hölder conjugate `1/p + 1/p' = 1`.
    pub fn conjugate_reciprocal(self) -> f64 {
        1.0 - self.reciprocal()
    }

    /// The three exponents with an exact operator-norm formula.
    pub fn operator_supported() -> [PNorm; 3] {
        [PNorm::ONE, PNorm::TWO, PNorm::Infinity]
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("cannot parse p-norm exponent {s:?}")))
                .and_then(PNorm::finite),
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PNorm::Finite(p) => s.serialize_f64(*p),
            PNorm::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PNorm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => PNorm::finite(p),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Entrywise p-norm. For `p = 2` this is the Frobenius norm.
///
/// Entries are accumulated in row-major order, so a matrix padded with zero
/// rows yields bitwise the same value as the unpadded one.
pub fn matrix_p_norm(a: &ComplexMatrix, p: PNorm) -> f64 {
    match p {
        PNorm::Infinity => a.max_abs(),
        PNorm::Finite(1.0) => a.data().iter().map(|z| z.norm()).sum(),
        PNorm::Finite(2.0) => a.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        PNorm::Finite(p) => a
            .data()
            .iter()
            .map(|z| z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// Norm induced by the vector ℓ_p norm, for `p` in {1, 2, ∞}. Works for
/// rectangular matrices as well.
pub fn operator_p_norm(a: &ComplexMatrix, p: PNorm) -> Result<f64> {
    match p {
        PNorm::Infinity => Ok((0..a.rows())
            .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)),
        PNorm::Finite(1.0) => Ok((0..a.cols())
            .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)),
        PNorm::Finite(2.0) => spectral_norm(a),
        PNorm::Finite(p) => Err(Error::UnsupportedPNorm(p)),
    }
}

/// Largest singular value from the largest eigenvalue of the smaller Gram matrix.
fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let h = a.conjugate_transpose();
    let gram = if a.rows() <= a.cols() { a * &h } else { &h * a };
    let eig = eigenvalues(&gram)?;
    let top = eig.eigenvalues.iter().map(|z| z.re).fold(0.0, f64::max);
    Ok(top.sqrt())
}
