//! Serde helper: complex vectors as `[[re, im], ...]`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
    let raw = Vec::<[f64; 2]>::deserialize(d)?;
    if raw.iter().flatten().any(|x| !x.is_finite()) {
        return Err(serde::de::Error::custom("non-finite vector entry"));
    }
    Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}
