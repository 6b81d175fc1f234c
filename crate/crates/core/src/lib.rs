//! Spectra of matrix polynomials through block companion linearization,
//! matching distances between spectra, and numerical checks of spectral
//! variation inequalities.

pub mod bounds;
pub mod campaign;
pub mod error;
pub mod genlab;
pub mod linalg;
pub mod matching;
pub mod matpoly;
mod serde_pairs;

pub use error::{Error, Result};

#[cfg(test)]
mod test_support;
