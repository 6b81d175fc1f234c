//! Seeded generators for the matrix and polynomial families that the bound
//! checkers need.
//!
//! Reproducibility contract: every generator is a pure function of its
//! arguments. The bit stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed by
//! `seed_from_u64(seed)`; uniforms take the top 53 bits of `next_u64`;
//! Gaussians use the Box–Muller transform (both outputs, cosine first).
//! Independent sub-streams are derived with [`derive_seed`].

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, operator_p_norm, ComplexMatrix, PNorm};
use crate::matpoly::{tuple_operator_p_norm, MatrixPolynomial};

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sub-stream `stream` under `base`:
/// `splitmix64(base ^ splitmix64(stream))`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

/// Portable random source used by every generator.
pub struct SeededRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Integer uniform on `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = std::f64::consts::TAU * u2;
        self.spare = Some(r * t.sin());
        r * t.cos()
    }

    /// Complex normal with unit variance, `(g1 + i g2)/√2`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re = self.gaussian();
        let im = self.gaussian();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_matrix(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| self.complex_gaussian())
    }
}

/// Columns of `g` orthonormalized by Gram–Schmidt with one reorthogonalization
/// pass; the implied `R` has a positive real diagonal, which is the phase
/// normalization that makes the QR of a Gaussian matrix Haar distributed.
fn orthonormalize_columns(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(q, v)| q.conj() * v).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (v, q) in rest[0].iter_mut().zip(&done[k]) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn gen_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    require_order(n, 1)?;
    let mut rng = SeededRng::new(seed);
    Ok(orthonormalize_columns(&rng.gaussian_matrix(n)))
}

/// `U diag(d) U*`, symmetrized so the result is exactly Hermitian when `d` is real.
fn unitary_similarity(u: &ComplexMatrix, d: &[Complex64]) -> ComplexMatrix {
    let ud = ComplexMatrix::from_fn(u.rows(), u.cols(), |i, j| u[(i, j)] * d[j]);
    &ud * &u.conjugate_transpose()
}

fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + &a.conjugate_transpose()).scale(Complex64::new(0.5, 0.0))
}

/// Hermitian matrix with spectrum drawn uniformly from `[b, a]`.
pub fn gen_hermitian_in_interval(n: usize, a: f64, b: f64, seed: u64) -> Result<ComplexMatrix> {
    require_order(n, 1)?;
    if !(b > 0.0 && b <= a && a.is_finite()) {
        return Err(Error::BadInterval { a, b });
    }
    let u = gen_unitary(n, derive_seed(seed, 0))?;
    let mut rng = SeededRng::new(derive_seed(seed, 1));
    let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.uniform_in(b, a), 0.0)).collect();
    Ok(hermitian_part(&unitary_similarity(&u, &d)))
}

/// `U diag(g) U*` with complex Gaussian `g`.
pub fn gen_normal(n: usize, seed: u64) -> Result<ComplexMatrix> {
    require_order(n, 1)?;
    let u = gen_unitary(n, derive_seed(seed, 0))?;
    let mut rng = SeededRng::new(derive_seed(seed, 1));
    let d: Vec<Complex64> = (0..n).map(|_| rng.complex_gaussian()).collect();
    Ok(unitary_similarity(&u, &d))
}

/// `(G + G*)/2`.
pub fn gen_hermitian(n: usize, seed: u64) -> Result<ComplexMatrix> {
    require_order(n, 1)?;
    Ok(hermitian_part(&SeededRng::new(seed).gaussian_matrix(n)))
}

/// `scale · G`.
pub fn gen_arbitrary(n: usize, seed: u64, scale: f64) -> Result<ComplexMatrix> {
    require_order(n, 1)?;
    Ok(SeededRng::new(seed).gaussian_matrix(n).scale(Complex64::new(scale, 0.0)))
}

/// `I z^m + A_0` with `A_0` unitary and no middle terms, so the companion is normal.
pub fn gen_monic_normal_companion(n: usize, m: usize, seed: u64) -> Result<MatrixPolynomial> {
    require_order(n, 1)?;
    require_degree(m)?;
    let a0 = -&gen_unitary(n, seed)?;
    let mut lower = vec![a0];
    lower.extend((1..m).map(|_| ComplexMatrix::zeros(n, n)));
    MatrixPolynomial::monic(lower)
}

/// Monic polynomial with a Hermitian companion. Only degrees 1 and 2 admit
/// one: `I z + A_0` with `A_0` Hermitian, or `I z² + A_1 z − I` with `A_1`
/// Hermitian.
pub fn gen_monic_hermitian_companion(n: usize, m: usize, seed: u64) -> Result<MatrixPolynomial> {
    require_order(n, 1)?;
    match m {
        1 => MatrixPolynomial::monic(vec![gen_hermitian(n, seed)?]),
        2 => MatrixPolynomial::monic(vec![-&ComplexMatrix::identity(n), gen_hermitian(n, seed)?]),
        _ => Err(Error::InvalidInput(format!(
            "no monic polynomial of degree {m} has a Hermitian companion matrix (degree must be 1 or 2)"
        ))),
    }
}

/// Monic polynomial with `scale · G` lower coefficients.
pub fn gen_monic_arbitrary(n: usize, m: usize, seed: u64, scale: f64) -> Result<MatrixPolynomial> {
    require_order(n, 1)?;
    require_degree(m)?;
    let lower = (0..m)
        .map(|i| gen_arbitrary(n, derive_seed(seed, i as u64), scale))
        .collect::<Result<Vec<_>>>()?;
    MatrixPolynomial::monic(lower)
}

/// Non-monic center polynomial with Gaussian lower coefficients and a random
/// unitary (hence well-conditioned) leading coefficient.
pub fn gen_nonmonic_center(n: usize, m: usize, seed: u64, scale: f64) -> Result<MatrixPolynomial> {
    require_order(n, 1)?;
    require_degree(m)?;
    let mut coeffs = (0..m)
        .map(|i| gen_arbitrary(n, derive_seed(seed, i as u64), scale))
        .collect::<Result<Vec<_>>>()?;
    coeffs.push(gen_unitary(n, derive_seed(seed, m as u64))?);
    MatrixPolynomial::new(coeffs)
}

/// `Ā + Δ` where the random perturbation is rescaled so that
/// `max_i ‖Δ_i‖_1 = radius_fraction / ‖Ā_m^{-1}‖_1`.
pub fn gen_nonmonic_in_ball(center: &MatrixPolynomial, radius_fraction: f64, seed: u64) -> Result<MatrixPolynomial> {
    if !(0.0..1.0).contains(&radius_fraction) {
        return Err(Error::InvalidInput(format!(
            "radius fraction must lie in [0, 1), got {radius_fraction}"
        )));
    }
    let inv = inverse(center.leading()).map_err(|_| Error::SingularLeadingCoefficient)?;
    let radius = radius_fraction / operator_p_norm(&inv, PNorm::ONE)?;
    if radius_fraction == 0.0 {
        return Ok(center.clone());
    }
    let n = center.order();
    let mut rng = SeededRng::new(seed);
    let delta: Vec<ComplexMatrix> = (0..=center.degree()).map(|_| rng.gaussian_matrix(n)).collect();
    let size = tuple_operator_p_norm(&delta, PNorm::ONE)?;
    let factor = Complex64::new(radius / size, 0.0);
    let coeffs = center
        .coeffs()
        .iter()
        .zip(&delta)
        .map(|(a, d)| a + &d.scale(factor))
        .collect();
    MatrixPolynomial::new(coeffs)
}

/// First two columns of a random unitary.
pub fn gen_orthonormal_pair(n: usize, seed: u64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    require_order(n, 2)?;
    let u = gen_unitary(n, seed)?;
    Ok(((0..n).map(|i| u[(i, 0)]).collect(), (0..n).map(|i| u[(i, 1)]).collect()))
}

fn require_order(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::OrderTooSmall(n))
    } else {
        Ok(())
    }
}

fn require_degree(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidInput("degree m must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Instance family, with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Unitary,
    Hermitian,
    HermitianInInterval { a: f64, b: f64 },
    Normal,
    Arbitrary,
    MonicNormalCompanion,
    MonicHermitianCompanion,
    MonicArbitrary,
    NonmonicCenter,
    /// Ball around a center drawn from `nonmonic-center` under the same seed.
    NonmonicBall { radius_fraction: f64 },
    OrthonormalPair,
}

fn default_scale() -> f64 {
    1.0
}

/// Declarative generator call; the seed fully determines the output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

/// Output of [`generate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Generated {
    Matrix(ComplexMatrix),
    Polynomial(MatrixPolynomial),
    VectorPair {
        #[serde(with = "crate::serde_pairs")]
        x: Vec<Complex64>,
        #[serde(with = "crate::serde_pairs")]
        y: Vec<Complex64>,
    },
}

impl GenSpec {
    fn degree(&self) -> Result<usize> {
        self.m
            .ok_or_else(|| Error::InvalidInput("this family needs a degree m".into()))
    }
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    let (n, seed, scale) = (spec.n, spec.seed, spec.scale);
    Ok(match &spec.family {
        Family::Unitary => Generated::Matrix(gen_unitary(n, seed)?),
        Family::Hermitian => Generated::Matrix(gen_hermitian(n, seed)?),
        Family::HermitianInInterval { a, b } => Generated::Matrix(gen_hermitian_in_interval(n, *a, *b, seed)?),
        Family::Normal => Generated::Matrix(gen_normal(n, seed)?),
        Family::Arbitrary => Generated::Matrix(gen_arbitrary(n, seed, scale)?),
        Family::MonicNormalCompanion => Generated::Polynomial(gen_monic_normal_companion(n, spec.degree()?, seed)?),
        Family::MonicHermitianCompanion => {
            Generated::Polynomial(gen_monic_hermitian_companion(n, spec.degree()?, seed)?)
        }
        Family::MonicArbitrary => Generated::Polynomial(gen_monic_arbitrary(n, spec.degree()?, seed, scale)?),
        Family::NonmonicCenter => Generated::Polynomial(gen_nonmonic_center(n, spec.degree()?, seed, scale)?),
        Family::NonmonicBall { radius_fraction } => {
            let center = gen_nonmonic_center(n, spec.degree()?, derive_seed(seed, 0), scale)?;
            Generated::Polynomial(gen_nonmonic_in_ball(&center, *radius_fraction, derive_seed(seed, 1))?)
        }
        Family::OrthonormalPair => {
            let (x, y) = gen_orthonormal_pair(n, seed)?;
            Generated::VectorPair { x, y }
        }
    })
}
