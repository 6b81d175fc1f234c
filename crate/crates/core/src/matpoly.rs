//! Matrix polynomials `P(z) = A_m z^m + ... + A_1 z + A_0`, their block
//! companion linearization, coefficient-tuple norms and spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    determinant, eigenvalues, inverse, matrix_p_norm, operator_p_norm, ComplexMatrix, PNorm,
};

/// Tolerance for the `A_m = I` test.
pub const MONIC_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients `A_0, ..., A_m`, all `n × n`, stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct MatrixPolynomial {
    coeffs: Vec<ComplexMatrix>,
    n: usize,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DimensionMismatch(
                "a matrix polynomial needs degree m >= 1 (at least two coefficients)".into(),
            ));
        }
        let n = coeffs[0].order()?;
        for (i, a) in coeffs.iter().enumerate() {
            if a.order()? != n {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient A_{i} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { coeffs, n })
    }

    /// `I z^m + A_{m-1} z^{m-1} + ... + A_0` from the lower coefficients.
    pub fn monic(lower: Vec<ComplexMatrix>) -> Result<Self> {
        let n = lower
            .first()
            .ok_or_else(|| Error::DimensionMismatch("monic polynomial needs A_0".into()))?
            .order()?;
        let mut coeffs = lower;
        coeffs.push(ComplexMatrix::identity(n));
        Self::new(coeffs)
    }

    /// `I z - A`, whose spectrum is the ordinary spectrum of `A`.
    pub fn pencil(a: &ComplexMatrix) -> Result<Self> {
        Self::monic(vec![-a])
    }

    /// Scalar polynomial from coefficients `c_0, ..., c_m`.
    pub fn scalar(coeffs: &[Complex64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ComplexMatrix::from_diag(&[c])).collect())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &ComplexMatrix {
        &self.coeffs[i]
    }

    pub fn leading(&self) -> &ComplexMatrix {
        &self.coeffs[self.degree()]
    }

    /// `A_0, ..., A_{m-1}`.
    pub fn lower_coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs[..self.degree()]
    }

    pub fn is_monic(&self) -> bool {
        let diff = self.leading() - &ComplexMatrix::identity(self.n);
        diff.max_abs() <= MONIC_TOL
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.n == other.n && self.degree() == other.degree()
    }

    fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "polynomial shapes differ: (n={}, m={}) vs (n={}, m={})",
                self.n,
                self.degree(),
                other.n,
                other.degree()
            )))
        }
    }

    /// Coefficient-wise differences `A_i - B_i` for all `m + 1` coefficients.
    pub fn coeff_differences(&self, other: &Self) -> Result<Vec<ComplexMatrix>> {
        self.ensure_same_shape(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    /// Horner evaluation of `Σ A_i z^i`.
    pub fn evaluate(&self, z: Complex64) -> ComplexMatrix {
        let mut acc = self.leading().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(z) + a;
        }
        acc
    }

    /// `A_m^{-1} P(z)`, monic by construction.
    pub fn monicized(&self) -> Result<Self> {
        if self.is_monic() {
            return Ok(self.clone());
        }
        let inv = inverse(self.leading()).map_err(|e| match e {
            Error::SingularMatrix { .. } => Error::SingularLeadingCoefficient,
            other => other,
        })?;
        let mut coeffs: Vec<ComplexMatrix> = self.lower_coeffs().iter().map(|a| &inv * a).collect();
        coeffs.push(ComplexMatrix::identity(self.n));
        Self::new(coeffs)
    }
}

/// Block companion matrix of a monic polynomial, tagged with its block shape.
#[derive(Clone, Debug, PartialEq)]
pub struct CompanionMatrix {
    matrix: ComplexMatrix,
    m: usize,
    n: usize,
}

impl CompanionMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn block_shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }
}

/// Companion matrix
///
/// ```text
/// [  0    I    0  ...   0      ]
/// [  0    0    I  ...   0      ]
/// [  :                  :      ]
/// [  0    0    0  ...   I      ]
/// [ -A_0 -A_1 -A_2 ... -A_{m-1}]
/// ```
pub fn companion(p: &MatrixPolynomial) -> Result<CompanionMatrix> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let (n, m) = (p.order(), p.degree());
    let mut c = ComplexMatrix::zeros(m * n, m * n);
    for blk in 0..m - 1 {
        for i in 0..n {
            c[(blk * n + i, (blk + 1) * n + i)] = ONE;
        }
    }
    let row0 = (m - 1) * n;
    for (blk, a) in p.lower_coeffs().iter().enumerate() {
        c.set_block(row0, blk * n, &(-a));
    }
    Ok(CompanionMatrix { matrix: c, m, n })
}

/// Multiset of eigenvalues. Never compare two spectra index-wise; use the
/// matching distances instead.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Values ordered by modulus, then phase in `[0, 2π)`. Both keys are
    /// rounded to 10 significant digits so that rounding noise does not
    /// reorder values of equal modulus. For display only.
    pub fn sorted_for_display(&self) -> Vec<Complex64> {
        fn key(z: &Complex64) -> (f64, f64) {
            let r = z.norm();
            let phase = if z.im.abs() <= 1e-12 * r {
                if z.re < 0.0 {
                    std::f64::consts::PI
                } else {
                    0.0
                }
            } else {
                z.im.atan2(z.re).rem_euclid(std::f64::consts::TAU)
            };
            (round_sig(r), round_sig(phase))
        }
        let mut v = self.values.clone();
        v.sort_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
        });
        v
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = 9 - x.abs().log10().floor() as i32;
    let f = 10f64.powi(e);
    (x * f).round() / f
}

impl From<Vec<Complex64>> for Spectrum {
    fn from(values: Vec<Complex64>) -> Self {
        Self::new(values)
    }
}

/// All `mn` eigenvalues. A non-monic polynomial is first multiplied by
/// `A_m^{-1}`; a singular leading coefficient is rejected.
pub fn polynomial_spectrum(p: &MatrixPolynomial) -> Result<Spectrum> {
    let monic = p.monicized()?;
    let c = companion(&monic)?;
    let eig = eigenvalues(c.matrix())?;
    Ok(Spectrum::new(eig.eigenvalues))
}

fn block_row(tuple: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = tuple
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty coefficient tuple".into()))?
        .rows();
    if tuple.iter().any(|a| a.rows() != n || a.cols() != n) {
        return Err(Error::DimensionMismatch("tuple blocks must share one square order".into()));
    }
    ComplexMatrix::hstack(tuple)
}

/// Entrywise p-norm of a coefficient tuple, `(Σ_i |T_i|_p^p)^{1/p}` or
/// `max_i |T_i|_∞`. Evaluated on the block row `[T_0 ... T_{k-1}]`, which
/// holds the same entries in the same order as the nonzero rows of a
/// companion difference.
pub fn tuple_matrix_p_norm(tuple: &[ComplexMatrix], p: PNorm) -> Result<f64> {
    Ok(matrix_p_norm(&block_row(tuple)?, p))
}

/// Operator p-norm of the `n × kn` block row `[T_0 T_1 ... T_{k-1}]`.
pub fn tuple_operator_p_norm(tuple: &[ComplexMatrix], p: PNorm) -> Result<f64> {
    operator_p_norm(&block_row(tuple)?, p)
}

/// Block-level normality test for `C_A`, without forming `C_A C_A^*`.
///
/// For `m >= 3`, `C_A` is normal exactly when `A_0` is unitary and
/// `A_1 = ... = A_{m-1} = 0`. Lower degrees admit more: for `m = 1` the
/// companion is `-A_0`, normal iff `A_0` is; for `m = 2` the block equations
/// reduce to `A_0` unitary, `A_1` normal and `A_0^* A_1 = -A_1^*` (so
/// `z^2 + z - 1` has a normal, even symmetric, companion).
pub fn companion_is_normal_predicate(p: &MatrixPolynomial, tol: f64) -> Result<bool> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let lower = p.lower_coeffs();
    Ok(match lower {
        [a0] => a0.is_normal(tol),
        [a0, a1] => {
            let cross = &(&a0.conjugate_transpose() * a1) + &a1.conjugate_transpose();
            a0.is_unitary(tol) && a1.is_normal(tol) && cross.frobenius_norm() <= tol * (1.0 + a1.frobenius_norm())
        }
        _ => {
            lower[0].is_unitary(tol)
                && lower[1..]
                    .iter()
                    .all(|a| matrix_p_norm(a, PNorm::Infinity) <= tol)
        }
    })
}

/// Cauchy-type radius: every eigenvalue satisfies
/// `|λ| < 1 + ‖A_m^{-1}‖_1 · max_{i<m} ‖A_i‖_1`.
pub fn cauchy_eigenvalue_bound(p: &MatrixPolynomial) -> Result<f64> {
    let inv = inverse(p.leading()).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::SingularLeadingCoefficient,
        other => other,
    })?;
    let inv_norm = operator_p_norm(&inv, PNorm::ONE)?;
    let mut max_coeff = 0.0f64;
    for a in p.lower_coeffs() {
        max_coeff = max_coeff.max(operator_p_norm(a, PNorm::ONE)?);
    }
    Ok(1.0 + inv_norm * max_coeff)
}

/// Scalar polynomial arithmetic on coefficient vectors (lowest degree first).
fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(ZERO) - b.get(i).copied().unwrap_or(ZERO))
        .collect()
}

/// Coefficients of `det P(z)` by explicit expansion of the 1×1 or 2×2
/// polynomial-entry matrix. Limited to `n <= 2`, `m <= 3`.
pub fn char_poly_oracle(p: &MatrixPolynomial) -> Result<Vec<Complex64>> {
    let (n, m) = (p.order(), p.degree());
    if n > 2 || m > 3 {
        return Err(Error::OracleSizeExceeded(format!(
            "characteristic polynomial oracle supports n <= 2, m <= 3; got n = {n}, m = {m}"
        )));
    }
    let entry = |i: usize, j: usize| -> Vec<Complex64> { p.coeffs().iter().map(|a| a[(i, j)]).collect() };
    if n == 1 {
        return Ok(entry(0, 0));
    }
    Ok(poly_sub(
        &poly_mul(&entry(0, 0), &entry(1, 1)),
        &poly_mul(&entry(0, 1), &entry(1, 0)),
    ))
}

/// Roots of a scalar polynomial through its companion matrix. Leading zero
/// coefficients are trimmed.
pub fn scalar_roots(coeffs: &[Complex64]) -> Result<Spectrum> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].norm() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Spectrum::new(Vec::new()));
    }
    let lead = coeffs[deg];
    let mut c = ComplexMatrix::zeros(deg, deg);
    for i in 0..deg - 1 {
        c[(i, i + 1)] = ONE;
    }
    for j in 0..deg {
        c[(deg - 1, j)] = -coeffs[j] / lead;
    }
    Ok(Spectrum::new(eigenvalues(&c)?.eigenvalues))
}

/// `|det P(λ)|`, used by the spectrum residual checks.
pub fn det_at(p: &MatrixPolynomial, z: Complex64) -> Result<Complex64> {
    determinant(&p.evaluate(z))
}

/// On-disk layout: `{"n": n, "m": m, "coeffs": [<matrix>, ...]}`, `A_0` first.
#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    n: usize,
    m: usize,
    coeffs: Vec<ComplexMatrix>,
}

impl TryFrom<PolynomialJson> for MatrixPolynomial {
    type Error = Error;
    fn try_from(j: PolynomialJson) -> Result<Self> {
        if j.coeffs.len() != j.m + 1 {
            return Err(Error::DimensionMismatch(format!(
                "degree m = {} needs {} coefficients, found {}",
                j.m,
                j.m + 1,
                j.coeffs.len()
            )));
        }
        let p = MatrixPolynomial::new(j.coeffs)?;
        if p.order() != j.n {
            return Err(Error::DimensionMismatch(format!(
                "declared order n = {} but coefficients are {}x{}",
                j.n,
                p.order(),
                p.order()
            )));
        }
        Ok(p)
    }
}

impl From<MatrixPolynomial> for PolynomialJson {
    fn from(p: MatrixPolynomial) -> Self {
        PolynomialJson {
            n: p.n,
            m: p.degree(),
            coeffs: p.coeffs,
        }
    }
}
