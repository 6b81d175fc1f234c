use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::matpoly::MatrixPolynomial;

use super::{matrix_spectrum, BoundId, BoundReport, ReportBuilder, HYPOTHESIS_TOL};

/// Quadratic forms are accepted as real when their imaginary parts stay below this.
pub const REAL_TOL: f64 = 1e-10;
/// Tolerance on `|x| = |y| = 1` and `|x*y| = 0`.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn vector_hypotheses(r: &mut ReportBuilder, n: usize, x: &[Complex64], y: &[Complex64]) -> Result<()> {
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} for order {n}",
            x.len(),
            y.len()
        )));
    }
    r.hypothesis("|x| = 1", (norm(x) - 1.0).abs() <= ORTHONORMAL_TOL)
        .hypothesis("|y| = 1", (norm(y) - 1.0).abs() <= ORTHONORMAL_TOL)
        .hypothesis("x*y = 0", inner(x, y).norm() <= ORTHONORMAL_TOL);
    Ok(())
}

/// Hermitian with every eigenvalue in `[b, a]`, up to `HYPOTHESIS_TOL · max(1, a)`.
fn in_interval(r: &mut ReportBuilder, name: &str, m: &ComplexMatrix, a: f64, b: f64) -> Result<()> {
    let hermitian = m.is_hermitian(HYPOTHESIS_TOL);
    r.hypothesis(format!("{name} Hermitian"), hermitian);
    let tol = HYPOTHESIS_TOL * a.abs().max(1.0);
    let inside = hermitian
        && matrix_spectrum(m)?
            .values()
            .iter()
            .all(|l| l.re >= b - tol && l.re <= a + tol);
    r.hypothesis(format!("spectrum of {name} in [b, a]"), inside);
    Ok(())
}

fn interval_hypothesis(r: &mut ReportBuilder, a: f64, b: f64) -> f64 {
    let ok = b > 0.0 && b <= a && a.is_finite();
    r.hypothesis("0 < b <= a", ok);
    let f = if ok { (a - b) / (a + b) } else { f64::NAN };
    r.constant("factor", f * f);
    f * f
}

fn finish(mut r: ReportBuilder, factor: f64, xy: Complex64, xx: Complex64, yy: Complex64) -> BoundReport {
    let imag = xx.im.abs().max(yy.im.abs());
    r.constant("x*Ax", xx.re)
        .constant("y*Ay", yy.re)
        .sub_check("quadratic forms real", imag, REAL_TOL, true)
        .sub_check("x*Ax > 0", -xx.re, 0.0, true)
        .sub_check("y*Ay > 0", -yy.re, 0.0, true);
    let factor = if factor.is_nan() { 0.0 } else { factor };
    r.finish(xy.norm_sqr(), factor * xx.re * yy.re)
}

/// `|x*Ay|² ≤ ((a−b)/(a+b))² (x*Ax)(y*Ay)` for Hermitian `A` with spectrum in
/// `[b, a]`, `0 < b ≤ a`, and orthonormal `x`, `y`.
pub fn check_wielandt_scalar(
    a_mat: &ComplexMatrix,
    a: f64,
    b: f64,
    x: &[Complex64],
    y: &[Complex64],
) -> Result<BoundReport> {
    let n = a_mat.order()?;
    let mut r = ReportBuilder::new(BoundId::WielandtScalar);
    vector_hypotheses(&mut r, n, x, y)?;
    let factor = interval_hypothesis(&mut r, a, b);
    in_interval(&mut r, "A", a_mat, a, b)?;
    let xy = a_mat.quadratic_form(x, y);
    let xx = a_mat.quadratic_form(x, x);
    let yy = a_mat.quadratic_form(y, y);
    Ok(finish(r, factor, xy, xx, yy))
}

/// `|x*P(λ)y|² ≤ ((a−b)/(a+b))² (x*P(|λ|)x)(y*P(|λ|)y)` when every
/// coefficient satisfies `bI ≤ A_i ≤ aI`.
pub fn check_wielandt_polynomial(
    p: &MatrixPolynomial,
    a: f64,
    b: f64,
    x: &[Complex64],
    y: &[Complex64],
    lambda: Complex64,
) -> Result<BoundReport> {
    let n = p.order();
    let mut r = ReportBuilder::new(BoundId::WielandtPoly);
    vector_hypotheses(&mut r, n, x, y)?;
    let factor = interval_hypothesis(&mut r, a, b);
    for (i, c) in p.coeffs().iter().enumerate() {
        in_interval(&mut r, &format!("A_{i}"), c, a, b)?;
    }
    let at = p.evaluate(lambda);
    let at_abs = p.evaluate(c64(lambda.norm(), 0.0));
    let xy = at.quadratic_form(x, y);
    let xx = at_abs.quadratic_form(x, x);
    let yy = at_abs.quadratic_form(y, y);
    Ok(finish(r, factor, xy, xx, yy))
}
