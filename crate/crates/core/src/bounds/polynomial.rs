use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, operator_p_norm, ComplexMatrix, PNorm};
use crate::matching::{frobenius_matching_distance, optimal_matching_distance};
use crate::matpoly::{
    companion, companion_is_normal_predicate, det_at, polynomial_spectrum, tuple_matrix_p_norm, tuple_operator_p_norm,
    MatrixPolynomial, Spectrum,
};

use super::{elsner_constant, pokrzywa_gamma, BoundId, BoundReport, ReportBuilder, HYPOTHESIS_TOL};

fn shape_check(p: &MatrixPolynomial, q: &MatrixPolynomial) -> Result<()> {
    let (kp, kq) = (p.order() * p.degree(), q.order() * q.degree());
    if kp != kq {
        return Err(Error::SizeMismatch(kp, kq));
    }
    if !p.same_shape(q) {
        return Err(Error::DimensionMismatch(format!(
            "polynomial shapes differ: (n={}, m={}) vs (n={}, m={})",
            p.order(),
            p.degree(),
            q.order(),
            q.degree()
        )));
    }
    Ok(())
}

/// Shape check plus monicity; returns the lower coefficient differences.
fn monic_pair(p: &MatrixPolynomial, q: &MatrixPolynomial) -> Result<Vec<ComplexMatrix>> {
    if !p.is_monic() || !q.is_monic() {
        return Err(Error::NotMonic);
    }
    shape_check(p, q)?;
    let mut diffs = p.coeff_differences(q)?;
    diffs.pop();
    Ok(diffs)
}

fn spectra(p: &MatrixPolynomial, q: &MatrixPolynomial) -> Result<(Spectrum, Spectrum)> {
    Ok((polynomial_spectrum(p)?, polynomial_spectrum(q)?))
}

fn sum_of_norms(diffs: &[ComplexMatrix], p: PNorm) -> Result<f64> {
    diffs.iter().map(|d| operator_p_norm(d, p)).sum()
}

/// Frobenius distance of the spectra against `|A − Ā|_F`, hypotheses:
/// both companions normal.
pub fn check_polynomial_hoffman_wielandt(p: &MatrixPolynomial, q: &MatrixPolynomial) -> Result<BoundReport> {
    let diffs = monic_pair(p, q)?;
    let (sp, sq) = spectra(p, q)?;
    let lhs = frobenius_matching_distance(&sp, &sq)?.distance;
    let rhs = tuple_matrix_p_norm(&diffs, PNorm::TWO)?;
    let mut r = ReportBuilder::new(BoundId::PolyHoffmanWielandt);
    r.hypothesis("C_P normal", companion_is_normal_predicate(p, HYPOTHESIS_TOL)?)
        .hypothesis("C_Q normal", companion_is_normal_predicate(q, HYPOTHESIS_TOL)?);
    Ok(r.finish(lhs, rhs))
}

/// The chain `dist ≤ c‖A − Ā‖_p ≤ c Σ‖A_i − Ā_i‖_p` with an unknown universal
/// `c`. Only the inner inequality can be checked: the report's `lhs` is the
/// tuple operator norm, `rhs` the sum of block norms. The matching distance
/// and the empirical ratio `dist / ‖A − Ā‖_p` are carried as constants.
pub fn check_polynomial_bdm(p: &MatrixPolynomial, q: &MatrixPolynomial, pn: PNorm) -> Result<BoundReport> {
    let diffs = monic_pair(p, q)?;
    let mid = tuple_operator_p_norm(&diffs, pn)?;
    let rhs_sum = sum_of_norms(&diffs, pn)?;
    let (sp, sq) = spectra(p, q)?;
    let dist = optimal_matching_distance(&sp, &sq)?.distance;
    let mut r = ReportBuilder::new(BoundId::PolyUniversalConstant);
    r.constant("matching_distance", dist).constant("tuple_norm", mid);
    if mid > 0.0 {
        r.constant("empirical_constant", dist / mid);
    } else if dist == 0.0 {
        r.constant("empirical_constant", 0.0);
    }
    r.hypothesis("C_P normal", companion_is_normal_predicate(p, HYPOTHESIS_TOL)?)
        .hypothesis("C_Q normal", companion_is_normal_predicate(q, HYPOTHESIS_TOL)?);
    Ok(r.finish(mid, rhs_sum))
}

fn unitary_binomial(p: &MatrixPolynomial) -> (bool, bool) {
    let lower = p.lower_coeffs();
    let shape = p.is_monic() && lower[1..].iter().all(|a| a.max_abs() <= HYPOTHESIS_TOL);
    (shape, lower[0].is_unitary(HYPOTHESIS_TOL))
}

/// `dist ≤ (2mn − 1)‖A_0 − Ā_0‖_p` for `I z^m + A_0` with unitary `A_0`.
pub fn check_cor_2mn(p: &MatrixPolynomial, q: &MatrixPolynomial, pn: PNorm) -> Result<BoundReport> {
    shape_check(p, q)?;
    let k = p.order() * p.degree();
    let diff = operator_p_norm(&(p.coeff(0) - q.coeff(0)), pn)?;
    let (sp, sq) = spectra(p, q)?;
    let lhs = optimal_matching_distance(&sp, &sq)?.distance;
    let factor = (2 * k - 1) as f64;
    let (p_shape, p_unit) = unitary_binomial(p);
    let (q_shape, q_unit) = unitary_binomial(q);
    let mut r = ReportBuilder::new(BoundId::Unitary2mn);
    r.constant("factor", factor)
        .constant("norm_diff", diff)
        .hypothesis("P = I z^m + A_0", p_shape)
        .hypothesis("Q = I z^m + A_0", q_shape)
        .hypothesis("A_0 of P unitary", p_unit)
        .hypothesis("A_0 of Q unitary", q_unit);
    Ok(r.finish(lhs, factor * diff))
}

/// `dist ≤ (γ_{mn} + 2)‖A − Ā‖_p`, hypothesis: `C_P` Hermitian. The weaker
/// sum-of-blocks right-hand side is a binding sub-check on top.
pub fn check_polynomial_kahan(p: &MatrixPolynomial, q: &MatrixPolynomial, pn: PNorm) -> Result<BoundReport> {
    let diffs = monic_pair(p, q)?;
    let k = p.order() * p.degree();
    let gamma = pokrzywa_gamma(k);
    let mid = tuple_operator_p_norm(&diffs, pn)?;
    let rhs_sum = (gamma + 2.0) * sum_of_norms(&diffs, pn)?;
    let (sp, sq) = spectra(p, q)?;
    let lhs = optimal_matching_distance(&sp, &sq)?.distance;
    let rhs = (gamma + 2.0) * mid;
    let hermitian = companion(p)?.matrix().is_hermitian(HYPOTHESIS_TOL);
    let mut r = ReportBuilder::new(BoundId::PolyKahan);
    r.constant("gamma", gamma)
        .constant("tuple_norm", mid)
        .constant("rhs_sum", rhs_sum)
        .hypothesis("C_P Hermitian", hermitian)
        .sub_check("tuple bound below block sum", rhs, rhs_sum, true);
    Ok(r.finish(lhs, rhs))
}

/// Bound `M′` on `‖C_A‖_p` for monic `A` with `|(A_0, ..., A_{m-1})|_p ≤ N`.
pub fn nbounded_companion_bound(m: usize, n: usize, pn: PNorm, big_n: f64) -> f64 {
    let k = (m * n) as f64;
    match pn {
        PNorm::Infinity => k * big_n.max(1.0),
        PNorm::Finite(p) => {
            let exponent = (pn.conjugate_reciprocal() - pn.reciprocal()).max(0.0);
            k.powf(exponent) * (big_n.powf(p) + ((m - 1) * n) as f64).powf(1.0 / p)
        }
    }
}

/// `dist ≤ c ‖A − Ā‖_p^{1/mn}` for monic pairs whose lower coefficient tuples
/// have entrywise p-norm at most `N`, with
/// `c = c(mn) (mn)^{1/mn} (2M′)^{1−1/mn}`.
pub fn check_nbounded_theorem(p: &MatrixPolynomial, q: &MatrixPolynomial, pn: PNorm, big_n: f64) -> Result<BoundReport> {
    if !big_n.is_finite() || big_n < 0.0 {
        return Err(Error::InvalidInput(format!("N must be a finite nonnegative bound, got {big_n}")));
    }
    let diffs = monic_pair(p, q)?;
    let (n, m) = (p.order(), p.degree());
    let k = m * n;
    let kf = k as f64;
    let m_prime = nbounded_companion_bound(m, n, pn, big_n);
    let c = elsner_constant(k) * kf.powf(1.0 / kf) * (2.0 * m_prime).powf(1.0 - 1.0 / kf);
    let diff = tuple_operator_p_norm(&diffs, pn)?;
    let norm_p = tuple_matrix_p_norm(p.lower_coeffs(), pn)?;
    let norm_q = tuple_matrix_p_norm(q.lower_coeffs(), pn)?;
    let cp = operator_p_norm(companion(p)?.matrix(), pn)?;
    let cq = operator_p_norm(companion(q)?.matrix(), pn)?;
    let (sp, sq) = spectra(p, q)?;
    let lhs = optimal_matching_distance(&sp, &sq)?.distance;
    let mut r = ReportBuilder::new(BoundId::BoundedCoefficients);
    r.constant("N", big_n)
        .constant("M_prime", m_prime)
        .constant("c_k", elsner_constant(k))
        .constant("c", c)
        .constant("norm_diff", diff)
        .hypothesis(format!("|A|_p = {norm_p} <= N"), norm_p <= big_n * (1.0 + HYPOTHESIS_TOL))
        .hypothesis(format!("|Ā|_p = {norm_q} <= N"), norm_q <= big_n * (1.0 + HYPOTHESIS_TOL))
        .sub_check("|C_P|_p <= M'", cp, m_prime, true)
        .sub_check("|C_Q|_p <= M'", cq, m_prime, true);
    Ok(r.finish(lhs, c * diff.powf(1.0 / kf)))
}

/// Constants attached to a non-monic center `Ā`, all in operator 1-norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonmonicConstants {
    /// `‖Ā_m^{-1}‖_1`.
    pub inv_leading_norm: f64,
    /// `max_i ‖Ā_i‖_1` over all `m + 1` coefficients.
    pub center_norm: f64,
    /// `1 / ‖Ā_m^{-1}‖_1`, radius of the admissible ball.
    pub radius: f64,
    /// Eigenvalue modulus bound `2 + ‖Ā_m^{-1}‖_1 ‖Ā‖_1`.
    pub localization: f64,
    pub l: f64,
    pub c: f64,
}

impl NonmonicConstants {
    pub fn of(center: &MatrixPolynomial) -> Result<Self> {
        let inv = inverse(center.leading()).map_err(|e| match e {
            Error::SingularMatrix { .. } => Error::SingularLeadingCoefficient,
            other => other,
        })?;
        let (n, m) = (center.order(), center.degree());
        let inv_leading_norm = operator_p_norm(&inv, PNorm::ONE)?;
        let center_norm = tuple_operator_p_norm(center.coeffs(), PNorm::ONE)?;
        let t = inv_leading_norm * center_norm;
        let radius = 1.0 / inv_leading_norm;
        let l = ((2.0 + t).powi(m as i32 + 1) - 1.0) / (1.0 + t);
        let nf = n as f64;
        let base = nf * l.powi(n as i32 - 1) * (radius + center_norm).powi(n as i32 - 1);
        Ok(Self {
            inv_leading_norm,
            center_norm,
            radius,
            localization: 2.0 + t,
            l,
            c: base.powf(1.0 / (m * n) as f64),
        })
    }
}

/// Largest `dist(λ, σ(Q))^{mn} / |det Q(λ)| · scale` over `λ ∈ σ(P)`.
fn det_ratio(sp: &Spectrum, sq: &Spectrum, q: &MatrixPolynomial, scale: f64) -> Result<f64> {
    let k = sq.len() as i32;
    let mut worst = 0.0f64;
    for &lam in sp.values() {
        let d = sq.values().iter().map(|&mu| (lam - mu).norm()).fold(f64::INFINITY, f64::min);
        if d == 0.0 {
            continue;
        }
        let det = det_at(q, lam)?.norm();
        worst = worst.max(if det == 0.0 { f64::MAX } else { d.powi(k) * scale / det });
    }
    Ok(worst)
}

/// Hölder-type bound for non-monic pairs in the ball
/// `max_i ‖A_i − Ā_i‖_1 < 1/‖Ā_m^{-1}‖_1` around `Ā`:
/// `dist(σ(P), σ(Q)) ≤ c ‖P − Q‖_1^{1/mn}`.
///
/// Binding sub-check: every eigenvalue of `P` and `Q` lies in the disc of
/// radius `2 + ‖Ā_m^{-1}‖_1 ‖Ā‖_1`. Informational sub-checks compare
/// `dist(λ, σ(Q))^{mn}` with `|det Q(λ)|`, once as is and once divided by
/// `|det Q_m|`.
pub fn check_nonmonic_theorem(p: &MatrixPolynomial, q: &MatrixPolynomial, center: &MatrixPolynomial) -> Result<BoundReport> {
    shape_check(p, q)?;
    shape_check(p, center)?;
    let k = NonmonicConstants::of(center)?;
    let dp = tuple_operator_p_norm(&p.coeff_differences(center)?, PNorm::ONE)?;
    let dq = tuple_operator_p_norm(&q.coeff_differences(center)?, PNorm::ONE)?;
    let diff = tuple_operator_p_norm(&p.coeff_differences(q)?, PNorm::ONE)?;
    let mut r = ReportBuilder::new(BoundId::NonmonicBall);
    r.constant("inv_leading_norm", k.inv_leading_norm)
        .constant("center_norm", k.center_norm)
        .constant("radius", k.radius)
        .constant("localization", k.localization)
        .constant("L", k.l)
        .constant("c", k.c)
        .constant("dist_p_center", dp)
        .constant("dist_q_center", dq)
        .constant("norm_diff", diff)
        .hypothesis(format!("|P - Ā|_1 = {dp} < {}", k.radius), dp < k.radius)
        .hypothesis(format!("|Q - Ā|_1 = {dq} < {}", k.radius), dq < k.radius);

    let (sp, sq) = spectra(p, q)?;
    let lhs = optimal_matching_distance(&sp, &sq)?.distance;
    let max_mod = sp.max_modulus().max(sq.max_modulus());
    r.sub_check("eigenvalue localization", max_mod, k.localization, true);

    let det_qm = determinant(q.leading())?.norm();
    let det_pm = determinant(p.leading())?.norm();
    let plain = det_ratio(&sp, &sq, q, 1.0)?.max(det_ratio(&sq, &sp, p, 1.0)?);
    let scaled = det_ratio(&sp, &sq, q, det_qm)?.max(det_ratio(&sq, &sp, p, det_pm)?);
    r.sub_check("dist^mn <= |det Q(λ)|", plain, 1.0, false)
        .sub_check("dist^mn <= |det Q(λ)| / |det Q_m|", scaled, 1.0, false);

    let kf = sp.len() as f64;
    Ok(r.finish(lhs, k.c * diff.powf(1.0 / kf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{
        gen_hermitian, gen_monic_arbitrary, gen_monic_hermitian_companion, gen_monic_normal_companion,
        gen_nonmonic_center, gen_nonmonic_in_ball,
    };
    use crate::linalg::c64;

    fn scalar(c: &[f64]) -> MatrixPolynomial {
        MatrixPolynomial::scalar(&c.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn poly_hw_examples() {
        let p = gen_monic_normal_companion(2, 3, 4).unwrap();
        let r = check_polynomial_hoffman_wielandt(&p, &p).unwrap();
        assert!(r.lhs < 1e-12 && r.holds && r.hypotheses_met);

        let i2 = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let p = MatrixPolynomial::monic(vec![i2.clone(), z.clone()]).unwrap();
        let q = MatrixPolynomial::monic(vec![-&i2, z]).unwrap();
        let r = check_polynomial_hoffman_wielandt(&p, &q).unwrap();
        assert!(r.hypotheses_met && r.holds);
        assert!((r.rhs - 8f64.sqrt()).abs() < 1e-14);
        // roots ±i (twice) against ±1 (twice): every pairing costs 2 in square
        assert!((r.lhs - 8f64.sqrt()).abs() < 1e-9, "{}", r.lhs);

        for seed in 0..20 {
            let n = 1 + seed as usize % 4;
            let m = 1 + seed as usize % 3;
            let p = gen_monic_normal_companion(n, m, seed).unwrap();
            let q = gen_monic_normal_companion(n, m, seed + 99).unwrap();
            let r = check_polynomial_hoffman_wielandt(&p, &q).unwrap();
            assert!(r.hypotheses_met && r.holds, "{r:?}");
        }
        let nonmonic = MatrixPolynomial::new(vec![i2.clone(), i2.scale(c64(2.0, 0.0))]).unwrap();
        let monic = MatrixPolynomial::pencil(&i2).unwrap();
        assert!(matches!(check_polynomial_hoffman_wielandt(&nonmonic, &monic), Err(Error::NotMonic)));
        assert!(matches!(
            check_polynomial_hoffman_wielandt(&monic, &scalar(&[1.0, 1.0])),
            Err(Error::SizeMismatch(2, 1))
        ));
    }

    #[test]
    fn bdm_examples() {
        let p = gen_monic_normal_companion(2, 2, 1).unwrap();
        let r = check_polynomial_bdm(&p, &p, PNorm::TWO).unwrap();
        assert_eq!(r.constant("empirical_constant"), Some(0.0));
        assert!(r.holds);

        let q = gen_monic_normal_companion(2, 2, 2).unwrap();
        for pn in PNorm::operator_supported() {
            let r = check_polynomial_bdm(&p, &q, pn).unwrap();
            let single = operator_p_norm(&(p.coeff(0) - q.coeff(0)), pn).unwrap();
            assert!((r.lhs - single).abs() < 1e-12 && r.holds && r.hypotheses_met);
            assert!(r.constant("empirical_constant").unwrap() > 0.0);
        }
    }

    #[test]
    fn cor_2mn_examples() {
        let p = scalar(&[1.0, 0.0, 1.0]);
        let q = scalar(&[-1.0, 0.0, 1.0]);
        let r = check_cor_2mn(&p, &p, PNorm::ONE).unwrap();
        assert!(r.holds && r.lhs < 1e-12 && r.rhs == 0.0);
        let r = check_cor_2mn(&p, &q, PNorm::ONE).unwrap();
        assert!(r.hypotheses_met && r.holds);
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs - 6.0).abs() < 1e-12);

        for seed in 0..20 {
            let n = 1 + seed as usize % 3;
            let m = 1 + (seed as usize / 3) % 3;
            let p = gen_monic_normal_companion(n, m, seed).unwrap();
            let q = gen_monic_normal_companion(n, m, seed + 7).unwrap();
            for pn in PNorm::operator_supported() {
                let r = check_cor_2mn(&p, &q, pn).unwrap();
                assert!(r.hypotheses_met && r.holds, "{r:?}");
            }
        }
        let r = check_cor_2mn(&scalar(&[1.0, 0.5, 1.0]), &q, PNorm::TWO).unwrap();
        assert!(!r.hypotheses_met);
    }

    #[test]
    fn poly_kahan_examples() {
        let p = gen_monic_hermitian_companion(2, 2, 3).unwrap();
        let r = check_polynomial_kahan(&p, &p, PNorm::TWO).unwrap();
        assert!(r.holds && r.hypotheses_met && r.lhs < 1e-12);

        // reflection A_0, spectrum of I z + A_0 is real
        let refl = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let p = MatrixPolynomial::monic(vec![refl]).unwrap();
        let q = gen_monic_arbitrary(2, 1, 5, 0.3).unwrap();
        for pn in PNorm::operator_supported() {
            let r = check_polynomial_kahan(&p, &q, pn).unwrap();
            assert!(r.hypotheses_met && r.holds, "{r:?}");
        }

        for seed in 0..10 {
            let p = MatrixPolynomial::monic(vec![gen_hermitian(3, seed).unwrap()]).unwrap();
            let q = gen_monic_arbitrary(3, 1, seed + 1, 1.0).unwrap();
            let r = check_polynomial_kahan(&p, &q, PNorm::TWO).unwrap();
            assert!(r.hypotheses_met && r.holds);
        }
        let q = gen_monic_arbitrary(2, 2, 1, 1.0).unwrap();
        assert!(!check_polynomial_kahan(&q, &q, PNorm::TWO).unwrap().hypotheses_met);
    }

    #[test]
    fn nbounded_examples() {
        assert_eq!(nbounded_companion_bound(2, 1, PNorm::Infinity, 1.0), 2.0);
        assert!((nbounded_companion_bound(1, 3, PNorm::TWO, 5.0) - 5.0).abs() < 1e-12);
        assert!((nbounded_companion_bound(2, 2, PNorm::ONE, 3.0) - 5.0).abs() < 1e-12);

        let p = gen_monic_arbitrary(2, 2, 8, 1.0).unwrap();
        let r = check_nbounded_theorem(&p, &p, PNorm::TWO, 5.0).unwrap();
        assert!(r.holds && r.lhs < 1e-12);
        assert!(r.constant("M_prime").is_some() && r.constant("c").is_some());

        for seed in 0..20 {
            let n = 1 + seed as usize % 3;
            let m = 1 + seed as usize % 4;
            let p = gen_monic_arbitrary(n, m, seed, 0.4).unwrap();
            let q = gen_monic_arbitrary(n, m, seed + 40, 0.4).unwrap();
            for pn in PNorm::operator_supported() {
                let big_n = tuple_matrix_p_norm(p.lower_coeffs(), pn)
                    .unwrap()
                    .max(tuple_matrix_p_norm(q.lower_coeffs(), pn).unwrap());
                let r = check_nbounded_theorem(&p, &q, pn, big_n).unwrap();
                assert!(r.hypotheses_met && r.holds, "{r:?}");
                assert!(r.sub_checks.iter().all(|s| s.holds));
            }
        }
        let big = gen_monic_arbitrary(2, 2, 1, 10.0).unwrap();
        let r = check_nbounded_theorem(&big, &big, PNorm::TWO, 1.0).unwrap();
        assert!(!r.hypotheses_met);
        assert!(matches!(r.enforce(), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn nonmonic_scalar_linear_case() {
        let center = scalar(&[0.0, 1.0]);
        let p = scalar(&[0.1, 1.0]);
        let q = scalar(&[-0.1, 1.0]);
        let r = check_nonmonic_theorem(&p, &q, &center).unwrap();
        assert!(r.hypotheses_met);
        assert!((r.lhs - 0.2).abs() < 1e-15);
        assert!((r.constant("norm_diff").unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(r.constant("radius"), Some(1.0));
        assert_eq!(r.constant("localization"), Some(3.0));
        // L = (3² − 1)/2, c = 1 for n = 1
        assert_eq!(r.constant("L"), Some(4.0));
        assert_eq!(r.constant("c"), Some(1.0));
        assert!(r.holds);

        let r = check_nonmonic_theorem(&p, &p, &center).unwrap();
        assert!(r.degenerate && r.holds);

        let out = scalar(&[1.5, 1.0]);
        let r = check_nonmonic_theorem(&out, &p, &center).unwrap();
        assert!(!r.hypotheses_met);
        assert!(matches!(
            check_nonmonic_theorem(&p, &q, &scalar(&[1.0, 0.0])),
            Err(Error::SingularLeadingCoefficient)
        ));
    }

    #[test]
    fn nonmonic_determinant_sub_checks() {
        let center = gen_nonmonic_center(2, 2, 3, 1.0).unwrap();
        let p = gen_nonmonic_in_ball(&center, 0.01, 1).unwrap();
        let q = gen_nonmonic_in_ball(&center, 0.01, 2).unwrap();
        let r = check_nonmonic_theorem(&p, &q, &center).unwrap();
        assert!(r.hypotheses_met);
        let scaled = r.sub_checks.iter().find(|s| s.name.contains("det Q_m")).unwrap();
        assert!(scaled.holds && !scaled.binding);
    }
}
