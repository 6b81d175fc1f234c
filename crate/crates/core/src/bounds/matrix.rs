use crate::error::Result;
use crate::linalg::{determinant, matrix_p_norm, operator_p_norm, ComplexMatrix, PNorm};
use crate::matching::{frobenius_matching_distance, optimal_matching_distance};

use super::{elsner_constant, matrix_spectrum, pokrzywa_gamma, same_order, BoundId, BoundReport, ReportBuilder, HYPOTHESIS_TOL};

/// `dist_F(σ(A), σ(B)) ≤ |A − B|_F`, hypotheses: `A`, `B` normal.
pub fn check_hoffman_wielandt(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BoundReport> {
    same_order(a, b)?;
    let lhs = frobenius_matching_distance(&matrix_spectrum(a)?, &matrix_spectrum(b)?)?.distance;
    let rhs = matrix_p_norm(&(a - b), PNorm::TWO);
    let mut r = ReportBuilder::new(BoundId::HoffmanWielandt);
    r.hypothesis("A normal", a.is_normal(HYPOTHESIS_TOL))
        .hypothesis("B normal", b.is_normal(HYPOTHESIS_TOL));
    Ok(r.finish(lhs, rhs))
}

/// `dist(σ(A), σ(B)) ≤ (2n − 1)‖A − B‖_2`, hypothesis: `A` normal.
pub fn check_normal_vs_arbitrary(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BoundReport> {
    let n = same_order(a, b)?;
    let lhs = optimal_matching_distance(&matrix_spectrum(a)?, &matrix_spectrum(b)?)?.distance;
    let diff = operator_p_norm(&(a - b), PNorm::TWO)?;
    let factor = (2 * n - 1) as f64;
    let mut r = ReportBuilder::new(BoundId::NormalVsArbitrary);
    r.constant("factor", factor)
        .constant("norm_diff", diff)
        .hypothesis("A normal", a.is_normal(HYPOTHESIS_TOL));
    Ok(r.finish(lhs, factor * diff))
}

/// `dist(σ(A), σ(B)) ≤ (γ_n + 2)‖A − B‖_p`, hypothesis: `A` Hermitian.
pub fn check_kahan(a: &ComplexMatrix, b: &ComplexMatrix, p: PNorm) -> Result<BoundReport> {
    let n = same_order(a, b)?;
    let diff = operator_p_norm(&(a - b), p)?;
    let lhs = optimal_matching_distance(&matrix_spectrum(a)?, &matrix_spectrum(b)?)?.distance;
    let gamma = pokrzywa_gamma(n);
    let mut r = ReportBuilder::new(BoundId::Kahan);
    r.constant("gamma", gamma)
        .constant("norm_diff", diff)
        .hypothesis("A Hermitian", a.is_hermitian(HYPOTHESIS_TOL));
    Ok(r.finish(lhs, (gamma + 2.0) * diff))
}

/// `dist(σ(A), σ(B)) ≤ c(k) k^{1/k} (2M)^{1−1/k} ‖A − B‖_p^{1/k}` with
/// `M = max(‖A‖_p, ‖B‖_p)`. No structural hypotheses.
pub fn check_elsner(a: &ComplexMatrix, b: &ComplexMatrix, p: PNorm) -> Result<BoundReport> {
    let k = same_order(a, b)?;
    let big_m = operator_p_norm(a, p)?.max(operator_p_norm(b, p)?);
    let diff = operator_p_norm(&(a - b), p)?;
    let lhs = optimal_matching_distance(&matrix_spectrum(a)?, &matrix_spectrum(b)?)?.distance;
    let kf = k as f64;
    let ck = elsner_constant(k);
    let c = ck * kf.powf(1.0 / kf) * (2.0 * big_m).powf(1.0 - 1.0 / kf);
    let mut r = ReportBuilder::new(BoundId::Elsner);
    r.constant("c_k", ck)
        .constant("M", big_m)
        .constant("c", c)
        .constant("norm_diff", diff);
    Ok(r.finish(lhs, c * diff.powf(1.0 / kf)))
}

/// `|det A − det B| ≤ n max(‖A‖_p, ‖B‖_p)^{n−1} ‖A − B‖_p`.
pub fn check_det_perturbation(a: &ComplexMatrix, b: &ComplexMatrix, p: PNorm) -> Result<BoundReport> {
    let n = same_order(a, b)?;
    let big_m = operator_p_norm(a, p)?.max(operator_p_norm(b, p)?);
    let diff = operator_p_norm(&(a - b), p)?;
    let lhs = (determinant(a)? - determinant(b)?).norm();
    let rhs = n as f64 * big_m.powi(n as i32 - 1) * diff;
    let mut r = ReportBuilder::new(BoundId::DetPerturbation);
    r.constant("M", big_m).constant("norm_diff", diff);
    Ok(r.finish(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::genlab::{gen_arbitrary, gen_hermitian, gen_normal};
    use crate::linalg::c64;

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diag(&v.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn hoffman_wielandt_examples() {
        let r = check_hoffman_wielandt(&diag(&[1.0, 2.0]), &diag(&[2.0, 1.0])).unwrap();
        assert!(r.holds && r.hypotheses_met);
        assert!(r.lhs.abs() < 1e-14);
        assert!((r.rhs - 2f64.sqrt()).abs() < 1e-14);

        let r = check_hoffman_wielandt(&ComplexMatrix::zeros(2, 2), &diag(&[1.0, 1.0])).unwrap();
        assert!(r.holds);
        assert!((r.slack_ratio.unwrap() - 1.0).abs() < 1e-9);

        for seed in 0..10 {
            let a = gen_normal(6, seed).unwrap();
            let b = gen_normal(6, seed + 100).unwrap();
            let r = check_hoffman_wielandt(&a, &b).unwrap();
            assert!(r.hypotheses_met && r.holds, "{r:?}");
        }
        assert!(matches!(
            check_hoffman_wielandt(&diag(&[1.0]), &diag(&[1.0, 2.0])),
            Err(Error::SizeMismatch(1, 2))
        ));
    }

    #[test]
    fn normal_vs_arbitrary_examples() {
        let a = gen_normal(4, 3).unwrap();
        let r = check_normal_vs_arbitrary(&a, &a).unwrap();
        assert!(r.holds && r.lhs < 1e-12 && r.rhs == 0.0);

        let jordan = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = check_normal_vs_arbitrary(&ComplexMatrix::zeros(2, 2), &jordan).unwrap();
        assert!(r.holds && r.lhs == 0.0);
        assert!((r.rhs - 3.0).abs() < 1e-12);

        for seed in 0..10 {
            let n = 1 + (seed as usize % 8);
            let a = gen_normal(n, seed).unwrap();
            let b = gen_arbitrary(n, seed + 50, 1.0).unwrap();
            let r = check_normal_vs_arbitrary(&a, &b).unwrap();
            assert!(r.hypotheses_met && r.holds, "{r:?}");
        }
    }

    #[test]
    fn kahan_examples() {
        let a = gen_hermitian(3, 1).unwrap();
        let r = check_kahan(&a, &a, PNorm::TWO).unwrap();
        assert!(r.holds && r.hypotheses_met);

        let r = check_kahan(&diag(&[1.0]), &diag(&[3.5]), PNorm::ONE).unwrap();
        assert_eq!(r.constant("gamma"), Some(0.0));
        assert!((r.rhs - 5.0).abs() < 1e-12 && (r.lhs - 2.5).abs() < 1e-12);

        for seed in 0..10 {
            let a = gen_hermitian(5, seed).unwrap();
            let b = gen_arbitrary(5, seed + 7, 1.0).unwrap();
            for p in PNorm::operator_supported() {
                let r = check_kahan(&a, &b, p).unwrap();
                assert!(r.hypotheses_met && r.holds, "{r:?}");
            }
        }
        let r = check_kahan(&gen_arbitrary(3, 2, 1.0).unwrap(), &diag(&[1.0, 2.0, 3.0]), PNorm::TWO).unwrap();
        assert!(!r.hypotheses_met && r.slack_ratio.is_none());
        assert!(matches!(
            check_kahan(&a, &a, PNorm::finite(3.0).unwrap()),
            Err(Error::UnsupportedPNorm(_))
        ));
    }

    #[test]
    fn elsner_examples() {
        let a = gen_arbitrary(4, 9, 1.0).unwrap();
        let r = check_elsner(&a, &a, PNorm::Infinity).unwrap();
        assert!(r.holds && r.lhs < 1e-12 && r.rhs == 0.0);

        let r = check_elsner(&diag(&[0.25]), &diag(&[-1.0]), PNorm::TWO).unwrap();
        assert!((r.rhs - 1.25).abs() < 1e-12 && (r.lhs - 1.25).abs() < 1e-12 && r.holds);

        for seed in 0..20 {
            let k = 1 + (seed as usize % 10);
            let a = gen_arbitrary(k, seed, 1.0).unwrap();
            let b = gen_arbitrary(k, seed + 1000, 1.0).unwrap();
            for p in PNorm::operator_supported() {
                assert!(check_elsner(&a, &b, p).unwrap().holds);
            }
        }
    }

    #[test]
    fn det_perturbation_examples() {
        let r = check_det_perturbation(&diag(&[2.0]), &diag(&[-0.5]), PNorm::ONE).unwrap();
        assert!((r.lhs - 2.5).abs() < 1e-15 && (r.rhs - 2.5).abs() < 1e-15 && r.holds);
        for seed in 0..20 {
            let n = 1 + (seed as usize % 8);
            let a = gen_arbitrary(n, seed, 1.0).unwrap();
            let b = gen_arbitrary(n, seed + 333, 1.0).unwrap();
            for p in PNorm::operator_supported() {
                assert!(check_det_perturbation(&a, &b, p).unwrap().holds);
            }
        }
    }
}
