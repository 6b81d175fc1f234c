//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use polyspec::bounds::{
    check_hoffman_wielandt, check_wielandt_scalar, pokrzywa_gamma, BoundId,
};
use polyspec::campaign::{run_campaign, run_campaign_with, trial_instance, evaluate, CampaignConfig, CampaignSummary, Execution};
use polyspec::genlab::{
    derive_seed, gen_arbitrary, gen_monic_arbitrary, gen_monic_hermitian_companion, gen_monic_normal_companion, gen_normal,
    gen_unitary, SeededRng,
};
use polyspec::linalg::{determinant, eigenvalues, matrix_p_norm, operator_p_norm, ComplexMatrix, PNorm};
use polyspec::matching::{
    brute_force_matching, frobenius_matching_distance, optimal_matching_distance, MatchingMethod,
};
use polyspec::matpoly::{
    char_poly_oracle, companion, companion_is_normal_predicate, polynomial_spectrum, scalar_roots,
    tuple_matrix_p_norm, tuple_operator_p_norm, MatrixPolynomial, Spectrum,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_spectrum(rng: &mut SeededRng, k: usize) -> Spectrum {
    // a coarse grid now and then so that ties and repeated values occur
    let coarse = rng.uniform() < 0.3;
    Spectrum::new(
        (0..k)
            .map(|_| {
                if coarse {
                    c(rng.range_inclusive(0, 3) as f64, rng.range_inclusive(0, 2) as f64)
                } else {
                    rng.complex_gaussian()
                }
            })
            .collect(),
    )
}

fn within_time(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("{what} took {t:.2?}, limit {limit:.0?}"))
    } else {
        Ok(())
    }
}

fn matching_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = SeededRng::new(1);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let k = rng.range_inclusive(1, 7);
        let (s, t) = (random_spectrum(&mut rng, k), random_spectrum(&mut rng, k));
        let pairs = [
            (optimal_matching_distance(&s, &t), MatchingMethod::Bottleneck),
            (frobenius_matching_distance(&s, &t), MatchingMethod::SumOfSquares),
        ];
        for (fast, method) in pairs {
            let fast = fast.map_err(|e| e.to_string())?.distance;
            let oracle = brute_force_matching(&s, &t, method).map_err(|e| e.to_string())?.distance;
            worst = worst.max((fast - oracle).abs());
        }
    }
    within_time(start, Duration::from_secs(10), "500 pairs")?;
    if worst <= 1e-12 {
        Ok(format!("max |fast - brute force| = {worst:.1e}"))
    } else {
        Err(format!("max |fast - brute force| = {worst:.3e} > 1e-12"))
    }
}

fn linearization_fidelity() -> Outcome {
    let start = Instant::now();
    let mut rng = SeededRng::new(2);
    let mut worst = 0.0f64;
    for t in 0..200u64 {
        let n = rng.range_inclusive(1, 2);
        let m = rng.range_inclusive(1, 3);
        let p = gen_monic_arbitrary(n, m, derive_seed(2, t), 1.0).map_err(|e| e.to_string())?;
        let ours = polynomial_spectrum(&p).map_err(|e| e.to_string())?;
        let oracle = scalar_roots(&char_poly_oracle(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let d = optimal_matching_distance(&ours, &oracle).map_err(|e| e.to_string())?.distance;
        worst = worst.max(d);
    }
    within_time(start, Duration::from_secs(30), "200 polynomials")?;
    if worst <= 1e-7 {
        Ok(format!("max bottleneck distance {worst:.1e}"))
    } else {
        Err(format!("max bottleneck distance {worst:.3e} > 1e-7"))
    }
}

fn companion_difference_norms() -> Outcome {
    let mut rng = SeededRng::new(3);
    let p3 = PNorm::finite(3.0).unwrap();
    let mut worst_rel = 0.0f64;
    for t in 0..200u64 {
        let n = rng.range_inclusive(1, 4);
        let m = rng.range_inclusive(1, 4);
        let p = gen_monic_arbitrary(n, m, derive_seed(3, 2 * t), 1.0).map_err(|e| e.to_string())?;
        let q = gen_monic_arbitrary(n, m, derive_seed(3, 2 * t + 1), 1.0).map_err(|e| e.to_string())?;
        let cp = companion(&p).map_err(|e| e.to_string())?;
        let cq = companion(&q).map_err(|e| e.to_string())?;
        let cd = cp.matrix() - cq.matrix();
        let mut diffs = p.coeff_differences(&q).map_err(|e| e.to_string())?;
        diffs.pop();

        for pn in [PNorm::ONE, PNorm::TWO, p3, PNorm::Infinity] {
            let lhs = matrix_p_norm(&cd, pn);
            let rhs = tuple_matrix_p_norm(&diffs, pn).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("entrywise p = {pn}: {lhs} != {rhs} (trial {t})"));
            }
        }
        for pn in PNorm::operator_supported() {
            let op = operator_p_norm(&cd, pn).map_err(|e| e.to_string())?;
            let tuple = tuple_operator_p_norm(&diffs, pn).map_err(|e| e.to_string())?;
            let sum: f64 = diffs.iter().map(|d| operator_p_norm(d, pn).unwrap()).sum();
            let scale = op.max(1.0);
            worst_rel = worst_rel.max((op - tuple).abs() / scale);
            if (op - tuple).abs() > 1e-10 * scale {
                return Err(format!("operator p = {pn}: {op} vs {tuple} (trial {t})"));
            }
            if tuple > sum + 1e-10 * sum.max(1.0) {
                return Err(format!("operator p = {pn}: {tuple} > block sum {sum} (trial {t})"));
            }
        }
        let one = operator_p_norm(&cd, PNorm::ONE).map_err(|e| e.to_string())?;
        let max_block = diffs
            .iter()
            .map(|d| operator_p_norm(d, PNorm::ONE).unwrap())
            .fold(0.0, f64::max);
        if one != max_block {
            return Err(format!("1-norm {one} != max block 1-norm {max_block} (trial {t})"));
        }
    }
    Ok(format!("entrywise and 1-norm identities exact; operator identity within {worst_rel:.1e}"))
}

fn companion_normality() -> Outcome {
    let (mut pos, mut neg) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = SeededRng::new(derive_seed(4, seed));
        let n = rng.range_inclusive(1, 4);
        let m = rng.range_inclusive(1, 4);
        let normal = gen_monic_normal_companion(n, m, seed).map_err(|e| e.to_string())?;
        let mut candidates = vec![
            normal.clone(),
            gen_monic_arbitrary(n, m, seed, 1.0).map_err(|e| e.to_string())?,
            // low degrees have normal companions beyond the unitary binomials
            MatrixPolynomial::monic(vec![gen_normal(n, seed).map_err(|e| e.to_string())?]).map_err(|e| e.to_string())?,
            gen_monic_hermitian_companion(n, 2, seed).map_err(|e| e.to_string())?,
        ];
        // perturb one coefficient of a normal-companion polynomial
        let eps = 10f64.powf(rng.uniform_in(-6.0, -1.0));
        let which = rng.range_inclusive(0, m - 1);
        let mut lower = normal.lower_coeffs().to_vec();
        let bump = gen_arbitrary(n, derive_seed(seed, 9), 1.0).map_err(|e| e.to_string())?;
        lower[which] = &lower[which] + &bump.scale(c(eps, 0.0));
        candidates.push(MatrixPolynomial::monic(lower).map_err(|e| e.to_string())?);

        for p in candidates {
            let pred = companion_is_normal_predicate(&p, 1e-9).map_err(|e| e.to_string())?;
            let direct = companion(&p).map_err(|e| e.to_string())?.matrix().is_normal(1e-9);
            if pred != direct {
                return Err(format!("seed {seed}: predicate {pred}, direct {direct}"));
            }
            if pred {
                pos += 1
            } else {
                neg += 1
            }
        }
    }
    if pos < 100 {
        return Err(format!("only {pos} positives"));
    }
    Ok(format!("{pos} normal, {neg} non-normal, all agree"))
}

struct Campaign {
    label: String,
    cfg: CampaignConfig,
}

fn campaign(label: &str, id: BoundId, trials: u64, seed: u64, p: PNorm) -> Campaign {
    Campaign {
        label: label.to_string(),
        cfg: CampaignConfig::new(id, trials, seed).with_p(p),
    }
}

fn summary_line(s: &CampaignSummary) -> String {
    let mut line = format!(
        "violations {}, unmet {}, errors {}, max slack {}",
        s.violations,
        s.hypotheses_unmet,
        s.errors,
        s.max_slack_ratio.map_or("-".into(), |x| format!("{x:.4}"))
    );
    if let Some(c) = s.max_empirical_constant {
        line.push_str(&format!(", empirical constant {c:.4}"));
    }
    for (name, count) in &s.sub_check_failures {
        line.push_str(&format!(", sub-check '{name}' failed {count}x"));
    }
    line
}

fn inequality_campaigns() -> Outcome {
    let ops = PNorm::operator_supported();
    let mut runs = vec![
        campaign("Hoffman-Wielandt", BoundId::HoffmanWielandt, 10_000, 51, PNorm::TWO),
        campaign("polynomial Hoffman-Wielandt", BoundId::PolyHoffmanWielandt, 10_000, 52, PNorm::TWO),
        campaign("normal vs arbitrary", BoundId::NormalVsArbitrary, 10_000, 53, PNorm::TWO),
    ];
    for (i, p) in ops.into_iter().enumerate() {
        let s = 60 + i as u64 * 10;
        runs.push(campaign(&format!("Kahan p={p}"), BoundId::Kahan, 10_000, s, p));
        runs.push(campaign(&format!("polynomial Kahan p={p}"), BoundId::PolyKahan, 10_000, s + 1, p));
        runs.push(campaign(&format!("unitary 2mn-1 p={p}"), BoundId::Unitary2mn, 10_000, s + 2, p));
        runs.push(campaign(&format!("Elsner p={p}"), BoundId::Elsner, 10_000, s + 3, p));
        runs.push(campaign(&format!("bounded coefficients p={p}"), BoundId::BoundedCoefficients, 10_000, s + 4, p));
    }
    let mut bounded_fixed = campaign("bounded coefficients N=5", BoundId::BoundedCoefficients, 10_000, 95, PNorm::TWO);
    bounded_fixed.cfg.coefficient_bound = Some(5.0);
    runs.push(bounded_fixed);
    runs.push(campaign("nonmonic ball", BoundId::NonmonicBall, 10_000, 96, PNorm::ONE));
    runs.push(campaign("Wielandt scalar", BoundId::WielandtScalar, 1_000, 97, PNorm::TWO));
    runs.push(campaign("Wielandt polynomial", BoundId::WielandtPoly, 1_000, 98, PNorm::TWO));

    let mut failures = Vec::new();
    for run in &runs {
        let start = Instant::now();
        let rep = run_campaign(&run.cfg).map_err(|e| e.to_string())?;
        let s = &rep.summary;
        let elapsed = start.elapsed();
        let ok = s.violations == 0 && s.errors == 0 && s.hypotheses_unmet < s.trials && elapsed < Duration::from_secs(300);
        println!("    {} {:<32} {} ({elapsed:.2?})", if ok { "ok  " } else { "FAIL" }, run.label, summary_line(s));
        if let Some(first) = s.violating_trials.first() {
            let rec = rep.trials.iter().find(|r| r.trial_index == *first).unwrap();
            println!("         first violation: trial {first}, seed {}, report {}", rec.seed,
                serde_json::to_string(rec.report.as_ref().unwrap()).unwrap());
        }
        if !ok {
            failures.push(run.label.clone());
        }
    }

    let info = run_campaign(&CampaignConfig::new(BoundId::PolyUniversalConstant, 10_000, 99)).map_err(|e| e.to_string())?;
    println!("    info {:<32} {}", "universal constant (p=2)", summary_line(&info.summary));

    // equality witnesses
    let hw = check_hoffman_wielandt(
        &ComplexMatrix::zeros(2, 2),
        &ComplexMatrix::from_diag(&[c(1.0, 0.0), c(1.0, 0.0)]),
    )
    .map_err(|e| e.to_string())?;
    match hw.slack_ratio {
        Some(r) if (r - 1.0).abs() <= 1e-9 => {}
        other => failures.push(format!("Hoffman-Wielandt equality witness gave slack {other:?}")),
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let w = check_wielandt_scalar(
        &ComplexMatrix::from_diag(&[c(1.0, 0.0), c(3.0, 0.0)]),
        3.0,
        1.0,
        &[c(s, 0.0), c(s, 0.0)],
        &[c(s, 0.0), c(-s, 0.0)],
    )
    .map_err(|e| e.to_string())?;
    if !((w.lhs - 1.0).abs() <= 1e-10 && (w.rhs - 1.0).abs() <= 1e-10 && w.hypotheses_met) {
        failures.push(format!("Wielandt equality witness gave lhs {} rhs {}", w.lhs, w.rhs));
    }

    if failures.is_empty() {
        Ok(format!("{} campaigns, zero violations; equality witnesses reproduced", runs.len()))
    } else {
        Err(format!("failed: {}", failures.join("; ")))
    }
}

fn pokrzywa_values() -> Outcome {
    let start = Instant::now();
    if pokrzywa_gamma(1) != 0.0 {
        return Err("gamma(1) != 0".into());
    }
    if (pokrzywa_gamma(2) - 1.0).abs() > 1e-12 || (pokrzywa_gamma(4) - 2f64.sqrt()).abs() > 1e-12 {
        return Err("gamma(2) or gamma(4) off".into());
    }
    let mut min_margin = f64::INFINITY;
    for k in 1..=1024 {
        let margin = (k as f64).log2() + 0.038 - pokrzywa_gamma(k);
        if margin < 0.0 {
            return Err(format!("upper bound fails at k = {k}"));
        }
        if k > 1 {
            min_margin = min_margin.min(margin);
        }
    }
    within_time(start, Duration::from_secs(1), "gamma sweep")?;
    Ok(format!("upper bound holds on 1..=1024, smallest margin for k > 1 is {min_margin:.4}"))
}

fn determinant_perturbation() -> Outcome {
    let cfg = CampaignConfig::new(BoundId::DetPerturbation, 10_000, 7);
    let mut worst = 0.0f64;
    for t in 0..cfg.trials {
        let inst = trial_instance(&cfg, t).map_err(|e| e.to_string())?;
        for p in PNorm::operator_supported() {
            let r = evaluate(BoundId::DetPerturbation, &inst, p).map_err(|e| e.to_string())?;
            if !r.holds {
                return Err(format!("violation at trial {t}, p = {p}: lhs {} rhs {}", r.lhs, r.rhs));
            }
            worst = worst.max(r.slack_ratio.unwrap_or(0.0));
        }
    }
    Ok(format!("30000 evaluations, max slack {worst:.4}"))
}

fn sandwich() -> Outcome {
    let mut rng = SeededRng::new(8);
    for t in 0..10_000 {
        let k = rng.range_inclusive(1, 12);
        let (s, u) = (random_spectrum(&mut rng, k), random_spectrum(&mut rng, k));
        let d = optimal_matching_distance(&s, &u).map_err(|e| e.to_string())?.distance;
        let f = frobenius_matching_distance(&s, &u).map_err(|e| e.to_string())?.distance;
        if d > f + 1e-10 || f > (k as f64).sqrt() * d + 1e-10 {
            return Err(format!("trial {t}: dist {d}, dist_F {f}, k {k}"));
        }
    }
    Ok("10000 spectra".into())
}

fn determinism() -> Outcome {
    let mut checked = 0;
    for id in BoundId::ALL {
        let cfg = CampaignConfig::new(id, 300, 2024);
        let a = run_campaign_with(&cfg, Execution::Parallel).map_err(|e| e.to_string())?;
        let b = run_campaign_with(&cfg, Execution::Parallel).map_err(|e| e.to_string())?;
        let s = run_campaign_with(&cfg, Execution::Sequential).map_err(|e| e.to_string())?;
        let ja = serde_json::to_string(&a.summary).unwrap();
        let jb = serde_json::to_string(&b.summary).unwrap();
        let js = serde_json::to_string(&s.summary).unwrap();
        if ja != jb || ja != js {
            return Err(format!("{id}: summaries differ"));
        }
        let ta = serde_json::to_string(&a.trials).unwrap();
        if ta != serde_json::to_string(&s.trials).unwrap() {
            return Err(format!("{id}: trial records differ"));
        }
        checked += 1;
    }
    Ok(format!("{checked} bounds, parallel and sequential reruns byte-identical"))
}

fn eigensolver_sanity() -> Outcome {
    let mut worst_trace = 0.0f64;
    let mut worst_det = 0.0f64;
    let mut worst_recovery = 0.0f64;
    for n in 1..=20usize {
        for rep in 0..5u64 {
            let seed = derive_seed(n as u64, rep);
            let a = gen_arbitrary(n, seed, 1.0).map_err(|e| e.to_string())?;
            let eig = eigenvalues(&a).map_err(|e| e.to_string())?.eigenvalues;
            let tr: Complex64 = eig.iter().sum();
            let det: Complex64 = eig.iter().product();
            let scale_tr = a.diagonal().iter().map(|z| z.norm()).sum::<f64>().max(1.0);
            worst_trace = worst_trace.max((tr - a.trace()).norm() / scale_tr);
            let d = determinant(&a).map_err(|e| e.to_string())?;
            let scale_det = d.norm().max(eig.iter().map(|z| z.norm()).product::<f64>()).max(1e-300);
            worst_det = worst_det.max((det - d).norm() / scale_det);

            // U T U* with prescribed diagonal and a mild upper triangle
            let mut rng = SeededRng::new(seed ^ 0xABCD);
            let target: Vec<Complex64> = (0..n).map(|_| rng.complex_gaussian().scale(2.0)).collect();
            let mut t = ComplexMatrix::from_diag(&target);
            for i in 0..n {
                for j in i + 1..n {
                    t[(i, j)] = rng.complex_gaussian().scale(0.05);
                }
            }
            let u = gen_unitary(n, seed ^ 0x1234).map_err(|e| e.to_string())?;
            let m = &(&u * &t) * &u.conjugate_transpose();
            let got = Spectrum::new(eigenvalues(&m).map_err(|e| e.to_string())?.eigenvalues);
            let d = optimal_matching_distance(&got, &Spectrum::new(target)).map_err(|e| e.to_string())?.distance;
            worst_recovery = worst_recovery.max(d);
        }
    }
    if worst_trace > 1e-8 || worst_det > 1e-8 || worst_recovery > 1e-9 {
        return Err(format!(
            "trace rel {worst_trace:.2e}, det rel {worst_det:.2e}, recovery {worst_recovery:.2e}"
        ));
    }
    Ok(format!(
        "orders 1..=20: trace rel {worst_trace:.1e}, det rel {worst_det:.1e}, recovery {worst_recovery:.1e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("matching oracle equivalence", matching_oracle),
        ("linearization fidelity", linearization_fidelity),
        ("companion difference norms", companion_difference_norms),
        ("companion normality characterization", companion_normality),
        ("inequality campaigns", inequality_campaigns),
        ("Pokrzywa constants", pokrzywa_values),
        ("determinant perturbation", determinant_perturbation),
        ("sandwich property", sandwich),
        ("determinism", determinism),
        ("eigensolver sanity", eigensolver_sanity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({t:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({t:.2?})", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
