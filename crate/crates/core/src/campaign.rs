//! Seeded randomized campaigns: draw many instances for one bound, evaluate
//! them independently and summarize the slack.
//!
//! Trial `t` of a campaign with seed `s` uses seed `derive_seed(s, t)` and
//! nothing else, so any single trial can be regenerated in isolation and the
//! result does not depend on how trials are scheduled.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    check_cor_2mn, check_det_perturbation, check_elsner, check_hoffman_wielandt, check_kahan,
    check_nbounded_theorem, check_nonmonic_theorem, check_normal_vs_arbitrary, check_polynomial_bdm,
    check_polynomial_hoffman_wielandt, check_polynomial_kahan, check_wielandt_polynomial, check_wielandt_scalar,
    gamma_bounds_check, BoundId, BoundReport,
};
use crate::error::{Error, Result};
use crate::genlab::{
    derive_seed, gen_arbitrary, gen_hermitian, gen_hermitian_in_interval, gen_monic_arbitrary,
    gen_monic_hermitian_companion, gen_monic_normal_companion, gen_nonmonic_center, gen_nonmonic_in_ball, gen_normal,
    gen_orthonormal_pair, generate, Family, GenSpec, Generated, SeededRng,
};
use crate::linalg::{c64, ComplexMatrix, PNorm};
use crate::matpoly::{tuple_matrix_p_norm, MatrixPolynomial};

/// Per-trial records are moved out of the main report above this many trials.
pub const SIDECAR_THRESHOLD: u64 = 100_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

fn default_p() -> PNorm {
    PNorm::TWO
}
fn default_max_mn() -> usize {
    12
}
fn default_scale() -> f64 {
    1.0
}
fn default_lambda_modulus() -> f64 {
    1.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub bound_id: BoundId,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_p")]
    pub p: PNorm,
    #[serde(default)]
    pub strict_hypotheses: bool,
    /// Largest matrix order; each bound has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    /// Largest polynomial degree; defaults to 4.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_m: Option<usize>,
    /// Cap on `m · n` for polynomial instances.
    #[serde(default = "default_max_mn")]
    pub max_mn: usize,
    /// Scale of Gaussian entries in arbitrary and center families.
    #[serde(default = "default_scale")]
    pub scale: f64,
    /// `N` for the bounded-coefficient bound. Without it, `N` is the larger
    /// of the two tuple norms of each instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_bound: Option<f64>,
    /// Fixed ball radius as a fraction of the admissible one; uniform on
    /// `(0, 1)` per polynomial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_fraction: Option<f64>,
    /// `(a, b)` for the Wielandt bounds; random when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
    #[serde(default = "default_lambda_modulus")]
    pub lambda_modulus: f64,
    /// Generator templates, one per input. Their seeds are replaced by
    /// `derive_seed(trial_seed, i + 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_specs: Option<Vec<GenSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl CampaignConfig {
    pub fn new(bound_id: BoundId, trials: u64, seed: u64) -> Self {
        Self {
            bound_id,
            trials,
            seed,
            p: default_p(),
            strict_hypotheses: false,
            max_n: None,
            max_m: None,
            max_mn: default_max_mn(),
            scale: default_scale(),
            coefficient_bound: None,
            radius_fraction: None,
            interval: None,
            lambda_modulus: default_lambda_modulus(),
            gen_specs: None,
            output_path: None,
            format: OutputFormat::Json,
        }
    }

    pub fn with_p(mut self, p: PNorm) -> Self {
        self.p = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.max_mn == 0 || self.max_n == Some(0) || self.max_m == Some(0) {
            return Err(Error::InvalidInput("size caps must be positive".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidInput(format!("scale must be positive, got {}", self.scale)));
        }
        if let Some(rf) = self.radius_fraction {
            if !(0.0..1.0).contains(&rf) {
                return Err(Error::InvalidInput(format!("radius_fraction must lie in [0, 1), got {rf}")));
            }
        }
        if let Some((a, b)) = self.interval {
            if !(b > 0.0 && b <= a) {
                return Err(Error::BadInterval { a, b });
            }
        }
        if let Some(nb) = self.coefficient_bound {
            if !(nb.is_finite() && nb > 0.0) {
                return Err(Error::InvalidInput(format!("coefficient_bound must be positive, got {nb}")));
            }
        }
        if let Some(specs) = &self.gen_specs {
            let want = match self.bound_id {
                BoundId::GammaBounds => 0,
                BoundId::NonmonicBall => 3,
                _ => 2,
            };
            if specs.len() != want {
                return Err(Error::InvalidInput(format!(
                    "{} takes {want} generator specs, got {}",
                    self.bound_id,
                    specs.len()
                )));
            }
        }
        Ok(())
    }

    fn max_n_or(&self, default: usize) -> usize {
        self.max_n.unwrap_or(default)
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        derive_seed(self.seed, trial)
    }
}

/// Every input a bound checker needs, in serializable form for replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    MatrixPair {
        a: ComplexMatrix,
        b: ComplexMatrix,
    },
    PolynomialPair {
        p: MatrixPolynomial,
        q: MatrixPolynomial,
    },
    BoundedPair {
        p: MatrixPolynomial,
        q: MatrixPolynomial,
        bound: f64,
    },
    NonmonicTriple {
        p: MatrixPolynomial,
        q: MatrixPolynomial,
        center: MatrixPolynomial,
    },
    Order {
        k: usize,
    },
    WielandtScalar {
        matrix: ComplexMatrix,
        a: f64,
        b: f64,
        #[serde(with = "crate::serde_pairs")]
        x: Vec<Complex64>,
        #[serde(with = "crate::serde_pairs")]
        y: Vec<Complex64>,
    },
    WielandtPolynomial {
        p: MatrixPolynomial,
        a: f64,
        b: f64,
        #[serde(with = "crate::serde_pairs")]
        x: Vec<Complex64>,
        #[serde(with = "crate::serde_pairs")]
        y: Vec<Complex64>,
        lambda: Complex64,
    },
}

fn wrong_instance(bound: BoundId) -> Error {
    Error::InvalidInput(format!("instance kind does not fit bound {bound}"))
}

/// Run one bound on one instance.
pub fn evaluate(bound: BoundId, instance: &Instance, p: PNorm) -> Result<BoundReport> {
    use BoundId as B;
    use Instance as I;
    match (bound, instance) {
        (B::HoffmanWielandt, I::MatrixPair { a, b }) => check_hoffman_wielandt(a, b),
        (B::NormalVsArbitrary, I::MatrixPair { a, b }) => check_normal_vs_arbitrary(a, b),
        (B::Kahan, I::MatrixPair { a, b }) => check_kahan(a, b, p),
        (B::Elsner, I::MatrixPair { a, b }) => check_elsner(a, b, p),
        (B::DetPerturbation, I::MatrixPair { a, b }) => check_det_perturbation(a, b, p),
        (B::PolyHoffmanWielandt, I::PolynomialPair { p: pp, q }) => check_polynomial_hoffman_wielandt(pp, q),
        (B::PolyUniversalConstant, I::PolynomialPair { p: pp, q }) => check_polynomial_bdm(pp, q, p),
        (B::Unitary2mn, I::PolynomialPair { p: pp, q }) => check_cor_2mn(pp, q, p),
        (B::PolyKahan, I::PolynomialPair { p: pp, q }) => check_polynomial_kahan(pp, q, p),
        (B::BoundedCoefficients, I::BoundedPair { p: pp, q, bound }) => check_nbounded_theorem(pp, q, p, *bound),
        (B::NonmonicBall, I::NonmonicTriple { p: pp, q, center }) => check_nonmonic_theorem(pp, q, center),
        (B::GammaBounds, I::Order { k }) => {
            if *k == 0 {
                return Err(Error::InvalidInput("k must be at least 1".into()));
            }
            Ok(gamma_bounds_check(*k))
        }
        (B::WielandtScalar, I::WielandtScalar { matrix, a, b, x, y }) => check_wielandt_scalar(matrix, *a, *b, x, y),
        (B::WielandtPoly, I::WielandtPolynomial { p: pp, a, b, x, y, lambda }) => {
            check_wielandt_polynomial(pp, *a, *b, x, y, *lambda)
        }
        (bound, _) => Err(wrong_instance(bound)),
    }
}

/// Sampler for one trial: sizes and parameters from `rng`, matrices from
/// numbered sub-streams of the trial seed.
struct TrialGen<'a> {
    cfg: &'a CampaignConfig,
    seed: u64,
    rng: SeededRng,
    stream: u64,
}

impl<'a> TrialGen<'a> {
    fn new(cfg: &'a CampaignConfig, seed: u64) -> Self {
        Self {
            cfg,
            seed,
            rng: SeededRng::new(derive_seed(seed, u64::MAX)),
            stream: 0,
        }
    }

    fn next_seed(&mut self) -> u64 {
        self.stream += 1;
        derive_seed(self.seed, self.stream)
    }

    fn order(&mut self, lo: usize, default_hi: usize) -> usize {
        let hi = self.cfg.max_n_or(default_hi).min(self.cfg.max_mn).max(lo);
        self.rng.range_inclusive(lo, hi)
    }

    /// `(n, m)` with `m · n ≤ max_mn`.
    fn shape(&mut self, n_lo: usize, default_n: usize, m_cap: usize) -> (usize, usize) {
        let n = self.order(n_lo, default_n);
        let m_hi = self.cfg.max_m.unwrap_or(4).min(m_cap).min(self.cfg.max_mn / n).max(1);
        (n, self.rng.range_inclusive(1, m_hi))
    }

    fn radius_fraction(&mut self) -> f64 {
        self.cfg.radius_fraction.unwrap_or_else(|| self.rng.uniform())
    }

    fn interval(&mut self) -> (f64, f64) {
        self.cfg.interval.unwrap_or_else(|| {
            let b = self.rng.uniform_in(0.1, 2.0);
            (b * self.rng.uniform_in(1.0, 10.0), b)
        })
    }
}

fn bounded_rescale(p: MatrixPolynomial, pn: PNorm, bound: f64, u: f64) -> Result<MatrixPolynomial> {
    let norm = tuple_matrix_p_norm(p.lower_coeffs(), pn)?;
    if norm == 0.0 {
        return Ok(p);
    }
    let f = c64(u * bound / norm, 0.0);
    MatrixPolynomial::monic(p.lower_coeffs().iter().map(|a| a.scale(f)).collect())
}

fn bounded_pair(cfg: &CampaignConfig, g: &mut TrialGen, p: MatrixPolynomial, q: MatrixPolynomial) -> Result<Instance> {
    let (p, q, bound) = match cfg.coefficient_bound {
        Some(bound) => {
            let (u, v) = (g.rng.uniform_in(0.05, 1.0), g.rng.uniform_in(0.05, 1.0));
            (bounded_rescale(p, cfg.p, bound, u)?, bounded_rescale(q, cfg.p, bound, v)?, bound)
        }
        None => {
            let bound = tuple_matrix_p_norm(p.lower_coeffs(), cfg.p)?.max(tuple_matrix_p_norm(q.lower_coeffs(), cfg.p)?);
            (p, q, bound)
        }
    };
    Ok(Instance::BoundedPair { p, q, bound })
}

fn default_instance(cfg: &CampaignConfig, seed: u64) -> Result<Instance> {
    use BoundId as B;
    let mut g = TrialGen::new(cfg, seed);
    let scale = cfg.scale;
    Ok(match cfg.bound_id {
        B::HoffmanWielandt => {
            let n = g.order(1, 12);
            Instance::MatrixPair { a: gen_normal(n, g.next_seed())?, b: gen_normal(n, g.next_seed())? }
        }
        B::NormalVsArbitrary => {
            let n = g.order(1, 8);
            Instance::MatrixPair { a: gen_normal(n, g.next_seed())?, b: gen_arbitrary(n, g.next_seed(), scale)? }
        }
        B::Kahan => {
            let n = g.order(1, 12);
            Instance::MatrixPair { a: gen_hermitian(n, g.next_seed())?, b: gen_arbitrary(n, g.next_seed(), scale)? }
        }
        B::Elsner => {
            let n = g.order(1, 10);
            Instance::MatrixPair { a: gen_arbitrary(n, g.next_seed(), scale)?, b: gen_arbitrary(n, g.next_seed(), scale)? }
        }
        B::DetPerturbation => {
            let n = g.order(1, 8);
            Instance::MatrixPair { a: gen_arbitrary(n, g.next_seed(), scale)?, b: gen_arbitrary(n, g.next_seed(), scale)? }
        }
        B::PolyHoffmanWielandt | B::PolyUniversalConstant | B::Unitary2mn => {
            let (n, m) = g.shape(1, 4, usize::MAX);
            Instance::PolynomialPair {
                p: gen_monic_normal_companion(n, m, g.next_seed())?,
                q: gen_monic_normal_companion(n, m, g.next_seed())?,
            }
        }
        B::PolyKahan => {
            let (n, m) = g.shape(1, 6, 2);
            Instance::PolynomialPair {
                p: gen_monic_hermitian_companion(n, m, g.next_seed())?,
                q: gen_monic_arbitrary(n, m, g.next_seed(), scale)?,
            }
        }
        B::BoundedCoefficients => {
            let (n, m) = g.shape(1, 4, usize::MAX);
            let p = gen_monic_arbitrary(n, m, g.next_seed(), scale)?;
            let q = gen_monic_arbitrary(n, m, g.next_seed(), scale)?;
            bounded_pair(cfg, &mut g, p, q)?
        }
        B::NonmonicBall => {
            let (n, m) = g.shape(1, 4, usize::MAX);
            let center = gen_nonmonic_center(n, m, g.next_seed(), scale)?;
            let (rp, rq) = (g.radius_fraction(), g.radius_fraction());
            let p = gen_nonmonic_in_ball(&center, rp, g.next_seed())?;
            let q = gen_nonmonic_in_ball(&center, rq, g.next_seed())?;
            Instance::NonmonicTriple { p, q, center }
        }
        B::GammaBounds => Instance::Order { k: g.rng.range_inclusive(1, 1024) },
        B::WielandtScalar => {
            let n = g.order(2, 12);
            let (a, b) = g.interval();
            let matrix = gen_hermitian_in_interval(n, a, b, g.next_seed())?;
            let (x, y) = gen_orthonormal_pair(n, g.next_seed())?;
            Instance::WielandtScalar { matrix, a, b, x, y }
        }
        B::WielandtPoly => {
            let (n, m) = g.shape(2, 6, usize::MAX);
            let (a, b) = g.interval();
            let coeffs = (0..=m)
                .map(|_| gen_hermitian_in_interval(n, a, b, g.next_seed()))
                .collect::<Result<Vec<_>>>()?;
            let (x, y) = gen_orthonormal_pair(n, g.next_seed())?;
            let lambda = Complex64::from_polar(cfg.lambda_modulus, g.rng.uniform_in(0.0, std::f64::consts::TAU));
            Instance::WielandtPolynomial { p: MatrixPolynomial::new(coeffs)?, a, b, x, y, lambda }
        }
    })
}

fn reseeded(spec: &GenSpec, seed: u64) -> GenSpec {
    GenSpec { seed, ..spec.clone() }
}

fn as_matrix(g: Generated) -> Result<ComplexMatrix> {
    match g {
        Generated::Matrix(m) => Ok(m),
        _ => Err(Error::InvalidInput("generator spec must produce a matrix".into())),
    }
}

fn as_polynomial(g: Generated) -> Result<MatrixPolynomial> {
    match g {
        Generated::Polynomial(p) => Ok(p),
        _ => Err(Error::InvalidInput("generator spec must produce a polynomial".into())),
    }
}

fn as_pair(g: Generated) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    match g {
        Generated::VectorPair { x, y } => Ok((x, y)),
        _ => Err(Error::InvalidInput("generator spec must produce an orthonormal pair".into())),
    }
}

fn interval_of(spec: &GenSpec, g: &mut TrialGen) -> (f64, f64) {
    match spec.family {
        Family::HermitianInInterval { a, b } => (a, b),
        _ => g.interval(),
    }
}

fn spec_instance(cfg: &CampaignConfig, specs: &[GenSpec], seed: u64) -> Result<Instance> {
    use BoundId as B;
    let mut g = TrialGen::new(cfg, seed);
    let seeds: Vec<u64> = (0..specs.len()).map(|i| derive_seed(seed, i as u64 + 1)).collect();
    let gen = |i: usize| generate(&reseeded(&specs[i], seeds[i]));
    Ok(match cfg.bound_id {
        B::HoffmanWielandt | B::NormalVsArbitrary | B::Kahan | B::Elsner | B::DetPerturbation => {
            Instance::MatrixPair { a: as_matrix(gen(0)?)?, b: as_matrix(gen(1)?)? }
        }
        B::PolyHoffmanWielandt | B::PolyUniversalConstant | B::Unitary2mn | B::PolyKahan => {
            Instance::PolynomialPair { p: as_polynomial(gen(0)?)?, q: as_polynomial(gen(1)?)? }
        }
        B::BoundedCoefficients => {
            let (p, q) = (as_polynomial(gen(0)?)?, as_polynomial(gen(1)?)?);
            bounded_pair(cfg, &mut g, p, q)?
        }
        B::NonmonicBall => {
            let center = as_polynomial(gen(0)?)?;
            let ball = |i: usize| -> Result<MatrixPolynomial> {
                match specs[i].family {
                    Family::NonmonicBall { radius_fraction } => gen_nonmonic_in_ball(&center, radius_fraction, seeds[i]),
                    _ => Err(Error::InvalidInput("inputs 2 and 3 must use the nonmonic-ball family".into())),
                }
            };
            let (p, q) = (ball(1)?, ball(2)?);
            Instance::NonmonicTriple { p, q, center }
        }
        B::GammaBounds => Instance::Order { k: g.rng.range_inclusive(1, 1024) },
        B::WielandtScalar => {
            let (a, b) = interval_of(&specs[0], &mut g);
            let (x, y) = as_pair(gen(1)?)?;
            Instance::WielandtScalar { matrix: as_matrix(gen(0)?)?, a, b, x, y }
        }
        B::WielandtPoly => {
            let (a, b) = interval_of(&specs[0], &mut g);
            let m = specs[0].m.unwrap_or(1);
            let coeffs = (0..=m)
                .map(|i| as_matrix(generate(&reseeded(&specs[0], derive_seed(seeds[0], i as u64)))?))
                .collect::<Result<Vec<_>>>()?;
            let (x, y) = as_pair(gen(1)?)?;
            let lambda = Complex64::from_polar(cfg.lambda_modulus, g.rng.uniform_in(0.0, std::f64::consts::TAU));
            Instance::WielandtPolynomial { p: MatrixPolynomial::new(coeffs)?, a, b, x, y, lambda }
        }
    })
}

/// The instance trial `index` of `cfg` evaluates.
pub fn trial_instance(cfg: &CampaignConfig, index: u64) -> Result<Instance> {
    let seed = cfg.trial_seed(index);
    match &cfg.gen_specs {
        Some(specs) => spec_instance(cfg, specs, seed),
        None => default_instance(cfg, seed),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Serialized inputs, kept for violations and errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
}

impl TrialRecord {
    pub fn is_violation(&self) -> bool {
        self.report.as_ref().is_some_and(BoundReport::is_violation)
    }
}

/// Evaluate a single trial.
pub fn run_trial(cfg: &CampaignConfig, index: u64) -> TrialRecord {
    let seed = cfg.trial_seed(index);
    let instance = match trial_instance(cfg, index) {
        Ok(i) => i,
        Err(e) => {
            return TrialRecord { trial_index: index, seed, report: None, error: Some(e.to_string()), instance: None }
        }
    };
    match evaluate(cfg.bound_id, &instance, cfg.p) {
        Ok(report) => {
            let keep = report.is_violation();
            TrialRecord { trial_index: index, seed, report: Some(report), error: None, instance: keep.then_some(instance) }
        }
        Err(e) => TrialRecord { trial_index: index, seed, report: None, error: Some(e.to_string()), instance: Some(instance) },
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub bound_id: Option<BoundId>,
    pub trials: u64,
    pub violations: u64,
    pub errors: u64,
    pub hypotheses_unmet: u64,
    pub degenerate: u64,
    pub max_slack_ratio: Option<f64>,
    pub mean_slack_ratio: Option<f64>,
    pub argmax_trial_index: Option<u64>,
    pub argmax_trial_seed: Option<u64>,
    /// Largest `dist / ‖A − Ā‖_p` seen, for the bound whose constant is unknown.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_empirical_constant: Option<f64>,
    /// Failed sub-checks by name, counted over trials whose hypotheses hold.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sub_check_failures: BTreeMap<String, u64>,
    /// First few violating trials, by index.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violating_trials: Vec<u64>,
}

const LISTED_VIOLATIONS: usize = 20;

pub fn summarize(bound: BoundId, records: &[TrialRecord]) -> CampaignSummary {
    let mut s = CampaignSummary { bound_id: Some(bound), trials: records.len() as u64, ..Default::default() };
    let (mut sum, mut count) = (0.0, 0u64);
    for rec in records {
        let Some(r) = &rec.report else {
            s.errors += 1;
            continue;
        };
        if !r.hypotheses_met {
            s.hypotheses_unmet += 1;
            continue;
        }
        if r.degenerate {
            s.degenerate += 1;
        }
        if r.is_violation() {
            s.violations += 1;
            if s.violating_trials.len() < LISTED_VIOLATIONS {
                s.violating_trials.push(rec.trial_index);
            }
        }
        for sc in r.sub_checks.iter().filter(|sc| !sc.holds) {
            *s.sub_check_failures.entry(sc.name.clone()).or_default() += 1;
        }
        if let Some(c) = r.constant("empirical_constant") {
            s.max_empirical_constant = Some(s.max_empirical_constant.map_or(c, |m: f64| m.max(c)));
        }
        match r.slack_ratio {
            Some(x) => {
                sum += x;
                count += 1;
                if s.max_slack_ratio.is_none_or(|m| x > m) {
                    s.max_slack_ratio = Some(x);
                    s.argmax_trial_index = Some(rec.trial_index);
                    s.argmax_trial_seed = Some(rec.seed);
                }
            }
            None => {
                // rhs = 0 < lhs: unbounded ratio, already counted as a violation
                if s.max_slack_ratio.is_none_or(|m| m.is_finite()) {
                    s.argmax_trial_index = Some(rec.trial_index);
                    s.argmax_trial_seed = Some(rec.seed);
                }
            }
        }
    }
    if count > 0 {
        s.mean_slack_ratio = Some(sum / count as f64);
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon data parallelism; sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub summary: CampaignSummary,
    /// Per-trial records in trial order. Empty when elided to a sidecar.
    pub trials: Vec<TrialRecord>,
    pub trials_elided: bool,
    pub wall_time_secs: f64,
}

impl CampaignReport {
    pub fn violations(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(|r| r.is_violation())
    }
}

fn run_records(cfg: &CampaignConfig, exec: Execution) -> Vec<TrialRecord> {
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect()
        }
        _ => (0..cfg.trials).map(|t| run_trial(cfg, t)).collect(),
    }
}

/// Run every trial and keep all records; callers decide about eliding them.
pub fn run_campaign_with(cfg: &CampaignConfig, exec: Execution) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = std::time::Instant::now();
    let trials = run_records(cfg, exec);
    let summary = summarize(cfg.bound_id, &trials);
    Ok(CampaignReport {
        config: cfg.clone(),
        summary,
        trials,
        trials_elided: false,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with(cfg, Execution::default())
}
