//! Spectral variation inequalities evaluated as `lhs ≤ rhs` pairs.
//!
//! Every checker returns a [`BoundReport`] carrying both sides, the named
//! constants that went into the right-hand side, and which hypotheses of the
//! inequality the inputs satisfy. Hypotheses are advisory: a report is always
//! produced, and [`BoundReport::enforce`] turns unmet hypotheses into an error
//! for callers that want strict behaviour.

mod matrix;
mod polynomial;
mod wielandt;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, ComplexMatrix};
use crate::matpoly::Spectrum;

pub use matrix::{check_det_perturbation, check_elsner, check_hoffman_wielandt, check_kahan, check_normal_vs_arbitrary};
pub use polynomial::{
    check_cor_2mn, check_nbounded_theorem, check_nonmonic_theorem, check_polynomial_bdm,
    check_polynomial_hoffman_wielandt, check_polynomial_kahan, nbounded_companion_bound, NonmonicConstants,
};
pub use wielandt::{check_wielandt_polynomial, check_wielandt_scalar};

/// Relative slack used by `holds`: `lhs ≤ rhs + 1e-9 · max(1, rhs)`.
pub const SLACK: f64 = 1e-9;

/// Tolerance for structural hypotheses (normal, Hermitian, unitary, ...).
pub const HYPOTHESIS_TOL: f64 = 1e-9;

#[inline]
pub fn within_slack(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + SLACK * rhs.max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundId {
    /// `dist_F(σ(A), σ(B)) ≤ |A − B|_F` for normal `A`, `B`.
    HoffmanWielandt,
    /// Frobenius distance of polynomial spectra vs. the coefficient tuple, normal companions.
    PolyHoffmanWielandt,
    /// `dist ≤ (2n − 1)‖A − B‖` for normal `A`, arbitrary `B`.
    NormalVsArbitrary,
    /// `dist ≤ (γ_n + 2)‖A − B‖_p` for Hermitian `A`.
    Kahan,
    /// `γ_k ≤ log₂ k + 0.038`.
    GammaBounds,
    /// Operator-norm chain for normal companions; the universal constant is reported empirically.
    PolyUniversalConstant,
    /// `dist ≤ (2mn − 1)‖A_0 − Ā_0‖_p` for `I z^m + A_0` with unitary `A_0`.
    #[serde(rename = "unitary-2mn")]
    Unitary2mn,
    /// `(γ_{mn} + 2)` bound for a Hermitian companion.
    PolyKahan,
    /// `dist ≤ c(k) k^{1/k} (2M)^{1−1/k} ‖A − B‖^{1/k}`.
    Elsner,
    /// Hölder-type bound for monic polynomials with coefficient tuples bounded by `N`.
    BoundedCoefficients,
    /// `|det A − det B| ≤ n max(‖A‖, ‖B‖)^{n−1} ‖A − B‖`.
    DetPerturbation,
    /// Hölder-type bound for non-monic polynomials near a fixed center.
    NonmonicBall,
    /// `|x*Ay|² ≤ ((a−b)/(a+b))² (x*Ax)(y*Ay)` for `bI ≤ A ≤ aI`.
    WielandtScalar,
    /// Matrix polynomial version of the scalar Wielandt inequality.
    WielandtPoly,
}

impl BoundId {
    pub const ALL: [BoundId; 14] = [
        BoundId::HoffmanWielandt,
        BoundId::PolyHoffmanWielandt,
        BoundId::NormalVsArbitrary,
        BoundId::Kahan,
        BoundId::GammaBounds,
        BoundId::PolyUniversalConstant,
        BoundId::Unitary2mn,
        BoundId::PolyKahan,
        BoundId::Elsner,
        BoundId::BoundedCoefficients,
        BoundId::DetPerturbation,
        BoundId::NonmonicBall,
        BoundId::WielandtScalar,
        BoundId::WielandtPoly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::HoffmanWielandt => "hoffman-wielandt",
            BoundId::PolyHoffmanWielandt => "poly-hoffman-wielandt",
            BoundId::NormalVsArbitrary => "normal-vs-arbitrary",
            BoundId::Kahan => "kahan",
            BoundId::GammaBounds => "gamma-bounds",
            BoundId::PolyUniversalConstant => "poly-universal-constant",
            BoundId::Unitary2mn => "unitary-2mn",
            BoundId::PolyKahan => "poly-kahan",
            BoundId::Elsner => "elsner",
            BoundId::BoundedCoefficients => "bounded-coefficients",
            BoundId::DetPerturbation => "det-perturbation",
            BoundId::NonmonicBall => "nonmonic-ball",
            BoundId::WielandtScalar => "wielandt-scalar",
            BoundId::WielandtPoly => "wielandt-poly",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = BoundId::ALL.iter().map(|b| b.as_str()).collect();
                Error::InvalidInput(format!("unknown bound id {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// A secondary inequality evaluated alongside the main one. Binding
/// sub-checks participate in [`BoundReport::holds`]; informational ones do not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub binding: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub lhs: f64,
    pub rhs: f64,
    /// Main inequality within slack, and every binding sub-check.
    pub holds: bool,
    /// `lhs / rhs`; `0` when both sides vanish; absent when hypotheses fail
    /// or when `rhs = 0 < lhs`.
    pub slack_ratio: Option<f64>,
    /// `lhs = rhs = 0`, where a strict inequality cannot be tested.
    pub degenerate: bool,
    pub constants: BTreeMap<String, f64>,
    pub hypotheses_met: bool,
    pub failed_hypotheses: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_checks: Vec<SubCheck>,
}

impl BoundReport {
    /// A violation: hypotheses hold but the inequality does not.
    pub fn is_violation(&self) -> bool {
        self.hypotheses_met && !self.holds
    }

    /// Strict mode: unmet hypotheses become [`Error::HypothesisViolation`].
    pub fn enforce(self) -> Result<Self> {
        if self.hypotheses_met {
            Ok(self)
        } else {
            Err(Error::HypothesisViolation(self.failed_hypotheses))
        }
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }
}

pub(crate) struct ReportBuilder {
    id: BoundId,
    constants: BTreeMap<String, f64>,
    failed: Vec<String>,
    sub_checks: Vec<SubCheck>,
}

impl ReportBuilder {
    pub fn new(id: BoundId) -> Self {
        Self {
            id,
            constants: BTreeMap::new(),
            failed: Vec::new(),
            sub_checks: Vec::new(),
        }
    }

    pub fn constant(&mut self, name: &str, value: f64) -> &mut Self {
        self.constants.insert(name.to_owned(), value);
        self
    }

    pub fn hypothesis(&mut self, name: impl Into<String>, ok: bool) -> &mut Self {
        if !ok {
            self.failed.push(name.into());
        }
        self
    }

    pub fn sub_check(&mut self, name: &str, lhs: f64, rhs: f64, binding: bool) -> &mut Self {
        self.sub_checks.push(SubCheck {
            name: name.to_owned(),
            lhs,
            rhs,
            holds: within_slack(lhs, rhs),
            binding,
        });
        self
    }

    pub fn finish(&mut self, lhs: f64, rhs: f64) -> BoundReport {
        let hypotheses_met = self.failed.is_empty();
        let subs_hold = self.sub_checks.iter().all(|s| !s.binding || s.holds);
        let degenerate = lhs == 0.0 && rhs == 0.0;
        let slack_ratio = if !hypotheses_met {
            None
        } else if rhs > 0.0 {
            Some(lhs / rhs)
        } else if lhs == 0.0 {
            Some(0.0)
        } else {
            None
        };
        BoundReport {
            bound_id: self.id,
            lhs,
            rhs,
            holds: within_slack(lhs, rhs) && subs_hold,
            slack_ratio,
            degenerate,
            constants: std::mem::take(&mut self.constants),
            hypotheses_met,
            failed_hypotheses: std::mem::take(&mut self.failed),
            sub_checks: std::mem::take(&mut self.sub_checks),
        }
    }
}

/// Pokrzywa's constant `γ_k = (2/k) Σ_{j=1}^{⌊k/2⌋} cot((2j − 1)π / 2k)`.
pub fn pokrzywa_gamma(k: usize) -> f64 {
    assert!(k >= 1, "gamma needs k >= 1");
    let kf = k as f64;
    let sum: f64 = (1..=k / 2)
        .map(|j| 1.0 / ((2 * j - 1) as f64 * std::f64::consts::PI / (2.0 * kf)).tan())
        .sum();
    2.0 * sum / kf
}

/// `γ_k ≤ log₂ k + 0.038`. The lower estimate `(2/π) ln k − O(1)` has an
/// unspecified constant, so `γ_k − (2/π) ln k` is only reported.
pub fn gamma_bounds_check(k: usize) -> BoundReport {
    let gamma = pokrzywa_gamma(k);
    let upper = (k as f64).log2() + 0.038;
    let mut b = ReportBuilder::new(BoundId::GammaBounds);
    b.constant("k", k as f64)
        .constant("gamma", gamma)
        .constant("lower_offset", gamma - std::f64::consts::FRAC_2_PI * (k as f64).ln());
    b.finish(gamma, upper)
}

/// `c(k) = k` for odd `k`, `k − 1` for even `k`.
pub fn elsner_constant(k: usize) -> f64 {
    assert!(k >= 1, "Elsner constant needs k >= 1");
    if k % 2 == 1 {
        k as f64
    } else {
        (k - 1) as f64
    }
}

pub(crate) fn matrix_spectrum(a: &ComplexMatrix) -> Result<Spectrum> {
    Ok(Spectrum::new(eigenvalues(a)?.eigenvalues))
}

pub(crate) fn same_order(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<usize> {
    let (na, nb) = (a.order()?, b.order()?);
    if na != nb {
        return Err(Error::SizeMismatch(na, nb));
    }
    Ok(na)
}
