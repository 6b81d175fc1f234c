//! Eigenvalues of dense complex matrices: optional diagonal balancing, unitary
//! Hessenberg reduction, then single-shift complex QR with Wilkinson shifts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    /// Diagonal similarity scaling before the reduction.
    pub balance: bool,
    /// Relative deflation threshold on subdiagonal entries.
    pub deflation_tol: f64,
    /// Total iteration cap is `max_iter_per_order · n`.
    pub max_iter_per_order: usize,
    /// An exceptional shift is used after this many iterations without deflation.
    pub exceptional_every: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            balance: true,
            deflation_tol: 1e-14,
            max_iter_per_order: 60,
            exceptional_every: 15,
        }
    }
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<EigenResult> {
    eigenvalues_with(a, &EigenOptions::default())
}

pub fn eigenvalues_with(a: &ComplexMatrix, opts: &EigenOptions) -> Result<EigenResult> {
    let n = a.order()?;
    let mut h = a.clone();
    if opts.balance {
        balance(&mut h);
    }
    hessenberg(&mut h);
    hessenberg_qr(h, n, opts)
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Parlett–Reinsch balancing with radix-2 scale factors, so the similarity
/// is exact in floating point.
fn balance(a: &mut ComplexMatrix) {
    let n = a.rows();
    const RADIX: f64 = 2.0;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let norm_sq: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum();
        let tail_sq: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail_sq == 0.0 {
            continue;
        }
        let alpha = norm_sq.sqrt();
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·|x|·e1, reflector H = I - 2 v v* / (v* v)
        for i in 0..n {
            v[i] = if i > k { a[(i, k)] } else { ZERO };
        }
        v[k + 1] += phase * alpha;
        let vnorm_sq: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let beta = 2.0 / vnorm_sq;

        // Left: A <- H A on rows k+1.., all columns k..
        for j in k..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * a[(i, j)]).sum();
            let s = dot * beta;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s;
            }
        }
        // Right: A <- A H on all rows, columns k+1..
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum();
            let s = dot * beta;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j].conj();
            }
        }
        a[(k + 1, k)] = -phase * alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with real `c`, chosen so that
/// `G [a; b] = [r; 0]`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let bc = b * c;
    if bc == ZERO {
        return d;
    }
    let p = (a - d) * 0.5;
    let disc = (p * p + bc).sqrt();
    let den = if (p + disc).norm() >= (p - disc).norm() {
        p + disc
    } else {
        p - disc
    };
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

fn hessenberg_qr(mut h: ComplexMatrix, n: usize, opts: &EigenOptions) -> Result<EigenResult> {
    let mut eig = vec![ZERO; n];
    let max_iter = opts.max_iter_per_order * n.max(1);
    let mut total_iter = 0usize;
    let mut stalled = 0usize;
    let mut exceptional_count = 0u32;
    let mut hi = n - 1;

    let window_scale = |h: &ComplexMatrix, lo: usize, hi: usize| -> f64 {
        let mut s = 0.0f64;
        for i in lo..=hi {
            for j in i.saturating_sub(1).max(lo)..=hi {
                s = s.max(abs1(h[(i, j)]));
            }
        }
        s
    };

    loop {
        // find the start of the active unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h[(lo, lo - 1)]);
            let mut tst = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if tst == 0.0 {
                tst = window_scale(&h, lo.saturating_sub(1), hi);
            }
            if sub <= opts.deflation_tol * tst || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eig[hi] = h[(hi, hi)];
            stalled = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }

        if total_iter >= max_iter {
            for i in 0..=hi {
                eig[i] = h[(i, i)];
            }
            return Err(Error::ConvergenceFailure(Box::new(EigenResult {
                eigenvalues: eig,
                iterations: total_iter,
                converged: false,
            })));
        }
        total_iter += 1;
        stalled += 1;

        let shift = if stalled.is_multiple_of(opts.exceptional_every) {
            // deterministic pseudo-random phase keeps results reproducible
            exceptional_count += 1;
            let theta = 2.399_963_229_728_653 * exceptional_count as f64;
            h[(hi, hi)] + Complex64::from_polar(h[(hi, hi - 1)].norm() * 1.5, theta)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // implicit single-shift step: chase the bulge from lo to hi
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let col_start = if k > lo { k - 1 } else { lo };
            for j in col_start..=hi {
                let t1 = h[(k, j)];
                let t2 = h[(k + 1, j)];
                h[(k, j)] = t1 * c + s * t2;
                h[(k + 1, j)] = -s.conj() * t1 + t2 * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            let row_end = (k + 2).min(hi);
            for i in lo..=row_end {
                let t1 = h[(i, k)];
                let t2 = h[(i, k + 1)];
                h[(i, k)] = t1 * c + s.conj() * t2;
                h[(i, k + 1)] = -s * t1 + t2 * c;
            }
        }
    }

    Ok(EigenResult {
        eigenvalues: eig,
        iterations: total_iter,
        converged: true,
    })
}
