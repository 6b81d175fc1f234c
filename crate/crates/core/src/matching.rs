//! Distances between two spectra of equal size.
//!
//! * optimal matching distance: `min_θ max_j |α_j − β_θ(j)|`, solved as a
//!   bottleneck assignment (threshold search + Hopcroft–Karp);
//! * Frobenius distance: `min_θ (Σ_j |α_j − β_θ(j)|²)^{1/2}`, solved as a
//!   min-cost assignment (shortest augmenting paths with potentials).
//!
//! Both solvers return the permutation as a certificate; the reported
//! distance is always recomputed from it.

use std::collections::VecDeque;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matpoly::Spectrum;

/// Largest size accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingMethod {
    Bottleneck,
    SumOfSquares,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingResult {
    pub distance: f64,
    /// `permutation[i] = j` pairs `S_i` with `T_j`.
    pub permutation: Vec<usize>,
    pub method: MatchingMethod,
}

#[inline]
fn gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

fn check_sizes(s: &Spectrum, t: &Spectrum) -> Result<usize> {
    if s.len() != t.len() {
        return Err(Error::SizeMismatch(s.len(), t.len()));
    }
    if s.is_empty() {
        return Err(Error::InvalidInput("spectra must be nonempty".into()));
    }
    Ok(s.len())
}

/// Objective value of a given pairing.
pub fn matching_objective(s: &Spectrum, t: &Spectrum, perm: &[usize], method: MatchingMethod) -> f64 {
    let (a, b) = (s.values(), t.values());
    match method {
        MatchingMethod::Bottleneck => perm
            .iter()
            .enumerate()
            .map(|(i, &j)| gap(a[i], b[j]))
            .fold(0.0, f64::max),
        MatchingMethod::SumOfSquares => perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (a[i] - b[j]).norm_sqr())
            .sum::<f64>()
            .sqrt(),
    }
}

pub fn optimal_matching_distance(s: &Spectrum, t: &Spectrum) -> Result<MatchingResult> {
    let k = check_sizes(s, t)?;
    let (a, b) = (s.values(), t.values());
    let cost: Vec<f64> = (0..k * k).map(|idx| gap(a[idx / k], b[idx % k])).collect();

    let mut thresholds = cost.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    // smallest threshold admitting a perfect matching; the largest one always does
    let (mut lo, mut hi) = (0usize, thresholds.len() - 1);
    let mut best = perfect_matching(k, &cost, thresholds[hi]).expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match perfect_matching(k, &cost, thresholds[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let distance = matching_objective(s, t, &best, MatchingMethod::Bottleneck);
    Ok(MatchingResult {
        distance,
        permutation: best,
        method: MatchingMethod::Bottleneck,
    })
}

/// Hopcroft–Karp on the bipartite graph `{(i, j) : cost[i][j] <= threshold}`.
/// Returns the row-to-column assignment when it is perfect.
fn perfect_matching(k: usize, cost: &[f64], threshold: f64) -> Option<Vec<usize>> {
    const NIL: usize = usize::MAX;
    let adj: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..k).filter(|&j| cost[i * k + j] <= threshold).collect())
        .collect();
    if adj.iter().any(Vec::is_empty) {
        return None;
    }
    let mut match_row = vec![NIL; k];
    let mut match_col = vec![NIL; k];
    let mut dist = vec![0usize; k];
    let mut matched = 0;

    loop {
        // BFS layering from free rows
        let mut queue = VecDeque::new();
        let mut found = false;
        for i in 0..k {
            if match_row[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let r = match_col[j];
                if r == NIL {
                    found = true;
                } else if dist[r] == usize::MAX {
                    dist[r] = dist[i] + 1;
                    queue.push_back(r);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..k {
            if match_row[i] == NIL && augment(i, &adj, &mut match_row, &mut match_col, &mut dist) {
                matched += 1;
            }
        }
    }
    (matched == k).then_some(match_row)
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    match_row: &mut [usize],
    match_col: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &j in &adj[i] {
        let r = match_col[j];
        let ok = r == usize::MAX
            || (dist[r] == dist[i].wrapping_add(1) && augment(r, adj, match_row, match_col, dist));
        if ok {
            match_row[i] = j;
            match_col[j] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}

pub fn frobenius_matching_distance(s: &Spectrum, t: &Spectrum) -> Result<MatchingResult> {
    let k = check_sizes(s, t)?;
    let (a, b) = (s.values(), t.values());
    let cost: Vec<f64> = (0..k * k).map(|idx| (a[idx / k] - b[idx % k]).norm_sqr()).collect();
    let permutation = min_cost_assignment(k, &cost);
    let distance = matching_objective(s, t, &permutation, MatchingMethod::SumOfSquares);
    Ok(MatchingResult {
        distance,
        permutation,
        method: MatchingMethod::SumOfSquares,
    })
}

/// O(k³) Hungarian method (shortest augmenting paths with dual potentials).
fn min_cost_assignment(k: usize, cost: &[f64]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    // 1-based columns; column 0 is the virtual root of each augmenting search
    let mut u = vec![0.0f64; k + 1];
    let mut v = vec![0.0f64; k + 1];
    let mut row_of = vec![NONE; k + 1];
    let mut way = vec![0usize; k + 1];

    for row in 0..k {
        row_of[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 * k + (j - 1)] - u[i0 + 1] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    if row_of[j] != NONE {
                        u[row_of[j] + 1] += delta;
                    }
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == NONE {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; k];
    for j in 1..=k {
        perm[row_of[j]] = j - 1;
    }
    perm
}

/// Exhaustive search over all `k!` pairings; `k <= 8`.
pub fn brute_force_matching(s: &Spectrum, t: &Spectrum, method: MatchingMethod) -> Result<MatchingResult> {
    let k = check_sizes(s, t)?;
    if k > BRUTE_FORCE_MAX {
        return Err(Error::OracleSizeExceeded(format!(
            "brute-force matching supports k <= {BRUTE_FORCE_MAX}, got {k}"
        )));
    }
    let (distance, permutation) = (0..k)
        .permutations(k)
        .map(|perm| (matching_objective(s, t, &perm, method), perm))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one permutation");
    Ok(MatchingResult {
        distance,
        permutation,
        method,
    })
}
