//! Finite-budget estimator for the measure of non-uniform tightness
//! `sup_ε inf_Y sup_P P(S \ ∪_{y∈Y} B(y, ε))`.

use serde::Serialize;

use super::measure::DiscreteMeasure;
use crate::error::{param, Error, Result};
use crate::metric::FiniteMetricSpace;

/// Exhaustive center search is attempted up to this many points.
pub const EXACT_LIMIT: usize = 20;

/// Estimates at one ball radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessEntry {
    pub eps: f64,
    /// Worst-case missed mass with greedily chosen centers.
    pub upper: f64,
    pub upper_centers: Vec<usize>,
    /// Exact optimum over center sets of size <= k_max, when affordable.
    pub lower: Option<f64>,
    pub lower_centers: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessEstimate {
    pub k_max: usize,
    pub entries: Vec<TightnessEntry>,
    pub upper: f64,
    /// `None` when the space is too large for the exhaustive search.
    pub lower: Option<f64>,
    pub note: &'static str,
}

const NOTE: &str = "estimates restrict ε to the grid and Y to at most k_max centers drawn \
from the space's points; the measure itself is a supremum over all ε > 0 and an infimum over \
all finite Y";

/// Point-wise coverage of open balls of radius `eps` around each candidate.
pub(crate) struct BallCover<'a> {
    space: &'a FiniteMetricSpace,
    eps: f64,
}

impl<'a> BallCover<'a> {
    pub(crate) fn new(space: &'a FiniteMetricSpace, eps: f64) -> Self {
        Self { space, eps }
    }

    fn covered(&self, centers: &[usize]) -> Vec<bool> {
        (0..self.space.len())
            .map(|i| centers.iter().any(|&c| self.space.d(c, i) < self.eps))
            .collect()
    }

    /// `sup_P P(S \ ∪ B(y, eps))`.
    pub(crate) fn missed(&self, family: &[DiscreteMeasure], centers: &[usize]) -> f64 {
        let covered = self.covered(centers);
        worst_missed(family, &covered)
    }

    /// Greedy: repeatedly add the center that minimizes the worst-case missed
    /// mass (lowest index on ties), stopping at `k_max` or zero.
    pub(crate) fn greedy(&self, family: &[DiscreteMeasure], k_max: usize) -> (f64, Vec<usize>) {
        let n = self.space.len();
        let mut centers: Vec<usize> = Vec::new();
        let mut covered = vec![false; n];
        let mut value = worst_missed(family, &covered);
        while centers.len() < k_max && value > 0.0 {
            let mut best: Option<(f64, usize)> = None;
            for c in 0..n {
                if centers.contains(&c) {
                    continue;
                }
                let trial: Vec<bool> = (0..n)
                    .map(|i| covered[i] || self.space.d(c, i) < self.eps)
                    .collect();
                let v = worst_missed(family, &trial);
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, c));
                }
            }
            let Some((v, c)) = best else { break };
            centers.push(c);
            for (i, cov) in covered.iter_mut().enumerate() {
                *cov = *cov || self.space.d(c, i) < self.eps;
            }
            value = v;
        }
        centers.sort_unstable();
        (value, centers)
    }

    /// Exact minimum over all center sets of size `min(k_max, n)`.
    pub(crate) fn exact(&self, family: &[DiscreteMeasure], k_max: usize) -> (f64, Vec<usize>) {
        let n = self.space.len();
        let k = k_max.min(n);
        // balls[c][i]: point i lies in B(c, eps)
        let balls: Vec<Vec<bool>> = (0..n)
            .map(|c| (0..n).map(|i| self.space.d(c, i) < self.eps).collect())
            .collect();
        let mut best = (worst_missed(family, &vec![false; n]), Vec::new());
        if k == 0 {
            return best;
        }
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let covered: Vec<bool> = (0..n).map(|i| combo.iter().any(|&c| balls[c][i])).collect();
            let v = worst_missed(family, &covered);
            if v < best.0 || best.1.is_empty() && v <= best.0 {
                best = (v, combo.clone());
            }
            if best.0 == 0.0 || !next_combination(&mut combo, n) {
                break;
            }
        }
        best
    }
}

fn worst_missed(family: &[DiscreteMeasure], covered: &[bool]) -> f64 {
    family
        .iter()
        .map(|p| {
            p.mass()
                .iter()
                .zip(covered)
                .filter(|(_, &c)| !c)
                .fold(0.0, |acc, (m, _)| acc + m)
        })
        .fold(0.0, f64::max)
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub(crate) fn check_family(family: &[DiscreteMeasure]) -> Result<()> {
    let first = family.first().ok_or(Error::Empty("measure family"))?;
    family.iter().try_for_each(|p| first.same_space(p))
}

/// Estimates the measure of non-uniform tightness on a grid of radii with at
/// most `k_max` centers.
pub fn mu_ut(family: &[DiscreteMeasure], eps_grid: &[f64], k_max: usize) -> Result<TightnessEstimate> {
    check_family(family)?;
    if eps_grid.is_empty() {
        return Err(param("eps_grid", "must be nonempty"));
    }
    if eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(param("eps_grid", "radii must be > 0"));
    }
    let space = family[0].space();
    let exact = space.len() <= EXACT_LIMIT;
    let entries: Vec<TightnessEntry> = eps_grid
        .iter()
        .map(|&eps| {
            let cover = BallCover::new(space, eps);
            let (upper, upper_centers) = cover.greedy(family, k_max);
            let (lower, lower_centers) = if exact {
                let (v, c) = cover.exact(family, k_max);
                (Some(v), Some(c))
            } else {
                (None, None)
            };
            TightnessEntry {
                eps,
                upper,
                upper_centers,
                lower,
                lower_centers,
            }
        })
        .collect();
    let upper = entries.iter().map(|e| e.upper).fold(0.0, f64::max);
    let lower = exact.then(|| entries.iter().filter_map(|e| e.lower).fold(0.0, f64::max));
    Ok(TightnessEstimate {
        k_max,
        entries,
        upper,
        lower,
        note: NOTE,
    })
}
