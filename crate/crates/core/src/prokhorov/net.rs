//! Finite nets of measures `Σ (k_i/m) δ_{x_i}` built over a partition of
//! small-diameter cells, and the per-measure rounding they pair with.

use serde::Serialize;

use super::distance::prokhorov_distance;
use super::measure::DiscreteMeasure;
use super::tightness::check_family;
use crate::error::{param, Error, Result};
use crate::metric::{FiniteMetricSpace, IndexSet};

/// Nets larger than this are not materialized.
pub const MAX_NET_SIZE: f64 = 1e6;

const BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ProkhorovNet {
    pub lambda: f64,
    pub eps: f64,
    /// One representative per cell (lowest index), in cell order.
    pub cell_representatives: Vec<usize>,
    /// Representative of the complement of the cells, when it is nonempty.
    pub complement_representative: Option<usize>,
    pub m: u64,
    /// `sup_P P(S \ ∪ cells)`.
    pub tightness_defect: f64,
    pub t_gamma_bound: f64,
    /// Number of measures in the full net.
    pub net_size: f64,
    pub materialized: bool,
    #[serde(skip)]
    pub net: Vec<DiscreteMeasure>,
    /// For each input measure, the rounded net element it is paired with.
    pub paired: Vec<DiscreteMeasure>,
}

impl ProkhorovNet {
    /// All representatives, complement last.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = self.cell_representatives.clone();
        reps.extend(self.complement_representative);
        reps
    }
}

/// Per-measure covering check of a net.
#[derive(Debug, Clone, Serialize)]
pub struct NetCover {
    /// `ρ_λ(P, Q(P))` for every input measure.
    pub distances: Vec<f64>,
    pub radius: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Builds the net of measures with masses in `{0, 1/m, ..., 1}` on the cell
/// representatives (plus one complement representative), where `m` is the
/// smallest integer with `n/m <= eps/2` for `n` cells.
pub fn prokhorov_net(
    family: &[DiscreteMeasure],
    lambda: f64,
    eps: f64,
    partition: &[IndexSet],
    t_gamma_bound: f64,
) -> Result<ProkhorovNet> {
    check_family(family)?;
    if !(lambda > 0.0) {
        return Err(param("lambda", "must be > 0"));
    }
    if !(eps > 0.0) {
        return Err(param("eps", "must be > 0"));
    }
    let space = family[0].space().clone();
    let n_points = space.len();
    let mut owner = vec![None; n_points];
    for (c, cell) in partition.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::InvalidPartition(format!("cell {c} is empty")));
        }
        for &i in cell.members() {
            if i >= n_points {
                return Err(Error::IndexOutOfRange { index: i, len: n_points });
            }
            if let Some(prev) = owner[i] {
                return Err(Error::InvalidPartition(format!(
                    "point {i} lies in cells {prev} and {c}"
                )));
            }
            owner[i] = Some(c);
        }
        let diameter = space.set_diameter(cell.members());
        let bound = lambda * eps;
        if !(diameter < bound) {
            return Err(Error::CellTooWide { cell: c, diameter, bound });
        }
    }
    let complement: Vec<usize> = (0..n_points).filter(|&i| owner[i].is_none()).collect();
    let tightness_defect = family
        .iter()
        .map(|p| complement.iter().fold(0.0, |acc, &i| acc + p.mass()[i]))
        .fold(0.0, f64::max);
    if t_gamma_bound + BOUND_TOL < tightness_defect - eps / 2.0 {
        return Err(param(
            "t_gamma_bound",
            format!(
                "{t_gamma_bound} is below sup_P P(S \\ ∪ cells) - eps/2 = {}",
                tightness_defect - eps / 2.0
            ),
        ));
    }

    let n = partition.len() as u64;
    let m = smallest_denominator(n, eps);
    let cell_representatives: Vec<usize> = partition.iter().map(|c| c.members()[0]).collect();
    let complement_representative = complement.first().copied();
    let mut reps = cell_representatives.clone();
    reps.extend(complement_representative);
    let parts = reps.len();
    let net_size = binomial(m + parts as u64 - 1, parts as u64 - 1);

    let to_measure = |counts: &[u64]| {
        let mut mass = vec![0.0; n_points];
        for (&r, &k) in reps.iter().zip(counts) {
            mass[r] += k as f64 / m as f64;
        }
        DiscreteMeasure::new(space.clone(), mass)
    };

    let materialized = net_size <= MAX_NET_SIZE;
    let mut net = Vec::new();
    if materialized {
        let mut counts = vec![0u64; parts];
        let mut out = Vec::new();
        compositions(m, 0, &mut counts, &mut out);
        net = out.iter().map(|c| to_measure(c)).collect::<Result<_>>()?;
    }

    let paired = family
        .iter()
        .map(|p| {
            let mut counts: Vec<u64> = partition
                .iter()
                .map(|cell| (m as f64 * p.measure_of(cell)).floor() as u64)
                .collect();
            let used: u64 = counts.iter().sum();
            let rest = m.saturating_sub(used);
            if complement_representative.is_some() {
                counts.push(rest);
            } else if let Some(last) = counts.last_mut() {
                *last += rest;
            }
            to_measure(&counts)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ProkhorovNet {
        lambda,
        eps,
        cell_representatives,
        complement_representative,
        m,
        tightness_defect,
        t_gamma_bound,
        net_size,
        materialized,
        net,
        paired,
    })
}

/// Certifies `ρ_λ(P, Q(P)) <= t_gamma_bound + eps` for every input measure.
pub fn certify_net_cover(family: &[DiscreteMeasure], net: &ProkhorovNet) -> Result<NetCover> {
    let distances = family
        .iter()
        .zip(&net.paired)
        .map(|(p, q)| prokhorov_distance(p, q, net.lambda).map(|r| r.alpha))
        .collect::<Result<Vec<_>>>()?;
    let radius = distances.iter().copied().fold(0.0, f64::max);
    let bound = net.t_gamma_bound + net.eps;
    Ok(NetCover {
        holds: radius <= bound + BOUND_TOL,
        distances,
        radius,
        bound,
    })
}

/// Greedy partition of `points` into cells of diameter strictly below `bound`:
/// each unassigned point opens a cell and absorbs later points that keep the
/// diameter below the bound.
pub fn diameter_partition(space: &FiniteMetricSpace, points: &[usize], bound: f64) -> Vec<IndexSet> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut assigned = vec![false; sorted.len()];
    let mut cells = Vec::new();
    for a in 0..sorted.len() {
        if assigned[a] {
            continue;
        }
        assigned[a] = true;
        let mut cell = vec![sorted[a]];
        for b in (a + 1)..sorted.len() {
            if !assigned[b] && cell.iter().all(|&c| space.d(c, sorted[b]) < bound) {
                assigned[b] = true;
                cell.push(sorted[b]);
            }
        }
        cells.push(IndexSet::from_sorted(cell));
    }
    cells
}

fn smallest_denominator(n: u64, eps: f64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut m = ((2.0 * n as f64) / eps).ceil().max(1.0) as u64;
    while m > 1 && (n as f64) / ((m - 1) as f64) <= eps / 2.0 {
        m -= 1;
    }
    while (n as f64) / (m as f64) > eps / 2.0 {
        m += 1;
    }
    m
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

fn compositions(remaining: u64, slot: usize, counts: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if slot + 1 == counts.len() {
        counts[slot] = remaining;
        out.push(counts.clone());
        return;
    }
    for k in 0..=remaining {
        counts[slot] = k;
        compositions(remaining - k, slot + 1, counts, out);
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn denominators() {
        assert_eq!(smallest_denominator(2, 0.5), 8);
        assert_eq!(smallest_denominator(1, 1.0), 2);
        assert_eq!(smallest_denominator(0, 0.1), 1);
        assert_eq!(smallest_denominator(3, 0.7), 9);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert_eq!(binomial(9, 8), 9.0);
    }

    #[test]
    fn single_dirac_net_contains_itself() {
        let s = Arc::new(FiniteMetricSpace::from_coords(vec![vec![0.0]]).unwrap());
        let fam = vec![DiscreteMeasure::dirac(s, 0).unwrap()];
        let cells = vec![IndexSet::new(vec![0]).unwrap()];
        let net = prokhorov_net(&fam, 1.0, 1.0, &cells, 0.0).unwrap();
        assert_eq!(net.m, 2);
        assert!(net.materialized);
        assert_eq!(net.net.len(), 1);
        assert_eq!(net.net[0].mass(), &[1.0]);
        let cover = certify_net_cover(&fam, &net).unwrap();
        assert_eq!(cover.radius, 0.0);
        assert!(cover.holds);
    }

    #[test]
    fn two_point_rounding() {
        let s = Arc::new(FiniteMetricSpace::from_coords(vec![vec![0.0], vec![0.1]]).unwrap());
        let fam = vec![DiscreteMeasure::new(s, vec![0.3, 0.7]).unwrap()];
        let cells = vec![IndexSet::new(vec![0]).unwrap(), IndexSet::new(vec![1]).unwrap()];
        let net = prokhorov_net(&fam, 1.0, 0.5, &cells, 0.0).unwrap();
        assert_eq!(net.m, 8);
        assert_eq!(net.complement_representative, None);
        assert_eq!(net.paired[0].mass(), &[2.0 / 8.0, 6.0 / 8.0]);
        assert_eq!(net.net_size, 9.0);
        assert_eq!(net.net.len(), 9);
        let cover = certify_net_cover(&fam, &net).unwrap();
        assert!(cover.holds);
        assert!(cover.radius <= 0.5);
    }

    #[test]
    fn oversize_net_falls_back_to_pairing() {
        let coords: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64]).collect();
        let s = Arc::new(FiniteMetricSpace::from_coords(coords).unwrap());
        let fam = vec![DiscreteMeasure::uniform_on(s.clone(), &(0..12).collect::<Vec<_>>()).unwrap()];
        let cells = diameter_partition(&s, &(0..12).collect::<Vec<_>>(), 0.5);
        assert_eq!(cells.len(), 12);
        let net = prokhorov_net(&fam, 1.0, 0.6, &cells, 0.0).unwrap();
        assert!(!net.materialized);
        assert!(net.net.is_empty());
        assert!(net.net_size > MAX_NET_SIZE);
        assert!(certify_net_cover(&fam, &net).unwrap().holds);
    }

    #[test]
    fn rejects_wide_or_overlapping_cells() {
        let s = Arc::new(FiniteMetricSpace::from_coords(vec![vec![0.0], vec![1.0]]).unwrap());
        let fam = vec![DiscreteMeasure::dirac(s, 0).unwrap()];
        let wide = vec![IndexSet::new(vec![0, 1]).unwrap()];
        assert!(matches!(
            prokhorov_net(&fam, 1.0, 1.0, &wide, 0.0),
            Err(Error::CellTooWide { .. })
        ));
        let overlap = vec![IndexSet::new(vec![0]).unwrap(), IndexSet::new(vec![0]).unwrap()];
        assert!(prokhorov_net(&fam, 1.0, 1.0, &overlap, 0.0).is_err());
    }

    #[test]
    fn rejects_understated_tightness_bound() {
        let s = Arc::new(FiniteMetricSpace::from_coords(vec![vec![0.0], vec![5.0]]).unwrap());
        let fam = vec![DiscreteMeasure::new(s, vec![0.5, 0.5]).unwrap()];
        let cells = vec![IndexSet::new(vec![0]).unwrap()];
        assert!(prokhorov_net(&fam, 1.0, 0.2, &cells, 0.1).is_err());
        let net = prokhorov_net(&fam, 1.0, 0.2, &cells, 0.4).unwrap();
        assert_eq!(net.complement_representative, Some(1));
        assert!(certify_net_cover(&fam, &net).unwrap().holds);
    }

    #[test]
    fn diameter_partition_respects_bound() {
        let coords: Vec<Vec<f64>> = [0.0, 0.1, 0.25, 1.0, 1.05, 3.0].iter().map(|&x| vec![x]).collect();
        let s = FiniteMetricSpace::from_coords(coords).unwrap();
        let cells = diameter_partition(&s, &[0, 1, 2, 3, 4, 5], 0.2);
        for c in &cells {
            assert!(s.set_diameter(c.members()) < 0.2);
        }
        let total: usize = cells.iter().map(IndexSet::len).sum();
        assert_eq!(total, 6);
    }
}
