//! Covering and packing profiles: finite-budget surrogates for the Hausdorff
//! measure of non-compactness.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::function_space::chebyshev_center;
use crate::metric::{FiniteMetricSpace, IndexSet};
use crate::prokhorov::next_combination;

/// Largest point count accepted by [`exact_kcenter`].
pub const EXACT_KCENTER_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverRadius {
    pub k: usize,
    pub radius: f64,
    pub centers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingBound {
    pub k: usize,
    /// Half the smallest pairwise distance among the witness points.
    pub bound: f64,
    pub witness: Vec<usize>,
}

/// Cover with centers moved to the Chebyshev center of each greedy cluster.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbientCover {
    pub k: usize,
    pub radius: f64,
    pub centers: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverProfile {
    pub radii: Vec<CoverRadius>,
    pub packing: Vec<PackingBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Vec<AmbientCover>>,
}

impl CoverProfile {
    /// Rows `(k, r_k, p_k)`.
    pub fn rows(&self) -> Vec<(usize, f64, f64)> {
        self.radii
            .iter()
            .zip(&self.packing)
            .map(|(r, p)| (r.k, r.radius, p.bound))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KCenter {
    pub radius: f64,
    pub centers: Vec<usize>,
}

/// Farthest-point traversal over `n` abstract points, seeded at index 0.
/// Returned centers and witnesses are local indices.
pub fn cover_profile_by<D>(n: usize, k_max: usize, dist: D) -> Result<CoverProfile>
where
    D: Fn(usize, usize) -> f64,
{
    if n == 0 {
        return Err(Error::Empty("point list"));
    }
    if k_max == 0 {
        return Err(param("k_max", "must be >= 1"));
    }
    let mut picks = vec![0usize];
    let mut nearest: Vec<f64> = (0..n).map(|i| dist(0, i)).collect();
    let mut radii = Vec::with_capacity(k_max);
    let mut packing = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k >= n {
            let all: Vec<usize> = (0..n).collect();
            radii.push(CoverRadius { k, radius: 0.0, centers: all.clone() });
            packing.push(PackingBound { k, bound: 0.0, witness: all });
            continue;
        }
        // picks.len() == k here
        let (far, r) = farthest(&nearest);
        radii.push(CoverRadius { k, radius: r, centers: picks.clone() });
        let mut witness = picks.clone();
        witness.push(far);
        packing.push(PackingBound { k, bound: r / 2.0, witness });
        picks.push(far);
        for (i, slot) in nearest.iter_mut().enumerate() {
            *slot = slot.min(dist(far, i));
        }
    }
    Ok(CoverProfile { radii, packing, ambient: None })
}

fn farthest(nearest: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &d) in nearest.iter().enumerate() {
        if d > best.1 {
            best = (i, d);
        }
    }
    best
}

/// Profile of `points` in `space`; indices in the result refer to `space`.
pub fn cover_profile(space: &FiniteMetricSpace, points: &IndexSet, k_max: usize) -> Result<CoverProfile> {
    check_points(space, points)?;
    let m = points.members();
    let mut profile = cover_profile_by(m.len(), k_max, |a, b| space.d(m[a], m[b]))?;
    for r in &mut profile.radii {
        r.centers.iter_mut().for_each(|c| *c = m[*c]);
    }
    for p in &mut profile.packing {
        p.witness.iter_mut().for_each(|c| *c = m[*c]);
    }
    Ok(profile)
}

/// As [`cover_profile`], additionally replacing each greedy cluster's center
/// by its Chebyshev center. Requires a Euclidean space.
pub fn cover_profile_ambient(
    space: &FiniteMetricSpace,
    points: &IndexSet,
    k_max: usize,
) -> Result<CoverProfile> {
    let coords = space
        .coords()
        .ok_or_else(|| param("ambient", "requires a space with coordinates"))?;
    let mut profile = cover_profile(space, points, k_max)?;
    let mut ambient = Vec::with_capacity(profile.radii.len());
    for r in &profile.radii {
        let mut clusters: Vec<Vec<Vec<f64>>> = vec![Vec::new(); r.centers.len()];
        for &i in points.members() {
            let mut best = (0, f64::INFINITY);
            for (slot, &c) in r.centers.iter().enumerate() {
                let d = space.d(c, i);
                if d < best.1 {
                    best = (slot, d);
                }
            }
            clusters[best.0].push(coords[i].clone());
        }
        let mut radius: f64 = 0.0;
        let mut centers = Vec::with_capacity(clusters.len());
        for cluster in clusters.iter().filter(|c| !c.is_empty()) {
            let ball = chebyshev_center(cluster)?;
            radius = radius.max(ball.radius);
            centers.push(ball.center);
        }
        ambient.push(AmbientCover { k: r.k, radius, centers });
    }
    profile.ambient = Some(ambient);
    Ok(profile)
}

/// Exact restricted k-center radius by enumerating all k-subsets.
pub fn exact_kcenter(space: &FiniteMetricSpace, points: &IndexSet, k: usize) -> Result<KCenter> {
    check_points(space, points)?;
    let m = points.members();
    if m.len() > EXACT_KCENTER_LIMIT {
        return Err(Error::TooLarge(format!(
            "exact k-center enumerates subsets of at most {EXACT_KCENTER_LIMIT} points, got {}",
            m.len()
        )));
    }
    if k == 0 {
        return Err(param("k", "must be >= 1"));
    }
    if k >= m.len() {
        return Ok(KCenter { radius: 0.0, centers: m.to_vec() });
    }
    let mut combo: Vec<usize> = (0..k).collect();
    let mut best = KCenter { radius: f64::INFINITY, centers: Vec::new() };
    loop {
        let (r, _) = candidate_cover_radius(m.len(), k, |i, c| space.d(m[i], m[combo[c]]));
        if r < best.radius {
            best = KCenter { radius: r, centers: combo.iter().map(|&c| m[c]).collect() };
        }
        if !next_combination(&mut combo, m.len()) {
            break;
        }
    }
    Ok(best)
}

/// Covering radius of `n` points by `m` candidate centers, with the nearest
/// candidate of each point (lowest index on ties).
pub fn candidate_cover_radius<D>(n: usize, m: usize, dist: D) -> (f64, Vec<usize>)
where
    D: Fn(usize, usize) -> f64,
{
    let mut radius: f64 = 0.0;
    let mut assignment = Vec::with_capacity(n);
    for i in 0..n {
        let mut best = (0, f64::INFINITY);
        for c in 0..m {
            let d = dist(i, c);
            if d < best.1 {
                best = (c, d);
            }
        }
        radius = radius.max(best.1);
        assignment.push(best.0);
    }
    (radius, assignment)
}

fn check_points(space: &FiniteMetricSpace, points: &IndexSet) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Empty("point list"));
    }
    if let Some(&last) = points.members().last() {
        if last >= space.len() {
            return Err(Error::IndexOutOfRange { index: last, len: space.len() });
        }
    }
    Ok(())
}
