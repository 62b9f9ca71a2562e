//! Finite metric spaces, index sets, closed inflation and open balls.

use serde::Serialize;

use crate::error::{param, Error, Result};

/// Relative slack allowed when validating the triangle inequality.
const TRIANGLE_TOL: f64 = 1e-12;

/// A finite metric space given by a validated distance matrix.
///
/// When the space comes from Euclidean coordinates the coordinates are kept
/// and the matrix is computed from them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Vec<f64>>>,
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit distance matrix, validating the
    /// metric axioms (including the O(n^3) triangle check).
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_matrix_with(rows, true)
    }

    /// Like [`from_matrix`](Self::from_matrix) but the triangle check can be
    /// skipped for large instances whose metric is known by construction.
    pub fn from_matrix_with(rows: Vec<Vec<f64>>, check_triangle: bool) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("metric space has no points"));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        let space = Self {
            n,
            dist,
            coords: None,
        };
        space.validate(check_triangle)?;
        Ok(space)
    }

    /// Builds a Euclidean space from point coordinates.
    pub fn from_coords(coords: Vec<Vec<f64>>) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Empty("metric space has no points"));
        }
        let dim = coords[0].len();
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::InvalidMetric(format!(
                    "point {i} has dimension {}, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidMetric(format!("point {i} has a non-finite coordinate")));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&coords[i], &coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            n,
            dist,
            coords: Some(coords),
        })
    }

    /// Builds a space from a distance callback. The callback must be a metric;
    /// symmetry and the diagonal are enforced, the triangle check is optional.
    pub fn from_fn<F>(n: usize, check_triangle: bool, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64,
    {
        if n == 0 {
            return Err(Error::Empty("metric space has no points"));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let space = Self {
            n,
            dist,
            coords: None,
        };
        space.validate(check_triangle)?;
        Ok(space)
    }

    fn validate(&self, check_triangle: bool) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.d(i, i) != 0.0 {
                return Err(Error::InvalidMetric(format!("dist[{i}][{i}] must be 0")));
            }
            for j in 0..n {
                let d = self.d(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "dist[{i}][{j}] = {d} is not a finite nonnegative number"
                    )));
                }
                if d != self.d(j, i) {
                    return Err(Error::InvalidMetric(format!(
                        "dist[{i}][{j}] != dist[{j}][{i}]"
                    )));
                }
            }
        }
        if check_triangle {
            let scale = self.diameter().max(f64::MIN_POSITIVE);
            for i in 0..n {
                for j in 0..n {
                    let dij = self.d(i, j);
                    for k in 0..n {
                        if self.d(i, k) > dij + self.d(j, k) + TRIANGLE_TOL * scale {
                            return Err(Error::InvalidMetric(format!(
                                "triangle inequality fails for ({i}, {j}, {k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between points `i` and `j`.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Distance matrix as nested rows.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Diameter of a subset of points (0 for sets with fewer than two points).
    pub fn set_diameter(&self, members: &[usize]) -> f64 {
        let mut diam: f64 = 0.0;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                diam = diam.max(self.d(i, j));
            }
        }
        diam
    }

    /// Smallest positive pairwise distance, if any.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d > 0.0)
            .min_by(f64::total_cmp)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n {
            Err(Error::IndexOutOfRange {
                index,
                len: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Closed inflation `{ i | min_{a in A} d(a, i) <= eps }`.
    pub fn inflate(&self, set: &IndexSet, eps: f64) -> Result<IndexSet> {
        if !(eps >= 0.0) {
            return Err(param("eps", "inflation radius must be >= 0"));
        }
        set.check_range(self.n)?;
        Ok(self.inflate_by(set.members(), |d| d <= eps))
    }

    /// Inflation with an arbitrary predicate on distances; shared by the
    /// scaled comparisons used in the Prokhorov feasibility checks.
    pub(crate) fn inflate_by(&self, members: &[usize], within: impl Fn(f64) -> bool) -> IndexSet {
        let hit = (0..self.n)
            .filter(|&i| members.iter().any(|&a| within(self.d(a, i))))
            .collect();
        IndexSet(hit)
    }

    /// Open ball `{ i | d(center, i) < eps }`.
    pub fn open_ball(&self, center: usize, eps: f64) -> Result<IndexSet> {
        if !(eps > 0.0) {
            return Err(param("eps", "ball radius must be > 0"));
        }
        self.check_index(center)?;
        Ok(IndexSet(
            (0..self.n).filter(|&i| self.d(center, i) < eps).collect(),
        ))
    }

    /// Sub-space on the given points, preserving their order.
    pub fn restrict(&self, members: &[usize]) -> Result<Self> {
        for &m in members {
            self.check_index(m)?;
        }
        let n = members.len();
        if n == 0 {
            return Err(Error::Empty("restriction to an empty set"));
        }
        let mut dist = vec![0.0; n * n];
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                dist[a * n + b] = self.d(i, j);
            }
        }
        let coords = self
            .coords
            .as_ref()
            .map(|c| members.iter().map(|&i| c[i].clone()).collect());
        Ok(Self { n, dist, coords })
    }
}

/// A sorted, duplicate-free set of point indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from arbitrary indices; sorts and rejects duplicates.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(param("members", "index set contains duplicates"));
        }
        Ok(Self(members))
    }

    /// Builds a set and checks every index against a space size.
    pub fn within(members: Vec<usize>, len: usize) -> Result<Self> {
        let set = Self::new(members)?;
        set.check_range(len)?;
        Ok(set)
    }

    pub fn all(len: usize) -> Self {
        Self((0..len).collect())
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    fn check_range(&self, len: usize) -> Result<()> {
        match self.0.last() {
            Some(&i) if i >= len => Err(Error::IndexOutOfRange { index: i, len }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
