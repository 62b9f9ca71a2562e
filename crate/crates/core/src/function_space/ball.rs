//! Minimal enclosing balls with a convex-hull certificate.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::metric::euclidean;

pub const MAX_DIM: usize = 16;
/// Containment and hull-residual tolerance of the certificate.
pub const CERT_TOL: f64 = 1e-9;
const SHUFFLE_SEED: u64 = 0x00C0_FFEE;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallCertificate {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Input points on the boundary whose convex hull holds the center.
    pub support: Vec<Vec<f64>>,
    /// Convex weights of `support` reproducing `center`.
    pub weights: Vec<f64>,
    pub hull_residual: f64,
}

#[derive(Clone)]
struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        self.radius >= 0.0 && euclidean(&self.center, p) <= self.radius + 1e-12 * (1.0 + self.radius)
    }
}

/// Chebyshev center and radius of a finite point set.
pub fn chebyshev_center(points: &[Vec<f64>]) -> Result<BallCertificate> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let dim = first.len();
    if dim == 0 || dim > MAX_DIM {
        return Err(param("points", format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(param("points", format!("point {i} has dimension {}, expected {dim}", p.len())));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(param("points", format!("point {i} is not finite")));
        }
    }
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    pts.dedup();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));

    let mut support = Vec::with_capacity(dim + 1);
    let n = pts.len();
    let ball = move_to_front(&mut pts, n, &mut support, dim);
    let center = ball.center;
    let radius = pts.iter().map(|p| euclidean(p, &center)).fold(0.0, f64::max);
    certify(&pts, center, radius)
}

fn move_to_front(pts: &mut [Vec<f64>], end: usize, support: &mut Vec<Vec<f64>>, dim: usize) -> Ball {
    let mut ball = circumball(support);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        if !ball.contains(&pts[i]) {
            support.push(pts[i].clone());
            ball = move_to_front(pts, i, support, dim);
            support.pop();
            pts[..=i].rotate_right(1);
        }
    }
    ball
}

/// Smallest sphere through all of `support` (within their affine hull).
fn circumball(support: &[Vec<f64>]) -> Ball {
    let Some(s0) = support.first() else {
        return Ball { center: Vec::new(), radius: -1.0 };
    };
    let m = support.len() - 1;
    if m == 0 {
        return Ball { center: s0.clone(), radius: 0.0 };
    }
    let v: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|s| s.iter().zip(s0).map(|(a, b)| a - b).collect())
        .collect();
    let mut gram = vec![vec![0.0; m + 1]; m];
    for j in 0..m {
        for k in 0..m {
            gram[j][k] = dot(&v[j], &v[k]);
        }
        gram[j][m] = dot(&v[j], &v[j]) / 2.0;
    }
    let lambda = solve_dropping(gram, m);
    let mut center = s0.clone();
    for (l, vj) in lambda.iter().zip(&v) {
        for (c, x) in center.iter_mut().zip(vj) {
            *c += l * x;
        }
    }
    let radius = support.iter().map(|s| euclidean(s, &center)).fold(0.0, f64::max);
    Ball { center, radius }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting on an `m x (m+1)` augmented
/// system; variables without a usable pivot are set to zero.
fn solve_dropping(mut a: Vec<Vec<f64>>, m: usize) -> Vec<f64> {
    let scale = (0..m).map(|i| a[i][i].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut pivots = Vec::with_capacity(m);
    let mut rank = 0;
    for col in 0..m {
        let (best, mag) = (rank..m)
            .map(|r| (r, a[r][col].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if rank >= m || mag <= 1e-12 * scale {
            continue;
        }
        a.swap(rank, best);
        for r in rank + 1..m {
            let f = a[r][col] / a[rank][col];
            if f != 0.0 {
                for c in col..=m {
                    a[r][c] -= f * a[rank][c];
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut x = vec![0.0; m];
    for (row, &col) in pivots.iter().enumerate().rev() {
        let mut s = a[row][m];
        for &c in &pivots[row + 1..] {
            s -= a[row][c] * x[c];
        }
        x[col] = s / a[row][col];
    }
    x
}

fn certify(pts: &[Vec<f64>], center: Vec<f64>, radius: f64) -> Result<BallCertificate> {
    let band = CERT_TOL * (1.0 + radius);
    let near: Vec<&Vec<f64>> = pts
        .iter()
        .filter(|p| euclidean(p, &center) >= radius - band)
        .collect();
    let cols: Vec<Vec<f64>> = near
        .iter()
        .map(|p| p.iter().copied().chain(std::iter::once(1.0)).collect())
        .collect();
    let target: Vec<f64> = center.iter().copied().chain(std::iter::once(1.0)).collect();
    let w = nnls(&cols, &target);
    let residual = residual_norm(&cols, &w, &target);
    let scale = 1.0 + center.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if residual > CERT_TOL * scale {
        return Err(Error::Certificate(format!(
            "center is not in the hull of the boundary points (residual {residual:e})"
        )));
    }
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (p, &wi) in near.iter().zip(&w) {
        if wi > 0.0 {
            support.push((*p).clone());
            weights.push(wi);
        }
    }
    Ok(BallCertificate {
        center,
        radius,
        support,
        weights,
        hull_residual: residual,
    })
}

fn residual_norm(cols: &[Vec<f64>], x: &[f64], b: &[f64]) -> f64 {
    let mut r = b.to_vec();
    for (c, &xi) in cols.iter().zip(x) {
        for (ri, ci) in r.iter_mut().zip(c) {
            *ri -= xi * ci;
        }
    }
    dot(&r, &r).sqrt()
}

/// Lawson-Hanson nonnegative least squares over the given columns.
pub(crate) fn nnls(cols: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = cols.len();
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    for _ in 0..3 * n + 10 {
        let mut r = b.to_vec();
        for (c, &xi) in cols.iter().zip(&x) {
            for (ri, ci) in r.iter_mut().zip(c) {
                *ri -= xi * ci;
            }
        }
        let pick = (0..n)
            .filter(|&j| !passive[j])
            .map(|j| (j, dot(&cols[j], &r)))
            .filter(|&(_, g)| g > 1e-14)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((j, _)) = pick else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            if idx.is_empty() {
                break;
            }
            let sub: Vec<&Vec<f64>> = idx.iter().map(|&k| &cols[k]).collect();
            let z = lstsq(&sub, b);
            if z.iter().all(|&v| v > 0.0) {
                for (&k, &v) in idx.iter().zip(&z) {
                    x[k] = v;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&k, &v) in idx.iter().zip(&z) {
                if v <= 0.0 {
                    let denom = x[k] - v;
                    let a = if denom > 0.0 { x[k] / denom } else { 0.0 };
                    alpha = alpha.min(a);
                }
            }
            for (&k, &v) in idx.iter().zip(&z) {
                x[k] += alpha * (v - x[k]);
                if x[k] <= 1e-15 {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
        }
    }
    x
}

/// Least squares by modified Gram-Schmidt; dependent columns get weight 0.
fn lstsq(cols: &[&Vec<f64>], b: &[f64]) -> Vec<f64> {
    let k = cols.len();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut r = vec![vec![0.0; k]; k];
    let mut keep = vec![false; k];
    let mut qi_of = vec![usize::MAX; k];
    for j in 0..k {
        let mut v = cols[j].clone();
        let norm0 = dot(&v, &v).sqrt();
        for (qi, qv) in q.iter().enumerate() {
            let col = qi_of.iter().position(|&t| t == qi).unwrap();
            let c = dot(qv, &v);
            r[col][j] = c;
            for (vi, qq) in v.iter_mut().zip(qv) {
                *vi -= c * qq;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 * norm0.max(f64::MIN_POSITIVE) {
            v.iter_mut().for_each(|x| *x /= norm);
            r[j][j] = norm;
            qi_of[j] = q.len();
            q.push(v);
            keep[j] = true;
        }
    }
    let qtb: Vec<f64> = (0..k)
        .map(|j| if keep[j] { dot(&q[qi_of[j]], b) } else { 0.0 })
        .collect();
    let mut z = vec![0.0; k];
    for j in (0..k).rev() {
        if !keep[j] {
            continue;
        }
        let mut s = qtb[j];
        for l in j + 1..k {
            if keep[l] {
                s -= r[j][l] * z[l];
            }
        }
        z[j] = s / r[j][j];
    }
    z
}
