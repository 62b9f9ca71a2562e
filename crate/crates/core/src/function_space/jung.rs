use serde::Serialize;

use super::ball::{chebyshev_center, BallCertificate};
use crate::error::{param, Error, Result};
use crate::metric::euclidean;

const JUNG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct JungReport {
    pub dim: usize,
    pub diameter: f64,
    pub radius: f64,
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
    pub ball: BallCertificate,
}

/// `sqrt(N / (2N + 2))`.
pub fn jung_constant(dim: usize) -> f64 {
    let n = dim as f64;
    (n / (2.0 * n + 2.0)).sqrt()
}

/// Checks `diam / 2 <= r <= sqrt(N / (2N + 2)) diam`. A violation is an
/// error carrying the point set.
pub fn jung_check(points: &[Vec<f64>]) -> Result<JungReport> {
    if points.len() < 2 {
        return Err(param("points", "need at least two points"));
    }
    let ball = chebyshev_center(points)?;
    let dim = points[0].len();
    let mut diameter: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            diameter = diameter.max(euclidean(p, q));
        }
    }
    let radius = ball.radius;
    let lower = diameter / 2.0;
    let upper = jung_constant(dim) * diameter;
    if radius < lower - JUNG_TOL || radius > upper + JUNG_TOL {
        return Err(Error::JungViolation {
            diameter,
            radius,
            witness: points.to_vec(),
        });
    }
    Ok(JungReport {
        dim,
        diameter,
        radius,
        lower,
        upper,
        ok: true,
        ball,
    })
}

/// Vertices of the regular simplex with unit edges in `R^dim`.
pub fn regular_simplex(dim: usize) -> Vec<Vec<f64>> {
    // Standard basis of R^(dim+1) scaled to unit edges, then written in an
    // orthonormal basis of the hyperplane sum = 1.
    let m = dim + 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let raw: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { s } else { 0.0 }).collect())
        .collect();
    let centroid: Vec<f64> = (0..m).map(|_| s / m as f64).collect();
    let centered: Vec<Vec<f64>> = raw
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(a, b)| a - b).collect())
        .collect();
    // Gram-Schmidt on the first `dim` centered vertices spans the hyperplane.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for v in centered.iter().take(dim) {
        let mut u = v.clone();
        for b in &basis {
            let c: f64 = u.iter().zip(b).map(|(x, y)| x * y).sum();
            u.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter_mut().for_each(|x| *x /= n);
        basis.push(u);
    }
    centered
        .iter()
        .map(|p| basis.iter().map(|b| p.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
        .collect()
}
