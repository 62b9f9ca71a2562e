//! Interpolation nets over equicontinuous, bounded path families.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::ball::chebyshev_center;
use super::jung::jung_constant;
use super::path::{check_dims, modulus, sup_distance, PLPath};
use crate::error::{param, Error, Result};

/// Largest lattice that [`AANet::list_grid`] will enumerate.
pub const LATTICE_LIMIT: f64 = 1e7;
/// Floating-point allowance on the per-sample certificate.
pub const NET_TOL: f64 = 1e-9;
/// Grid spacing is at most `delta / WINDOW_FACTOR`.
pub const WINDOW_FACTOR: f64 = 3.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleFit {
    pub sample: usize,
    pub member: usize,
    pub achieved: f64,
    pub bound: f64,
}

/// Axis-aligned lattice of the given pitch, cut to a closed ball at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSpec {
    pub dim: usize,
    pub pitch: f64,
    pub radius: f64,
    /// Points in the enclosing box, the enumeration cost.
    pub box_count: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AANet {
    pub dim: usize,
    pub delta: f64,
    pub alpha: f64,
    pub m_bound: f64,
    pub eps: f64,
    pub kappa: f64,
    pub grid_times: Vec<f64>,
    pub windows: Vec<Window>,
    pub lattice: LatticeSpec,
    /// Window-sampling slack; zero for piecewise-linear input.
    pub window_slack: f64,
    /// `kappa * alpha + eps + window_slack`.
    pub bound: f64,
    pub members: Vec<PLPath>,
    pub per_sample: Vec<SampleFit>,
    pub covering_radius: f64,
}

/// Uniform grid `t_j = j / (2n + 1)` with spacing at most `delta / 3.01`.
pub fn grid_times(delta: f64) -> Vec<f64> {
    let n = ((WINDOW_FACTOR / delta - 1.0) / 2.0).ceil().max(1.0) as usize;
    let len = 2 * n + 1;
    (0..=len).map(|j| j as f64 / len as f64).collect()
}

/// Overlapping windows `I_0 = [t_0, t_2]`, `I_k = [t_{2k-1}, t_{2k+2}]`,
/// `I_n = [t_{2n-1}, t_{2n+1}]`.
fn windows(t: &[f64]) -> Vec<Window> {
    let n = (t.len() - 2) / 2;
    (0..=n)
        .map(|k| Window {
            start: if k == 0 { t[0] } else { t[2 * k - 1] },
            end: if k == n { t[2 * n + 1] } else { t[2 * k + 2] },
        })
        .collect()
}

impl LatticeSpec {
    fn new(dim: usize, pitch: f64, radius: f64) -> Self {
        let side = 2.0 * (radius / pitch).floor() + 1.0;
        Self {
            dim,
            pitch,
            radius,
            box_count: side.powi(dim as i32),
        }
    }

    fn snap(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|c| (c / self.pitch).round() as i64).collect()
    }

    fn point(&self, key: &[i64]) -> Vec<f64> {
        key.iter().map(|&k| k as f64 * self.pitch).collect()
    }
}

impl AANet {
    /// Every lattice point in the ball, refused above [`LATTICE_LIMIT`].
    pub fn list_grid(&self) -> Result<Vec<Vec<f64>>> {
        let l = &self.lattice;
        if l.box_count > LATTICE_LIMIT {
            let per_axis = LATTICE_LIMIT.powf(1.0 / l.dim as f64);
            return Err(Error::LatticeTooLarge {
                count: l.box_count,
                suggested_pitch: 2.0 * l.radius / (per_axis - 1.0).max(1.0),
            });
        }
        let k = (l.radius / l.pitch).floor() as i64;
        let mut key = vec![-k; l.dim];
        let mut out = Vec::new();
        loop {
            let p = l.point(&key);
            if p.iter().map(|c| c * c).sum::<f64>().sqrt() <= l.radius {
                out.push(p);
            }
            let mut axis = 0;
            loop {
                if axis == l.dim {
                    return Ok(out);
                }
                if key[axis] < k {
                    key[axis] += 1;
                    break;
                }
                key[axis] = -k;
                axis += 1;
            }
        }
    }
}

/// Builds the interpolation net for a family with `|x| <= m_bound` and
/// `modulus(x, delta) <= alpha`, and certifies each sample against
/// `kappa * alpha + eps`.
pub fn aa_net(family: &[PLPath], delta: f64, alpha: f64, m_bound: f64, eps: f64) -> Result<AANet> {
    let first = family.first().ok_or(Error::Empty("path family"))?;
    if !(delta > 0.0) {
        return Err(param("delta", "must be > 0"));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(param("alpha", "must be finite and >= 0"));
    }
    if !(m_bound >= 0.0) || !m_bound.is_finite() {
        return Err(param("m_bound", "must be finite and >= 0"));
    }
    if !(eps > 0.0) {
        return Err(param("eps", "must be > 0"));
    }
    for x in family {
        check_dims(first, x)?;
    }
    let dim = first.dim();
    let pitch = 2.0 * eps / (dim as f64).sqrt();
    if (m_bound + eps) / pitch > 1e15 {
        return Err(param("eps", "too small relative to the bound M"));
    }
    let lattice = LatticeSpec::new(dim, pitch, 3.0 * m_bound + eps);
    let kappa = jung_constant(dim);
    let times = grid_times(delta);
    let wins = windows(&times);
    for w in &wins {
        if !(w.end - w.start < delta) {
            return Err(Error::Certificate(format!(
                "window [{}, {}] is not narrower than delta",
                w.start, w.end
            )));
        }
    }

    let keys: Vec<Vec<Vec<i64>>> = family
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let norm = x.norm();
            if norm > m_bound + 1e-12 * (1.0 + m_bound) {
                return Err(Error::HypothesisViolated {
                    index,
                    reason: format!("norm {norm} exceeds M = {m_bound}"),
                });
            }
            let w = modulus(x, delta)?;
            if w > alpha + 1e-12 * (1.0 + alpha) {
                return Err(Error::HypothesisViolated {
                    index,
                    reason: format!("modulus {w} at delta {delta} exceeds alpha = {alpha}"),
                });
            }
            wins.iter()
                .map(|win| {
                    let ball = chebyshev_center(&x.window_vertices(win.start, win.end))?;
                    Ok(lattice.snap(&ball.center))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut index: BTreeMap<&[Vec<i64>], usize> = BTreeMap::new();
    let mut members = Vec::new();
    let mut assignment = Vec::with_capacity(family.len());
    for key in &keys {
        let id = *index.entry(key.as_slice()).or_insert_with(|| {
            let values = (0..times.len()).map(|j| lattice.point(&key[j / 2])).collect();
            members.push(PLPath::new(times.clone(), values));
            members.len() - 1
        });
        assignment.push(id);
    }
    let members: Vec<PLPath> = members.into_iter().collect::<Result<_>>()?;

    let window_slack = 0.0;
    let bound = kappa * alpha + eps + window_slack;
    let per_sample: Vec<SampleFit> = family
        .par_iter()
        .zip(&assignment)
        .enumerate()
        .map(|(sample, (x, &member))| SampleFit {
            sample,
            member,
            achieved: sup_distance(&members[member], x),
            bound,
        })
        .collect();
    if let Some(bad) = per_sample.iter().find(|s| s.achieved > s.bound + NET_TOL) {
        return Err(Error::Certificate(format!(
            "sample {} is {} from its net member, above the bound {}",
            bad.sample, bad.achieved, bad.bound
        )));
    }
    let covering_radius = per_sample.iter().map(|s| s.achieved).fold(0.0, f64::max);
    Ok(AANet {
        dim,
        delta,
        alpha,
        m_bound,
        eps,
        kappa,
        grid_times: times,
        windows: wins,
        lattice,
        window_slack,
        bound,
        members,
        per_sample,
        covering_radius,
    })
}
