use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ensemble::PathEnsemble;
use crate::error::{param, Result};
use crate::function_space::PLPath;

/// Scalar random walks with `+-scale / sqrt(n_steps)` increments at knots
/// `k / n_steps`, uniformly weighted. Deterministic in `seed`.
pub fn sample_walks(n_steps: usize, n_paths: usize, scale: f64, seed: u64) -> Result<PathEnsemble> {
    if n_steps == 0 {
        return Err(param("n_steps", "must be >= 1"));
    }
    if n_paths == 0 {
        return Err(param("n_paths", "must be >= 1"));
    }
    if !scale.is_finite() {
        return Err(param("scale", "must be finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = scale / (n_steps as f64).sqrt();
    let knots: Vec<f64> = (0..=n_steps).map(|k| k as f64 / n_steps as f64).collect();
    let paths = (0..n_paths)
        .map(|_| {
            let mut level = 0.0;
            let mut values = Vec::with_capacity(n_steps + 1);
            values.push(vec![0.0]);
            for _ in 0..n_steps {
                level += if rng.random::<bool>() { step } else { -step };
                values.push(vec![level]);
            }
            PLPath::new(knots.clone(), values)
        })
        .collect::<Result<Vec<_>>>()?;
    PathEnsemble::uniform(paths)
}

/// Ensembles `(1 - p) delta_0 + p delta_spike_k`, `k = 1..=count`, where
/// `spike_k` is a unit tent of the given width centred at `k / (count + 1)`.
pub fn spike_mixture(p: f64, count: usize, width: f64) -> Result<Vec<PathEnsemble>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(param("p", "must lie in [0, 1]"));
    }
    if count == 0 {
        return Err(param("count", "must be >= 1"));
    }
    let half = width / 2.0;
    if !(half > 0.0) || half >= 0.5 / (count + 1) as f64 {
        return Err(param("width", "spikes must be positive and disjoint"));
    }
    let flat = PLPath::constant(vec![0.0])?;
    (1..=count)
        .map(|k| {
            let c = k as f64 / (count + 1) as f64;
            let spike = PLPath::new(
                vec![0.0, c - half, c, c + half, 1.0],
                vec![vec![0.0], vec![0.0], vec![1.0], vec![0.0], vec![0.0]],
            )?;
            PathEnsemble::new(vec![1.0 - p, p], vec![flat.clone(), spike])
        })
        .collect()
}
