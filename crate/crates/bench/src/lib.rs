//! Seeded fixtures shared by the benchmarks.

use std::sync::Arc;

use qcompact_core::function_space::{ramp_family, PLPath};
use qcompact_core::stochastic::{sample_walks, PathEnsemble};
use qcompact_core::{DiscreteMeasure, FiniteMetricSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in the unit cube.
pub fn points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| (0..dim).map(|_| r.random::<f64>()).collect()).collect()
}

/// Two random probability vectors on `n` random points in the plane.
pub fn measure_pair(n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    let space = Arc::new(FiniteMetricSpace::from_coords(points(n, 2, seed)).expect("distinct points"));
    let mut r = rng(seed ^ 0x5eed);
    let mut mass = || {
        let w: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect::<Vec<_>>()
    };
    let (p, q) = (mass(), mass());
    (
        DiscreteMeasure::new(space.clone(), p).expect("normalized"),
        DiscreteMeasure::new(space, q).expect("normalized"),
    )
}

/// Random scalar path with `knots` knots.
pub fn path(knots: usize, seed: u64) -> PLPath {
    let mut r = rng(seed);
    let t: Vec<f64> = (0..knots).map(|i| i as f64 / (knots - 1) as f64).collect();
    let v = (0..knots).map(|_| vec![r.random_range(-1.0..1.0)]).collect();
    PLPath::new(t, v).expect("valid knots")
}

/// Ramps of width `h` started every `h / 2`.
pub fn ramps(h: f64) -> Vec<PLPath> {
    ramp_family(h, h / 2.0, 1).expect("positive width")
}

pub fn walks(n_steps: usize, n_paths: usize, seed: u64) -> PathEnsemble {
    sample_walks(n_steps, n_paths, 1.0, seed).expect("positive sizes")
}
