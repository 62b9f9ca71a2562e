//! Independent oracles and instance generators shared by integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use qcompact_core::{DiscreteMeasure, FiniteMetricSpace, PLPath};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Prokhorov distance by enumerating every subset of P's support and
/// bisecting on alpha until the bracket is below 1e-11.
pub fn oracle_prokhorov(space: &FiniteMetricSpace, p: &[f64], q: &[f64], lambda: f64) -> f64 {
    let ps: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    let qs: Vec<usize> = (0..q.len()).filter(|&j| q[j] > 0.0).collect();
    assert!(ps.len() <= 16 && qs.len() <= 32);
    let subsets = 1usize << ps.len();
    // P mass of every subset of the support
    let mut p_mass = vec![0.0; subsets];
    for a in 1..subsets {
        let low = a.trailing_zeros() as usize;
        p_mass[a] = p_mass[a & (a - 1)] + p[ps[low]];
    }
    let feasible = |alpha: f64| {
        let reach: Vec<u64> = ps
            .iter()
            .map(|&i| {
                qs.iter()
                    .enumerate()
                    .filter(|&(_, &j)| space.d(i, j) <= lambda * alpha)
                    .fold(0u64, |m, (b, _)| m | (1 << b))
            })
            .collect();
        let mut nb = vec![0u64; subsets];
        for a in 1..subsets {
            let low = a.trailing_zeros() as usize;
            nb[a] = nb[a & (a - 1)] | reach[low];
        }
        (1..subsets).all(|a| {
            let qm: f64 = (0..qs.len())
                .filter(|b| nb[a] >> b & 1 == 1)
                .map(|b| q[qs[b]])
                .sum();
            p_mass[a] <= qm + alpha + 1e-12
        })
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if feasible(0.0) {
        return 0.0;
    }
    while hi - lo > 1e-11 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).max(0.0)).sum()
}

/// Distinct points: integer grid points (many tied distances) or uniform
/// reals, in the plane.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize) -> Arc<FiniteMetricSpace> {
    let coords: Vec<Vec<f64>> = if rng.random::<bool>() {
        let mut grid: Vec<(i32, i32)> = (0..5).flat_map(|x| (0..5).map(move |y| (x, y))).collect();
        grid.shuffle(rng);
        grid[..n].iter().map(|&(x, y)| vec![x as f64, y as f64]).collect()
    } else {
        (0..n)
            .map(|_| vec![rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)])
            .collect()
    };
    Arc::new(FiniteMetricSpace::from_coords(coords).unwrap())
}

/// Probability vector with roughly `density` of the entries positive.
pub fn random_mass(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<f64> {
    let mut m: Vec<f64> = (0..n)
        .map(|_| if rng.random::<f64>() < density { rng.random::<f64>() + 0.01 } else { 0.0 })
        .collect();
    if m.iter().all(|&x| x == 0.0) {
        m[rng.random_range(0..n)] = 1.0;
    }
    let s: f64 = m.iter().sum();
    m.iter_mut().for_each(|x| *x /= s);
    m
}

pub fn random_pair(rng: &mut ChaCha8Rng, max_n: usize) -> (DiscreteMeasure, DiscreteMeasure) {
    let n = rng.random_range(2..=max_n);
    let space = random_space(rng, n);
    let p = random_mass(rng, n, 0.7);
    let q = random_mass(rng, n, 0.7);
    (
        DiscreteMeasure::new(space.clone(), p).unwrap(),
        DiscreteMeasure::new(space, q).unwrap(),
    )
}

/// Random path with `knots` interior knots and coordinates in `[-1, 1]`.
pub fn random_path(rng: &mut ChaCha8Rng, dim: usize, knots: usize) -> PLPath {
    let mut t: Vec<f64> = (0..knots).map(|_| rng.random_range(0.001..0.999)).collect();
    t.push(0.0);
    t.push(1.0);
    t.sort_by(f64::total_cmp);
    t.dedup();
    let values = t
        .iter()
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    PLPath::new(t, values).unwrap()
}

/// `sup |x(s) - x(t)|` over a dense grid of pairs with `0 <= t - s <= delta`.
pub fn dense_modulus(x: &PLPath, delta: f64, steps: usize) -> f64 {
    let h = 1.0 / steps as f64;
    let vals: Vec<Vec<f64>> = (0..=steps).map(|i| x.eval(i as f64 * h)).collect();
    let reach = (delta / h).floor() as usize;
    let mut best: f64 = 0.0;
    for i in 0..=steps {
        for j in i..=(i + reach).min(steps) {
            best = best.max(dist(&vals[i], &vals[j]));
        }
    }
    best
}

pub fn dense_distance(x: &PLPath, y: &PLPath, steps: usize) -> f64 {
    (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            dist(&x.eval(t), &y.eval(t))
        })
        .fold(0.0, f64::max)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Random orthogonal matrix by Gram-Schmidt on a Gaussian-ish matrix.
pub fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

pub fn apply(m: &[Vec<f64>], p: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

/// Restricted k-center optimum by enumerating every k-subset of centers.
pub fn brute_kcenter(space: &FiniteMetricSpace, k: usize) -> f64 {
    let n = space.len();
    if k >= n {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let r = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|c| mask >> c & 1 == 1)
                    .map(|c| space.d(i, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        best = best.min(r);
    }
    best
}
