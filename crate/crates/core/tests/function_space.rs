mod common;

use common::*;
use proptest::prelude::*;
use qcompact_core::function_space::{
    aa_net, bridge_gap, bridge_max_distance, chebyshev_center, jung_check, modulus, regular_simplex,
    uniform_distance, verify_qaa, PLPath, NET_TOL,
};
use qcompact_core::Verdict;
use rand::Rng;

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

#[test]
fn distance_examples_match_dense_grid() {
    let x = PLPath::segment(vec![0.0], vec![1.0]).unwrap();
    let y = PLPath::segment(vec![1.0], vec![0.0]).unwrap();
    let exact = uniform_distance(&x, &y).unwrap();
    assert!((exact - dense_distance(&x, &y, 10_000)).abs() <= 1e-9);
    assert_eq!(exact, 1.0);
}

#[test]
fn modulus_examples_match_dense_grid() {
    let x = PLPath::segment(vec![0.0], vec![1.0]).unwrap();
    assert!((modulus(&x, 0.25).unwrap() - dense_modulus(&x, 0.25, 4000)).abs() <= 1e-9);
    let saw = PLPath::new(vec![0.0, 0.5, 1.0], vec![vec![0.0], vec![1.0], vec![0.0]]).unwrap();
    let m = modulus(&saw, 0.2).unwrap();
    assert!((m - 0.4).abs() <= 1e-12);
    assert!((m - dense_modulus(&saw, 0.2, 4000)).abs() <= 1e-9);
}

#[test]
fn regular_simplices_attain_jung_bound() {
    for dim in 1..=3 {
        let r = jung_check(&regular_simplex(dim)).unwrap();
        assert!((r.radius - r.upper).abs() <= 1e-9);
    }
}

#[test]
fn random_families_respect_the_net_certificate() {
    let mut r = rng(31);
    for round in 0..10 {
        let dim = 1 + round % 3;
        let fam: Vec<PLPath> = (0..8).map(|_| random_path(&mut r, dim, 6)).collect();
        let delta = r.random_range(0.05..0.4);
        let alpha = fam.iter().map(|x| modulus(x, delta).unwrap()).fold(0.0, f64::max);
        let m = fam.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let eps = 0.02;
        let net = aa_net(&fam, delta, alpha, m, eps).unwrap();
        assert_eq!(net.window_slack, 0.0);
        for (fit, x) in net.per_sample.iter().zip(&fam) {
            let achieved = uniform_distance(&net.members[fit.member], x).unwrap();
            assert_eq!(achieved, fit.achieved);
            assert!(achieved <= net.kappa * alpha + eps + NET_TOL);
        }
    }
}

#[test]
fn ramp_family_in_the_plane() {
    let fam = qcompact_core::function_space::ramp_family(0.01, 0.005, 2).unwrap();
    let r = verify_qaa(&fam, &[0.05], 1.0, 0.005).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let bound = (2.0f64 / 6.0).sqrt() * r.rows[0].alpha + 0.005;
    assert!(r.rows[0].covering_radius <= bound + NET_TOL);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uniform_distance_is_a_metric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=3);
        let x = random_path(&mut r, dim, 5);
        let y = random_path(&mut r, dim, 7);
        let z = random_path(&mut r, dim, 3);
        let dxy = uniform_distance(&x, &y).unwrap();
        prop_assert_eq!(uniform_distance(&x, &x).unwrap(), 0.0);
        prop_assert_eq!(dxy, uniform_distance(&y, &x).unwrap());
        let via = uniform_distance(&x, &z).unwrap() + uniform_distance(&z, &y).unwrap();
        prop_assert!(dxy <= via + 1e-12);
        prop_assert!(dense_distance(&x, &y, 5000) <= dxy + 1e-12);
        let at_knots = x
            .knots()
            .iter()
            .chain(y.knots())
            .map(|&t| dist(&x.eval(t), &y.eval(t)))
            .fold(0.0, f64::max);
        prop_assert!((at_knots - dxy).abs() <= 1e-12);
    }

    #[test]
    fn modulus_properties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_path(&mut r, 2, 6);
        let slope = x
            .knots()
            .windows(2)
            .zip(x.values().windows(2))
            .map(|(t, v)| dist(&v[0], &v[1]) / (t[1] - t[0]))
            .fold(0.0, f64::max);
        let mut prev = 0.0;
        for &d in &[0.01, 0.05, 0.1, 0.3, 0.7, 1.0, 2.0] {
            let m = modulus(&x, d).unwrap();
            prop_assert!(m >= prev);
            prop_assert!(m <= 2.0 * x.norm() + 1e-12);
            let dense = dense_modulus(&x, d, 600);
            prop_assert!(dense <= m + 1e-12);
            prop_assert!(m - dense <= 3.0 * slope / 600.0 + 1e-12);
            prev = m;
        }
        let v: Vec<f64> = (0..2).map(|_| r.random_range(-3.0..3.0)).collect();
        let affine = PLPath::segment(vec![0.5, -0.5], vec![0.5 + v[0], -0.5 + v[1]]).unwrap();
        let speed = dist(&v, &[0.0, 0.0]);
        let d = r.random_range(0.01..1.0);
        prop_assert!((modulus(&affine, d).unwrap() - speed * d).abs() <= 1e-12);
    }

    #[test]
    fn chebyshev_radius_under_rigid_motion_and_scaling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=5);
        let count = r.random_range(1..=25);
        let pts = random_points(&mut r, count, dim);
        let base = chebyshev_center(&pts).unwrap();
        let rot = random_rotation(&mut r, dim);
        let shift: Vec<f64> = (0..dim).map(|_| r.random_range(-10.0..10.0)).collect();
        let moved: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| apply(&rot, p).iter().zip(&shift).map(|(a, b)| a + b).collect())
            .collect();
        prop_assert!((chebyshev_center(&moved).unwrap().radius - base.radius).abs() < 1e-9);
        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|c| 3.5 * c).collect()).collect();
        prop_assert!((chebyshev_center(&scaled).unwrap().radius - 3.5 * base.radius).abs() < 1e-9);
        for p in &pts {
            prop_assert!(dist(p, &base.center) <= base.radius + 1e-9);
        }
        prop_assert!(base.support.len() <= dim + 1);
    }

    #[test]
    fn one_dimensional_center_is_the_midrange(seed in any::<u64>()) {
        let mut r = rng(seed);
        let count = r.random_range(1..=30);
        let pts = random_points(&mut r, count, 1);
        let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let b = chebyshev_center(&pts).unwrap();
        prop_assert!((b.radius - (hi - lo) / 2.0).abs() <= 1e-12);
        prop_assert!((b.center[0] - (hi + lo) / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn jung_sandwich(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = [1, 2, 3, 8][r.random_range(0..4)];
        let count = r.random_range(2..=40);
        let pts = random_points(&mut r, count, dim);
        let rep = jung_check(&pts).unwrap();
        prop_assert!(rep.ok);
    }

    #[test]
    fn bridge_stays_in_the_common_ball(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=4);
        let y: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
        let rad = r.random_range(0.0..2.0);
        let in_ball = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            let dir: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
            let n = dist(&dir, &vec![0.0; dim]).max(1e-12);
            let s = rad * r.random::<f64>();
            y.iter().zip(&dir).map(|(a, d)| a + s * d / n).collect()
        };
        let (c1, c2) = (in_ball(&mut r), in_ball(&mut r));
        let exact = bridge_max_distance(&c1, &c2, &y);
        prop_assert!(exact <= rad + 1e-12);
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            prop_assert!(dist(&lerp(&c1, &c2, t), &y) <= exact + 1e-12);
        }
    }

    #[test]
    fn bridges_stay_close(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=4);
        let eps = r.random_range(0.0..1.0);
        let near = |r: &mut rand_chacha::ChaCha8Rng, c: &[f64]| -> Vec<f64> {
            let dir: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
            let n = dist(&dir, &vec![0.0; dim]).max(1e-12);
            let s = eps * r.random::<f64>();
            c.iter().zip(&dir).map(|(a, d)| a + s * d / n).collect()
        };
        let c1: Vec<f64> = (0..dim).map(|_| r.random_range(-5.0..5.0)).collect();
        let c2: Vec<f64> = (0..dim).map(|_| r.random_range(-5.0..5.0)).collect();
        let (y1, y2) = (near(&mut r, &c1), near(&mut r, &c2));
        let exact = bridge_gap(&c1, &c2, &y1, &y2);
        prop_assert!(exact <= eps + 1e-12);
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            prop_assert!(dist(&lerp(&c1, &c2, t), &lerp(&y1, &y2, t)) <= exact + 1e-12);
        }
    }
}
