mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use qcompact_core::prokhorov::{
    check_alpha, prokhorov_distance, prokhorov_distance_bisect, tv_distance, verify_coupling,
    Feasibility,
};
use qcompact_core::{DiscreteMeasure, FiniteMetricSpace};
use rand::Rng;

#[test]
fn sweep_matches_subset_oracle() {
    let mut r = rng(11);
    for _ in 0..80 {
        let (p, q) = random_pair(&mut r, 12);
        for &lambda in &[0.25, 1.0, 4.0] {
            let got = prokhorov_distance(&p, &q, lambda).unwrap().alpha;
            let want = oracle_prokhorov(p.space(), p.mass(), q.mass(), lambda);
            assert!((got - want).abs() <= 1e-9, "got {got}, oracle {want}");
        }
    }
}

#[test]
fn dirac_closed_form_on_a_grid() {
    for i in 1..=20 {
        for j in 1..=20 {
            let d = i as f64 * 0.15;
            let lambda = j as f64 * 0.2;
            let s = Arc::new(FiniteMetricSpace::from_coords(vec![vec![0.0], vec![d]]).unwrap());
            let p = DiscreteMeasure::dirac(s.clone(), 0).unwrap();
            let q = DiscreteMeasure::dirac(s, 1).unwrap();
            let got = prokhorov_distance(&p, &q, lambda).unwrap().alpha;
            assert!((got - (d / lambda).min(1.0)).abs() <= 1e-12);
        }
    }
}

#[test]
fn certificates_bracket_the_distance() {
    let mut r = rng(5);
    for _ in 0..100 {
        let (p, q) = random_pair(&mut r, 10);
        let lambda = [0.5, 1.0, 3.0][r.random_range(0..3)];
        let d = prokhorov_distance(&p, &q, lambda).unwrap();
        verify_coupling(&p, &q, &d.certificate).unwrap();
        if d.alpha > 1e-6 {
            match check_alpha(&p, &q, lambda, d.alpha - 1e-7).unwrap() {
                Feasibility::Infeasible(v) => {
                    // recompute the violated inequality from scratch
                    let inflated = p.space().inflate(&v.set, lambda * v.alpha).unwrap();
                    let lhs = p.measure_of(&v.set);
                    let rhs = q.measure_of(&inflated) + v.alpha;
                    assert!(lhs > rhs, "{lhs} <= {rhs}");
                }
                Feasibility::Feasible(_) => panic!("alpha below the distance was accepted"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric(seed in any::<u64>(), lambda in 0.1f64..5.0) {
        let (p, q) = random_pair(&mut rng(seed), 10);
        let a = prokhorov_distance(&p, &q, lambda).unwrap().alpha;
        let b = prokhorov_distance(&q, &p, lambda).unwrap().alpha;
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), lambda in 0.1f64..5.0) {
        let mut r = rng(seed);
        let (p, q) = random_pair(&mut r, 10);
        let w = DiscreteMeasure::new(p.space().clone(), random_mass(&mut r, p.space().len(), 0.6)).unwrap();
        let pq = prokhorov_distance(&p, &q, lambda).unwrap().alpha;
        let pw = prokhorov_distance(&p, &w, lambda).unwrap().alpha;
        let wq = prokhorov_distance(&w, &q, lambda).unwrap().alpha;
        prop_assert!(pq <= pw + wq + 1e-9);
    }

    #[test]
    fn monotone_in_lambda_and_below_tv(seed in any::<u64>()) {
        let (p, q) = random_pair(&mut rng(seed), 12);
        let tv = tv_distance(&p, &q).unwrap();
        prop_assert!((tv - total_variation(p.mass(), q.mass())).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for &lambda in &[0.01, 0.1, 0.5, 1.0, 4.0, 50.0] {
            let a = prokhorov_distance(&p, &q, lambda).unwrap().alpha;
            prop_assert!(a <= prev + 1e-9);
            prop_assert!(a <= tv + 1e-9);
            prev = a;
        }
        let dmin = p.space().min_positive_distance().unwrap();
        let tiny = prokhorov_distance(&p, &q, 1e-9 * dmin).unwrap().alpha;
        prop_assert!((tiny - tv).abs() <= 1e-6);
    }

    #[test]
    fn bisection_agrees(seed in any::<u64>(), lambda in 0.1f64..5.0) {
        let (p, q) = random_pair(&mut rng(seed), 10);
        let a = prokhorov_distance(&p, &q, lambda).unwrap().alpha;
        let b = prokhorov_distance_bisect(&p, &q, lambda, 1e-11).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn identity_of_indiscernibles(seed in any::<u64>(), lambda in 0.1f64..5.0) {
        let (p, _) = random_pair(&mut rng(seed), 10);
        prop_assert_eq!(prokhorov_distance(&p, &p, lambda).unwrap().alpha, 0.0);
    }
}
