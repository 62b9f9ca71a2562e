mod common;

use common::*;
use qcompact_core::prokhorov::{
    certify_net_cover, diameter_partition, prokhorov_distance, prokhorov_net, verify_qprokh,
    QProkhOptions,
};
use qcompact_core::{DiscreteMeasure, IndexSet, Verdict};
use rand::seq::SliceRandom;
use rand::Rng;

fn random_family(r: &mut rand_chacha::ChaCha8Rng) -> Vec<DiscreteMeasure> {
    let n = r.random_range(3..=15);
    let space = random_space(r, n);
    let count = r.random_range(1..=5);
    (0..count)
        .map(|_| DiscreteMeasure::new(space.clone(), random_mass(r, n, 0.6)).unwrap())
        .collect()
}

#[test]
fn net_pairing_is_within_the_claimed_radius() {
    let mut r = rng(2024);
    for _ in 0..40 {
        let fam = random_family(&mut r);
        let space = fam[0].space().clone();
        let lambda = [0.5, 1.0, 2.0][r.random_range(0..3)];
        let eps = r.random_range(0.2..0.6);
        let mut pts: Vec<usize> = (0..space.len()).collect();
        pts.shuffle(&mut r);
        pts.truncate(r.random_range(1..=space.len()));
        let cells = diameter_partition(&space, &pts, lambda * eps);
        for c in &cells {
            assert!(space.set_diameter(c.members()) < lambda * eps);
        }
        let outside: Vec<usize> = (0..space.len()).filter(|i| !pts.contains(i)).collect();
        let outside = IndexSet::new(outside).unwrap();
        let defect = fam.iter().map(|p| p.measure_of(&outside)).fold(0.0, f64::max);
        let t = (defect - eps / 2.0).max(0.0);
        let net = prokhorov_net(&fam, lambda, eps, &cells, t).unwrap();
        let cover = certify_net_cover(&fam, &net).unwrap();
        assert!(cover.holds, "radius {} above {}", cover.radius, cover.bound);
        for (p, q) in fam.iter().zip(&net.paired) {
            let direct = prokhorov_distance(p, q, lambda).unwrap().alpha;
            let oracle = oracle_prokhorov(&space, p.mass(), q.mass(), lambda);
            assert!((direct - oracle).abs() <= 1e-9);
            assert!(oracle <= t + eps + 1e-9);
            if net.materialized {
                assert!(net.net.iter().any(|m| m.mass() == q.mass()));
            }
        }
    }
}

#[test]
fn verify_qprokh_never_fails_on_random_families() {
    let mut r = rng(77);
    for _ in 0..15 {
        let fam = random_family(&mut r);
        let opts = QProkhOptions {
            lambda_grid: vec![0.5, 1.0, 2.0],
            eps: 0.3,
            eps_grid: vec![0.25, 0.5, 1.0],
            k_max: r.random_range(1..=4),
        };
        let rep = verify_qprokh(&fam, &opts).unwrap();
        assert!(rep.net_claim_ok && rep.upper_ok);
        assert_ne!(rep.verdict, Verdict::Fail);
        if let Some(lower) = rep.tightness.lower {
            assert!(lower <= rep.tightness.upper + 1e-12);
        }
    }
}
