mod common;

use std::sync::Arc;

use nangle_core::algcore::{quiver_isomorphism, Module};
use nangle_core::angulation::heller::objects_up_to;
use nangle_core::angulation::verify::random_mor;
use nangle_core::angulation::weak::weakly_isomorphic;
use nangle_core::angulation::{FunctorCategory, Mor, NSigmaSequence};
use nangle_core::frobstab::Frobenius;
use nangle_core::standardcons::{angulation_oracle, calabi_yau_report, load_scenario, ClusterTiltingData, Scenario};
use nangle_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn standard(name: &str) -> (Arc<ClusterTiltingData>, Vec<Module>) {
    let path = common::data_dir().join("scenarios").join(format!("{name}.json"));
    match load_scenario(&path).unwrap() {
        Scenario::Standard { ctd, witnesses, .. } => (ctd, witnesses),
        Scenario::Heller { .. } => panic!("{name} is not a standard scenario"),
    }
}

fn random_alpha(ctd: &ClusterTiltingData, rng: &mut ChaCha8Rng) -> Mor {
    let cat = ctd.category().unwrap();
    let objects: Vec<_> = objects_up_to(&cat, 2).into_iter().filter(|x| !x.is_empty()).collect();
    let x = &objects[rng.gen_range(0..objects.len())];
    let y = &objects[rng.gen_range(0..objects.len())];
    random_mor(&cat, rng, x, y)
}

#[test]
fn preprojective_a2_cluster_tilting() {
    let (ctd, witnesses) = standard("preproj_a2");
    let s2 = &witnesses[0];
    assert_eq!(s2.dims, vec![0, 1]);
    let report = ctd.check_cluster_tilting(&witnesses).unwrap();
    assert!(report.passed && report.rigid && report.stable && !report.degenerate);
    assert_eq!(report.permutation, Some(vec![0]));
    let w = &report.witnesses[0];
    assert!(!w.in_add_t && !w.left_orthogonal && w.consistent);
    assert_eq!(ctd.suspension_order(), Some(1));

    let e = FunctorCategory::new(ctd.category().unwrap()).unwrap();
    assert_eq!(e.algebra.dim(), 1);
}

#[test]
fn single_summand_with_d_one_is_degenerate() {
    let (ctd, _) = standard("preproj_a2");
    let one = ClusterTiltingData::new(ctd.frob.clone(), ctd.summands.clone(), ctd.labels.clone(), 1).unwrap();
    let report = one.check_cluster_tilting(&[]).unwrap();
    assert!(report.degenerate && report.rigid);
    // Omega^{-1} S_1 = S_2, so T is not stable under the suspension.
    assert!(!report.stable);
    assert_eq!(one.suspension_order(), None);
}

#[test]
fn preprojective_a5_object_is_rigid_of_order_three() {
    let (ctd, witnesses) = standard("preproj_a5");
    let report = ctd.check_cluster_tilting(&witnesses).unwrap();
    assert!(report.rigid && report.stable, "{:?}", report.rigidity_failures);
    assert!(report.passed);
    assert_eq!(ctd.num_summands(), 10);
    assert_eq!(ctd.suspension_order(), Some(3));
}

#[test]
fn endomorphism_quiver_of_a5_object_is_the_triangle_quiver() {
    let (ctd, _) = standard("preproj_a5");
    let e = FunctorCategory::new(ctd.category().unwrap()).unwrap();
    let triangle = common::load_algebra("triangle10.json");
    assert!(quiver_isomorphism(&e.algebra.gabriel_quiver(), &triangle.gabriel_quiver()).is_some());
}

#[test]
fn approximation_of_summands_and_orthogonal_modules() {
    let (ctd, witnesses) = standard("preproj_a2");
    let s1 = &ctd.summands[0];
    let (obj, f) = ctd.left_approximation(s1).unwrap();
    assert_eq!(obj, vec![0]);
    assert!(ctd.frob.stably_isomorphic(&f.target, s1).unwrap().is_some());
    assert!(!ctd.frob.stably_zero(&f));

    // S_2 = Omega^{-1} S_1 has no stable maps to S_1.
    let s2 = &witnesses[0];
    let (obj, f) = ctd.left_approximation(s2).unwrap();
    assert!(obj.is_empty());
    assert!(f.target.is_zero());
    assert!(ctd.is_left_approximation(&f, &obj));
}

#[test]
fn approximations_factor_every_map_to_t() {
    let (ctd, _) = standard("preproj_a3");
    let mods = common::sample_modules(&ctd.frob, 10, 21);
    for m in mods.iter().chain(ctd.summands.iter()) {
        let (obj, f) = ctd.left_approximation(m).unwrap();
        assert!(f.is_homomorphism());
        assert!(ctd.is_left_approximation(&f, &obj));
        for (i, t) in ctd.summands.iter().enumerate() {
            let sh = ctd.frob.stable_hom(m, t);
            assert!(obj.iter().filter(|&&a| a == i).count() <= sh.dim());
        }
    }
}

#[test]
fn identity_and_zero_angles() {
    for name in ["preproj_a2", "preproj_a3"] {
        let (ctd, _) = standard(name);
        let cat = ctd.category().unwrap();
        for a in 0..ctd.num_summands() {
            let x = vec![a];
            let id = ctd.construct_angle(&Mor::identity(&cat, &x)).unwrap();
            let cone = &id.tower.halves[1];
            assert_eq!(ctd.frob.stable_hom(cone, cone).dim(), 0);
            assert!(id.sequence.is_exact(&cat));
            let t = NSigmaSequence::trivial(&cat, ctd.n(), &x, 1).unwrap();
            assert!(weakly_isomorphic(&cat, &id.sequence, &t, 2, 1 << 12).is_some(), "{name}");

            let zero = ctd.construct_angle(&Mor::zero(&cat, &x, &x)).unwrap();
            assert!(zero.sequence.is_exact(&cat), "{name}");
        }
    }
}

#[test]
fn oracle_contains_constructions_and_rotations() {
    let (ctd, _) = standard("preproj_a3");
    let sa = angulation_oracle(ctd.clone(), 64).unwrap();
    sa.theta_check.clone().unwrap();
    let cat = sa.oracle.cat();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let angle = ctd.construct_angle(&random_alpha(&ctd, &mut rng)).unwrap();
        let x = angle.sequence;
        assert!(sa.oracle.is_member(&x).unwrap());
        assert!(sa.oracle.is_member(&x.rotate_left(cat)).unwrap());
        assert!(sa.oracle.is_member(&x.rotate_right(cat)).unwrap());
        // Perturbing alpha_2 by a map that breaks the complex.
        let mut y = x.clone();
        let bump = random_mor(cat, &mut rng, &x.objects[1], &x.objects[2]);
        y.maps[1] = y.maps[1].add(cat, &bump);
        if !y.is_exact(cat) {
            assert!(!sa.oracle.is_member(&y).unwrap());
        }
    }
}

#[test]
fn theta_is_natural_in_every_scenario() {
    for name in ["preproj_a2", "preproj_a3", "preproj_a5", "cyclic3"] {
        let (ctd, _) = standard(name);
        let sa = angulation_oracle(ctd, 64).unwrap();
        assert!(sa.theta_check.is_ok(), "{name}: {:?}", sa.theta_check);
    }
}

#[test]
fn calabi_yau_reports() {
    let (a2, _) = standard("preproj_a2");
    let r = calabi_yau_report(&a2, 64).unwrap();
    assert!(r.degenerate);
    assert_eq!(r.cy_dimension, Some(3));

    let (a3, _) = standard("preproj_a3");
    let r = calabi_yau_report(&a3, 64).unwrap();
    assert_eq!((r.n, r.serre_power, r.cy_dimension), (4, Some(1), Some(3)));
    assert!(r.passed && r.mismatches.is_empty() && r.closure_complete);

    let (partial, _) = standard("preproj_a3_partial");
    assert!(matches!(calabi_yau_report(&partial, 64), Err(Error::EndNotSelfInjective)));
}

/// Least `k` with `Omega^{-k} m` isomorphic to `m`.
fn cosyzygy_period(frob: &Frobenius, m: &Module) -> usize {
    let mut x = frob.cosyzygy(m).module.clone();
    for k in 1..=24 {
        if frob.stably_isomorphic(&x, m).unwrap().is_some() {
            return k;
        }
        x = frob.cosyzygy(&x).module.clone();
    }
    panic!("no period up to 24");
}

#[test]
fn suspension_order_divides_the_cosyzygy_period() {
    for name in ["preproj_a2", "preproj_a3", "preproj_a5", "cyclic3"] {
        let (ctd, _) = standard(name);
        let mut lcm = 1;
        for t in &ctd.summands {
            let p = cosyzygy_period(&ctd.frob, t);
            let g = (1..=lcm.min(p)).rev().find(|g| lcm % g == 0 && p % g == 0).unwrap();
            lcm = lcm / g * p;
        }
        let order = ctd.suspension_order().unwrap();
        assert_eq!(lcm % order, 0, "{name}: order {order}, period {lcm}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn constructed_towers_are_exact_and_vanish(seed in 0u64..1000) {
        for name in ["preproj_a3", "cyclic3"] {
            let (ctd, _) = standard(name);
            let cat = ctd.category().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let angle = ctd.construct_angle(&random_alpha(&ctd, &mut rng)).unwrap();
            prop_assert!(angle.sequence.is_exact(&cat));
            prop_assert!(ctd.check_tower_vanishing(&angle.tower).is_empty());
            for (m, f) in angle.tower.approximations.iter().enumerate() {
                prop_assert!(ctd.is_left_approximation(f, &angle.sequence.objects[m + 2]));
            }
            // Consecutive maps compose to zero.
            let x = &angle.sequence;
            for i in 0..x.arity() - 1 {
                prop_assert!(x.maps[i + 1].compose(&cat, &x.maps[i]).is_zero());
            }
        }
    }
}
