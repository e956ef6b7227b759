use nalgebra::Vector3;
use proptest::prelude::*;
use relkin_verify::oracle;

fn beta() -> impl Strategy<Value = Vector3<f64>> {
    prop::array::uniform3(-0.55..0.55f64).prop_map(Vector3::from)
}

proptest! {
    #[test]
    fn oracle_boosts_are_lorentz(b in beta()) {
        let l = oracle::boost(&b);
        prop_assert!((l.transpose() * oracle::eta() * l - oracle::eta()).amax() < 1e-12);
        prop_assert!((oracle::velocity_of(&l) - b).amax() < 1e-12);
    }

    #[test]
    fn both_polar_oracles_agree(b in beta(), axis in prop::array::uniform3(-1.0..1.0f64), angle in -3.0..3.0f64) {
        let axis = Vector3::from(axis);
        prop_assume!(axis.norm() > 1e-3);
        let l = oracle::lorentz(&b, &oracle::rodrigues(&axis.normalize(), angle));
        let (b1, r1) = oracle::polar(&l);
        let (b2, r2) = oracle::polar_by_velocity(&l);
        prop_assert!((b1 - b2).amax() < 1e-9 && (r1 - r2).amax() < 1e-9);
    }
}

#[test]
fn square_root_oracle() {
    let a = oracle::boost(&Vector3::new(0.3, 0.1, -0.2));
    let s = oracle::spd_sqrt(&(a * a));
    assert!((s - a).amax() < 1e-12);
}

#[test]
fn golden_section_finds_the_peak() {
    let (x, y) = oracle::golden_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, 0.0, 3.0);
    assert!((x - 1.3).abs() < 1e-7 && (y - 2.0).abs() < 1e-12);
}

#[test]
fn brute_force_diamond_is_symmetric() {
    let d = oracle::closed_diamond_bruteforce(10, [-2, 0], [2, 0]);
    assert_eq!(d.len(), 13);
    assert!(d.iter().all(|&[t, x]| d.contains(&[-t, -x])));
}

#[test]
fn chord_product_tends_to_identity_for_small_loops() {
    let r = oracle::chord_holonomy(1e-3, 1.0, 200);
    assert!((r - nalgebra::Matrix3::identity()).amax() < 1e-5);
}

#[test]
fn reports_are_reproducible() {
    let a = relkin_verify::run(3, None, &[1, 5, 8]);
    let b = relkin_verify::run(3, None, &[1, 5, 8]);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.criteria.iter().map(|c| c.id).collect::<Vec<_>>(), vec![1, 5, 8]);
}

#[test]
fn tolerance_override_replaces_numeric_tolerances_only() {
    let r = relkin_verify::run(3, Some(1e-30), &[8]);
    let crit = &r.criteria[0];
    assert!(!crit.pass);
    assert!(crit.checks.iter().filter(|c| c.tol > 0.0).all(|c| c.tol == 1e-30));
    assert!(crit.checks.iter().any(|c| c.tol == 0.0 && c.pass));
}
