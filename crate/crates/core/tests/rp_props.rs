use proptest::prelude::*;
use relkin::rp;

proptest! {
    #[test]
    fn lorentz_regime_is_commutative_and_bounded(v in -0.99..0.99f64, w in -0.99..0.99f64) {
        let a = rp::compose_velocity_k(v, w, -1.0).unwrap();
        let b = rp::compose_velocity_k(w, v, -1.0).unwrap();
        prop_assert!((a - b).abs() < 1e-14);
        prop_assert!(a.abs() < 1.0);
    }

    #[test]
    fn galilei_regime_adds(v in -10.0..10.0f64, w in -10.0..10.0f64) {
        prop_assert!((rp::compose_velocity_k(v, w, 0.0).unwrap() - (v + w)).abs() < 1e-12);
    }

    #[test]
    fn boost_matrices_have_unit_determinant(v in -0.9..0.9f64, k in -1.0..1.0f64) {
        let m = rp::boost_matrix_k(v, k).unwrap();
        prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn functional_equations_hold(v in -0.9..0.9f64, w in -0.9..0.9f64, k in -1.0..0.0f64) {
        let (r1, r2) = rp::functional_equation_residuals(v, w, k).unwrap();
        prop_assert!(r1 < 1e-12 && r2 < 1e-12);
    }
}

#[test]
fn euclidean_regime_wraps() {
    assert!(rp::compose_velocity_k(0.5, 2.0, 1.0).is_err());
    let t = rp::rotation_angle(1.0, 1.0).unwrap();
    assert!((t - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}
