use nalgebra::{Matrix4, Vector3};
use proptest::prelude::*;
use relkin::lorentz::{self, BoostRotationParams, ComponentTag};

fn beta(max: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..max)
        .prop_filter("nonzero direction", |(x, y, z, _)| x * x + y * y + z * z > 1e-4)
        .prop_map(|(x, y, z, s)| Vector3::new(x, y, z).normalize() * s)
}

fn params() -> impl Strategy<Value = BoostRotationParams> {
    (beta(0.9), beta(1.0), -3.0..3.0f64).prop_map(|(b, axis, angle)| {
        let axis = if axis.norm() > 1e-6 { axis } else { Vector3::z() };
        BoostRotationParams { beta: b, d: lorentz::axis_angle(&axis, angle) }
    })
}

proptest! {
    #[test]
    fn boosts_preserve_the_metric(b in beta(0.99)) {
        let l = lorentz::boost(&b).unwrap();
        prop_assert!(lorentz::defining_residual(&l) < 1e-9 * lorentz::gamma(&b).powi(2));
        prop_assert_eq!(lorentz::classify(&l, 1e-6).1, ComponentTag::ProperOrtho);
    }

    #[test]
    fn boost_inverse_is_opposite_velocity(b in beta(0.95)) {
        let prod = lorentz::boost(&b).unwrap() * lorentz::boost(&(-b)).unwrap();
        prop_assert!((prod - Matrix4::identity()).amax() < 1e-10);
    }

    #[test]
    fn polar_round_trip(p in params()) {
        let l = p.matrix();
        let pd = lorentz::polar_decompose(&l, 1e-9).unwrap();
        prop_assert!((pd.boost * pd.rotation - l).amax() < 1e-10);
        prop_assert!((pd.params.beta - p.beta).amax() < 1e-10);
        let sq = lorentz::polar_decompose_sqrt(&l, 1e-9).unwrap();
        prop_assert!((sq.boost - pd.boost).amax() < 1e-8);
    }

    #[test]
    fn reversed_polar_keeps_rotation(p in params()) {
        let l = p.matrix();
        let (r, b, _) = lorentz::polar_decompose_reversed(&l, 1e-9).unwrap();
        prop_assert!((r * b - l).amax() < 1e-9);
        let pd = lorentz::polar_decompose(&l, 1e-9).unwrap();
        prop_assert!((r - pd.rotation).amax() < 1e-9);
    }

    #[test]
    fn parameter_group_is_associative(a in params(), b in params(), c in params()) {
        let left = lorentz::compose_params(&lorentz::compose_params(&a, &b), &c);
        let right = lorentz::compose_params(&a, &lorentz::compose_params(&b, &c));
        prop_assert!((left.matrix() - right.matrix()).amax() < 1e-8);
        let id = lorentz::compose_params(&a, &lorentz::invert_params(&a));
        prop_assert!((id.matrix() - Matrix4::identity()).amax() < 1e-9);
    }
}

#[test]
fn components_of_the_group() {
    let mut p = Matrix4::identity();
    p[(1, 1)] = -1.0;
    let mut t = Matrix4::identity();
    t[(0, 0)] = -1.0;
    assert_eq!(lorentz::classify(&p, 1e-12), (true, ComponentTag::ImproperOrtho));
    assert_eq!(lorentz::classify(&t, 1e-12), (true, ComponentTag::ImproperAntichron));
    assert_eq!(lorentz::classify(&(p * t), 1e-12), (true, ComponentTag::ProperAntichron));
    assert!(lorentz::polar_decompose(&t, 1e-9).is_err());
    assert!(!lorentz::classify(&(Matrix4::identity() * 2.0), 1e-9).0);
}

#[test]
fn superluminal_boost_rejected() {
    assert!(lorentz::boost(&Vector3::new(0.6, 0.8, 0.0)).is_err());
    assert!(lorentz::boost(&Vector3::new(1.2, 0.0, 0.0)).is_err());
}
