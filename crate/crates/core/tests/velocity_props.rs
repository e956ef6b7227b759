use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use relkin::velocity::{self, gyr, star};

fn beta(max: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..max)
        .prop_filter("nonzero direction", |(x, y, z, _)| x * x + y * y + z * z > 1e-4)
        .prop_map(|(x, y, z, s)| Vector3::new(x, y, z).normalize() * s)
}

proptest! {
    #[test]
    fn composition_stays_subluminal(u in beta(0.999), v in beta(0.999)) {
        prop_assert!(star(&u, &v).norm() < 1.0);
    }

    #[test]
    fn gyration_is_a_rotation(u in beta(0.9), v in beta(0.9)) {
        let g = gyr(&u, &v);
        prop_assert!((g.transpose() * g - Matrix3::identity()).amax() < 1e-10);
        prop_assert!((g.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gyrocommutative_law(u in beta(0.9), v in beta(0.9)) {
        prop_assert!((star(&u, &v) - gyr(&u, &v) * star(&v, &u)).amax() < 1e-10);
    }

    #[test]
    fn relative_speed_symmetric(u in beta(0.9), v in beta(0.9)) {
        let a = velocity::relative_speed(&u, &v);
        let b = velocity::relative_speed(&v, &u);
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn thomas_angle_is_bounded(b1 in 0.05..0.99f64, b2 in 0.05..0.99f64, phi in 0.0..std::f64::consts::PI) {
        let g = |b: f64| 1.0 / (1.0 - b * b).sqrt();
        let th = velocity::thomas_angle(g(b1), g(b2), phi).unwrap();
        prop_assert!((0.0..=std::f64::consts::PI).contains(&th));
    }
}

#[test]
fn parallel_velocities_add_like_rapidities() {
    let (a, b) = (0.6f64, 0.7f64);
    let s = star(&Vector3::new(a, 0.0, 0.0), &Vector3::new(b, 0.0, 0.0));
    assert!((s[0] - (a + b) / (1.0 + a * b)).abs() < 1e-15);
    assert!((gyr(&Vector3::new(a, 0.0, 0.0), &Vector3::new(b, 0.0, 0.0)) - Matrix3::identity()).amax() < 1e-15);
}

#[test]
fn perpendicular_thomas_angle_sign() {
    let b = Vector3::new(0.78, 0.0, 0.0);
    let c = Vector3::new(0.0, 0.78, 0.0);
    assert!(velocity::gyr_angle_signed(&b, &c) < 0.0);
}
