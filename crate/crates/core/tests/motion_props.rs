use nalgebra::Vector4;
use proptest::prelude::*;
use relkin::frame::{self, RotatingFrame};
use relkin::rigid::{self, VelocityField, V4};
use relkin::worldline::{mdot, WorldLine};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn killing_fields_are_rigid(t in -1.0..1.0f64, x in 2.0..4.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let p = V4::new(t, x, y, z);
        let f = VelocityField::boost_killing(2.0);
        prop_assert!(rigid::born_residual(&f, &p, 1e-5).unwrap().direct < 1e-7);
        let u = f.u(&p).unwrap();
        prop_assert!((mdot(&u, &u) - 4.0).abs() < 1e-10);
        let r = VelocityField::rotation_killing(2.0, 0.5);
        let q = V4::new(t, y, z, x);
        prop_assert!(rigid::born_residual(&r, &q, 1e-5).unwrap().direct < 1e-7);
    }

    #[test]
    fn worldlines_have_unit_speed(tau in -3.0..3.0f64) {
        for wl in [WorldLine::hyperbolic(1.0, 2.0).unwrap(), WorldLine::circular(1.0, 1.0, 0.5).unwrap(), WorldLine::varying_acceleration(1.0, 0.5).unwrap()] {
            let j = wl.jet(tau);
            prop_assert!((mdot(&j.dz, &j.dz) - 1.0).abs() < 1e-9);
            prop_assert!(mdot(&j.dz, &j.ddz).abs() < 1e-9);
        }
    }

    #[test]
    fn rotating_disc_geometry(kappa in 0.2..2.0f64, c in 0.5..3.0f64, frac in 0.05..0.9f64) {
        let fr = RotatingFrame::new(kappa, c).unwrap();
        let rho = frac * c / kappa;
        prop_assert!(fr.circumference(rho).unwrap() > 2.0 * std::f64::consts::PI * rho);
        prop_assert!(fr.gaussian_curvature(rho).unwrap() < 0.0);
        prop_assert!(fr.circle_lapse(rho).unwrap() > 0.0);
    }
}

#[test]
fn trapezoid_with_extrapolation() {
    let err = |n| (frame::richardson_trapezoid(|x: f64| x.sin(), 0.0, std::f64::consts::PI, n).unwrap() - 2.0).abs();
    let (e1, e2) = (err(32), err(64));
    assert!(e2 < 1e-8);
    assert!(((e1 / e2).log2() - 4.0).abs() < 0.1);
}

#[test]
fn frame_rejects_the_light_cylinder() {
    let fr = RotatingFrame::new(1.0, 1.0).unwrap();
    assert!(fr.circumference(1.0).is_err());
    assert!(RotatingFrame::new(0.0, 1.0).is_err() || RotatingFrame::new(-1.0, 1.0).is_err());
}

#[test]
fn shear_witness_is_not_rigid() {
    let f = VelocityField::shear_witness(1.0, 0.3);
    let p = Vector4::new(0.0, 0.5, 0.2, 0.1);
    assert!(rigid::born_residual(&f, &p, 1e-5).unwrap().direct > 1e-3);
}
