use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use relkin::geometry::{self, CausalKind, Event, Metric, SpacetimeVector};
use relkin::lorentz::{self, BoostRotationParams};

fn vec4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-5.0..5.0f64)
}

proptest! {
    #[test]
    fn reflection_is_an_involutive_isometry(v in vec4(), x in vec4(), y in vec4()) {
        let m = Metric::minkowski4();
        let v = SpacetimeVector::from_slice(&v);
        prop_assume!(geometry::square(&v, &m).unwrap().abs() > 1e-2);
        let (x, y) = (SpacetimeVector::from_slice(&x), SpacetimeVector::from_slice(&y));
        let (rx, ry) = (geometry::reflect(&v, &x, &m).unwrap(), geometry::reflect(&v, &y, &m).unwrap());
        let before = geometry::inner(&x, &y, &m).unwrap();
        let after = geometry::inner(&rx, &ry, &m).unwrap();
        prop_assert!((before - after).abs() < 1e-8 * (1.0 + before.abs()));
        let back = geometry::reflect(&v, &rx, &m).unwrap();
        prop_assert!(back.sub(&x).norm_inf() < 1e-9);
    }

    #[test]
    fn raise_lower_round_trip(x in vec4()) {
        let m = Metric::minkowski4();
        let v = SpacetimeVector::from_slice(&x);
        prop_assert!(geometry::raise(&geometry::lower(&v, &m), &m).sub(&v).norm_inf() == 0.0);
    }

    #[test]
    fn lorentz_maps_factor_into_few_reflections(bx in -0.6..0.6f64, by in -0.6..0.6f64, angle in -3.0..3.0f64) {
        let p = BoostRotationParams { beta: nalgebra::Vector3::new(bx, by, 0.1), d: lorentz::axis_angle(&nalgebra::Vector3::z(), angle) };
        let l = DMatrix::from_fn(4, 4, |i, j| p.matrix()[(i, j)]);
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0]));
        let vs = lorentz::cartan_dieudonne_factor(&l, &g).unwrap();
        prop_assert!(vs.len() <= 7);
        let back = lorentz::recompose_reflections(&vs, &g).unwrap();
        prop_assert!((back - l).amax() < 1e-8);
    }
}

#[test]
fn causal_classes() {
    let m = Metric::minkowski4();
    let kind = |xs: &[f64]| geometry::causal_class(&SpacetimeVector::from_slice(xs), None, &m).unwrap().kind;
    assert_eq!(kind(&[2.0, 1.0, 0.0, 0.0]), CausalKind::Timelike);
    assert_eq!(kind(&[1.0, 2.0, 0.0, 0.0]), CausalKind::Spacelike);
    assert_eq!(kind(&[1.0, 0.6, 0.8, 0.0]), CausalKind::Lightlike);
    assert!(geometry::causal_class(&SpacetimeVector::from_slice(&[0.0; 4]), None, &m).is_err());
}

#[test]
fn radar_legs_give_squared_distance() {
    let m = Metric::minkowski4();
    let p = Event::from_slice(&[0.0, 3.0, 0.0, 0.0]);
    let r = Event::from_slice(&[0.0, 0.0, 0.0, 0.0]);
    let v = SpacetimeVector::from_slice(&[1.0, 0.0, 0.0, 0.0]);
    let out = geometry::radar_products(&p, &r, &v, &r, &m).unwrap();
    assert!((out.sq_dist - 9.0).abs() < 1e-12);
    assert!((out.radar - 9.0).abs() < 1e-12);
    assert!(out.is_midpoint);
}
