use nalgebra::Vector3;
use proptest::prelude::*;
use relkin::hyperbolic::{self, ChartKind, Hodograph, RadialChart};
use relkin::velocity::star;

fn beta(max: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.01..max)
        .prop_filter("nonzero direction", |(x, y, z, _)| x * x + y * y + z * z > 1e-4)
        .prop_map(|(x, y, z, s)| Vector3::new(x, y, z).normalize() * s)
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in beta(0.9), b in beta(0.9), c in beta(0.9)) {
        let d = |x: &Vector3<f64>, y: &Vector3<f64>| hyperbolic::geodesic_distance(x, y).unwrap();
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-9);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
        prop_assert!(d(&a, &a).abs() < 1e-6);
    }

    #[test]
    fn left_composition_is_an_isometry(u in beta(0.8), a in beta(0.8), b in beta(0.8)) {
        let d0 = hyperbolic::geodesic_distance(&a, &b).unwrap();
        let d1 = hyperbolic::geodesic_distance(&star(&u, &a), &star(&u, &b)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-8);
    }

    #[test]
    fn charts_round_trip(b in 0.01..0.99f64, theta in 0.0..3.0f64) {
        let x = RadialChart { kind: ChartKind::Beta, value: b, theta, phi: 0.5 };
        for kind in [ChartKind::BigR, ChartKind::SmallR, ChartKind::Rho] {
            let y = hyperbolic::chart_convert(&x, kind).unwrap();
            let back = hyperbolic::chart_convert(&y, ChartKind::Beta).unwrap();
            prop_assert!((back.value - b).abs() < 1e-12);
        }
    }
}

#[test]
fn holonomy_of_circular_hodograph() {
    let beta = 0.3;
    let h = Hodograph::circular(beta, 1.0, 1.0).unwrap();
    let hol = hyperbolic::hodograph_holonomy(&h, 4000, 1).unwrap();
    let g = 1.0 / (1.0f64 - beta * beta).sqrt();
    assert!((hol.angle_z.abs() - 2.0 * std::f64::consts::PI * (g - 1.0)).abs() < 1e-8);
    let two = hyperbolic::hodograph_holonomy(&h, 4000, 2).unwrap();
    assert!((two.rotation - hol.rotation * hol.rotation).amax() < 1e-9);
}

#[test]
fn rapidity_domain() {
    assert!(hyperbolic::rapidity(1.0).is_err());
    assert!((hyperbolic::rapidity(0.5).unwrap() - 0.5f64.atanh()).abs() < 1e-15);
}
