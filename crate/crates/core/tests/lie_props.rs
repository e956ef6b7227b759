use num_traits::Zero;
use proptest::prelude::*;
use relkin::lie::{self, PhysicalAlgebra, Q};

fn mu() -> impl Strategy<Value = Q> {
    (0i64..20, 1i64..20).prop_map(|(n, d)| Q::new(n, d))
}

fn coeffs() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-5i64..5, 1i64..4).prop_map(|(n, d)| Q::new(n, d)), 10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poincare_family_is_a_lie_algebra(m in mu()) {
        let t = lie::poincare_table(m);
        prop_assert!(t.antisymmetry_residual().is_zero());
        prop_assert!(t.jacobi_residual().is_zero());
    }

    #[test]
    fn defining_rep_is_a_homomorphism(m in mu(), x in coeffs(), y in coeffs()) {
        let alg = PhysicalAlgebra::new(m).unwrap();
        let (x, y) = (alg.vector(x).unwrap(), alg.vector(y).unwrap());
        let lhs = alg.defining_rep(&alg.bracket(&x, &y).unwrap()).unwrap();
        let (rx, ry) = (alg.defining_rep(&x).unwrap(), alg.defining_rep(&y).unwrap());
        prop_assert_eq!(lhs, rx.commutator(&ry));
    }

    #[test]
    fn bracket_is_bilinear_and_antisymmetric(m in mu(), x in coeffs(), y in coeffs()) {
        let t = lie::poincare_table(m);
        let xy = t.bracket(&x, &y);
        let yx = t.bracket(&y, &x);
        prop_assert!(xy.iter().zip(&yx).all(|(a, b)| (*a + *b).is_zero()));
    }
}

#[test]
fn translations_form_an_ideal() {
    let t = lie::poincare_table(Q::new(1, 1));
    let mask: Vec<bool> = (0..10).map(|i| i >= lie::P).collect();
    assert!(t.is_ideal(&mask));
    let rot: Vec<bool> = (0..10).map(|i| i < lie::K).collect();
    assert!(t.is_subalgebra(&rot));
    assert!(!t.is_ideal(&rot));
}

#[test]
fn central_extension_needs_galilei() {
    assert!(PhysicalAlgebra::central_extend_mass(Q::new(0, 1), Q::new(1, 1)).is_ok());
    let ext = PhysicalAlgebra::central_extend_mass(Q::new(0, 1), Q::new(2, 1)).unwrap();
    assert_eq!(ext.dim(), 11);
}
