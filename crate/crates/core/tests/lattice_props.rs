use proptest::prelude::*;
use relkin::lattice::{self, GridBox, GridPoint, Lattice, SeparationMode};

const SIDE: i64 = 21;

fn lat(mode: SeparationMode) -> Lattice {
    Lattice::new(GridBox::centred(2, SIDE).unwrap(), mode)
}

fn points() -> impl Strategy<Value = Vec<GridPoint>> {
    prop::collection::vec((-8i64..=8, -8i64..=8).prop_map(|(t, x)| vec![t, x]), 1..4)
}

fn mode() -> impl Strategy<Value = SeparationMode> {
    prop_oneof![Just(SeparationMode::Causal), Just(SeparationMode::Chronological)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triple_complement_is_complement(m in mode(), pts in points()) {
        let l = lat(m);
        let s = l.region(&pts).unwrap();
        let c = l.complement(&s);
        prop_assert_eq!(l.complement(&l.complement(&c)), c);
        prop_assert!(s.is_subset(&l.completion(&s)));
    }

    #[test]
    fn completion_is_idempotent(m in mode(), pts in points()) {
        let l = lat(m);
        let s = l.completion(&l.region(&pts).unwrap());
        prop_assert!(l.is_complete(&s));
        prop_assert_eq!(l.completion(&s), s);
    }

    #[test]
    fn complement_reverses_inclusion(m in mode(), a in points(), b in points()) {
        let l = lat(m);
        let ra = l.region(&a).unwrap();
        let rab = ra.union(&l.region(&b).unwrap());
        prop_assert!(l.complement(&rab).is_subset(&l.complement(&ra)));
    }

    #[test]
    fn meet_and_join_bound(m in mode(), a in points(), b in points()) {
        let l = lat(m);
        let (x, y) = (l.completion(&l.region(&a).unwrap()), l.completion(&l.region(&b).unwrap()));
        let (mt, jn) = (l.meet(&x, &y).unwrap(), l.join(&x, &y).unwrap());
        prop_assert!(mt.is_subset(&x) && mt.is_subset(&y));
        prop_assert!(x.is_subset(&jn) && y.is_subset(&jn));
    }
}

#[test]
fn causal_counterexample_fails_orthomodularity() {
    let l = Lattice::new(GridBox::centred(2, 41).unwrap(), SeparationMode::Causal);
    let ce = lattice::fig2_counterexample(&l, 4, 2).unwrap();
    assert!(ce.a.is_subset(&ce.b));
    assert!(!ce.report.holds);
}

#[test]
fn chron_grid_loses_orthomodularity_at_unit_scale() {
    // a single point inside a small complete region: the grid cones are too
    // coarse for b meet (a join b') to shrink back to a
    let l = Lattice::new(GridBox::centred(2, 41).unwrap(), SeparationMode::Chronological);
    let b = l.completion(&l.region(&[vec![8, 9], vec![12, 10], vec![8, 8]]).unwrap());
    let a = l.region(&[vec![8, 9]]).unwrap();
    assert!(a.is_subset(&b) && l.is_complete(&a));
    let r = l.check_orthomodular(&a, &b).unwrap();
    assert!(!r.holds);
    assert_eq!(l.points(&r.excess), vec![vec![9, 9]]);
}

#[test]
fn single_points_are_complete() {
    for m in [SeparationMode::Causal, SeparationMode::Chronological] {
        let l = lat(m);
        let p = l.region(&[vec![1, 2]]).unwrap();
        assert!(l.is_complete(&p));
    }
}
