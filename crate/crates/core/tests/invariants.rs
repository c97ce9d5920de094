use proptest::prelude::*;

use klyachko::region::{enumerate_in_polytope, Combine};
use klyachko::{
    compute_diagram, hilbert_oracle, hilbert_value, reconstruct_generators, saturate_oracle,
    sum_diagram, Character, Fan, Interval, LatticeRegion, Monomial, MonomialIdeal, SearchBox,
};

fn ideal_strategy(nvars: usize) -> impl Strategy<Value = MonomialIdeal> {
    prop::collection::vec(prop::collection::vec(0u32..=3, nvars), 1..=3).prop_map(move |gens| {
        MonomialIdeal::new(nvars, gens.into_iter().map(Monomial).collect()).unwrap()
    })
}

fn interval() -> impl Strategy<Value = Interval> {
    (prop::option::of(-3i64..=3), prop::option::of(-3i64..=3))
        .prop_map(|(lo, hi)| Interval::new(lo, hi))
}

// Regions on the 2-dimensional cone [1, 2] of P2, built from up to three cells.
fn region_strategy() -> impl Strategy<Value = Vec<(Interval, Interval)>> {
    prop::collection::vec((interval(), interval()), 0..=3)
}

fn build(fan: &Fan, cells: &[(Interval, Interval)]) -> LatticeRegion {
    let frame = fan.frame(fan.cone_index(&[1, 2]).unwrap()).clone();
    let mut r = LatticeRegion::empty(frame.clone());
    for (a, b) in cells {
        r = r
            .union(&LatticeRegion::from_bounds(frame.clone(), vec![*a, *b]))
            .unwrap();
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn de_morgan(a in region_strategy(), b in region_strategy(), c in region_strategy()) {
        let fan = Fan::catalog("P2").unwrap();
        let (a, b, c) = (build(&fan, &a), build(&fan, &b), build(&fan, &c));
        let lhs = a.difference(&b.union(&c).unwrap()).unwrap();
        let rhs = a.difference(&b).unwrap().intersect(&a.difference(&c).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
        let lhs = a.difference(&b.intersect(&c).unwrap()).unwrap();
        let rhs = a.difference(&b).unwrap().union(&a.difference(&c).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn intersection_commutes_and_pointwise(a in region_strategy(), b in region_strategy(), x in -5i64..=5, y in -5i64..=5) {
        let fan = Fan::catalog("P2").unwrap();
        let (a, b) = (build(&fan, &a), build(&fan, &b));
        let ab = a.intersect(&b).unwrap();
        prop_assert!(ab.equals(&b.intersect(&a).unwrap()).unwrap());
        let m = Character(vec![x, y]);
        prop_assert_eq!(ab.contains(&m), a.contains(&m) && b.contains(&m));
        prop_assert_eq!(a.difference(&b).unwrap().contains(&m), a.contains(&m) && !b.contains(&m));
    }

    #[test]
    fn shift_round_trip(a in region_strategy(), x in -4i64..=4, y in -4i64..=4) {
        let fan = Fan::catalog("P2").unwrap();
        let a = build(&fan, &a);
        let tau = Character(vec![x, y]);
        let back = a.shift(&tau).shift(&Character(vec![-x, -y]));
        prop_assert!(back.equals(&a).unwrap());
        let m = Character(vec![1, -2]);
        prop_assert_eq!(a.shift(&tau).contains(&m), a.contains(&Character(vec![1 - x, -2 - y])));
    }

    #[test]
    fn saturation_is_idempotent(i in ideal_strategy(4)) {
        let fan = Fan::catalog("P1xP1").unwrap();
        let sat = saturate_oracle(&i, &fan);
        prop_assert_eq!(saturate_oracle(&sat, &fan), sat.clone());
        let d = compute_diagram(&i, &fan).unwrap();
        prop_assert!(d.equals(&compute_diagram(&sat, &fan).unwrap()).unwrap());
    }

    #[test]
    fn reconstruction_recovers_saturation(i in ideal_strategy(3)) {
        let fan = Fan::catalog("P2").unwrap();
        let d = compute_diagram(&i, &fan).unwrap();
        let r = reconstruct_generators(&d, &SearchBox::Default).unwrap();
        prop_assert_eq!(r.ideal, saturate_oracle(&i, &fan));
    }

    #[test]
    fn sum_of_diagrams(i in ideal_strategy(3), j in ideal_strategy(3)) {
        let fan = Fan::catalog("P2").unwrap();
        let di = compute_diagram(&i, &fan).unwrap();
        let dj = compute_diagram(&j, &fan).unwrap();
        let both = compute_diagram(&i.sum(&j), &fan).unwrap();
        prop_assert!(sum_diagram(&di, &dj).unwrap().equals(&both).unwrap());
    }

    #[test]
    fn hilbert_matches_oracle(i in ideal_strategy(4), a in -3i64..=4, b in 0i64..=3) {
        let fan = Fan::catalog("H1").unwrap();
        let d = compute_diagram(&i, &fan).unwrap();
        let alpha = klyachko::MultiDegree(vec![a, b]);
        let sat = saturate_oracle(&i, &fan);
        prop_assert_eq!(
            hilbert_value(&d, &alpha).unwrap(),
            hilbert_oracle(&sat, fan.grading(), &alpha).unwrap()
        );
    }

    #[test]
    fn polytope_points_are_monomials(d in prop::collection::vec(0i64..=3, 4)) {
        let fan = Fan::catalog("H3").unwrap();
        let pts = enumerate_in_polytope(&fan, &d, &[], Combine::All).unwrap();
        let mons = klyachko::monomials_of_degree(fan.grading(), &fan.grading().degree(&d)).unwrap();
        prop_assert_eq!(pts.len(), mons.len());
    }
}
