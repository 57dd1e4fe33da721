mod common;

use common::*;
use proptest::prelude::*;
use seqpairs_core::measure::sample_point;
use seqpairs_core::symbolic::{diam_of_set, metric_distance, shift_point, CylinderUnion};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_is_an_ultrametric(sys in 0usize..3, seeds in (any::<u64>(), any::<u64>(), any::<u64>())) {
        let m = system(sys);
        let p: Vec<_> = [seeds.0, seeds.1, seeds.2].iter().map(|s| sample_point(&m, -40, 40, *s).unwrap()).collect();
        let d = |i: usize, j: usize| metric_distance(&p[i], &p[j], 30).unwrap().value;
        prop_assert_eq!(d(0, 0), 0.0);
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1).max(d(1, 2)));
        prop_assert!(d(0, 1) <= 1.0);
    }

    #[test]
    fn normal_form_is_canonical(sys in 0usize..2, a in prop::collection::vec(cyl_spec(-2..=2, 3), 1..=3), b in prop::collection::vec(cyl_spec(-2..=2, 3), 1..=3)) {
        let m = system(sys);
        let sft = m.sft();
        let (a, b) = (union(sft, &a), union(sft, &b));
        prop_assert_eq!(a.intersect(sft, &b), b.intersect(sft, &a));
        prop_assert_eq!(a.union(sft, &b), b.union(sft, &a));
        prop_assert_eq!(a.complement(sft).complement(sft), a.clone());
        prop_assert!(a.union(sft, &a.complement(sft)).is_full());
        prop_assert!(a.intersect(sft, &a.complement(sft)).is_empty());
        // De Morgan
        let lhs = a.union(sft, &b).complement(sft);
        let rhs = a.complement(sft).intersect(sft, &b.complement(sft));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shifts_commute_with_membership(sys in 0usize..3, a in prop::collection::vec(cyl_spec(-2..=2, 3), 1..=2), k in -6i64..6, seed in any::<u64>()) {
        let m = system(sys);
        let sft = m.sft();
        let a = union(sft, &a);
        let p = sample_point(&m, -30, 30, seed).unwrap();
        // T^k p in A iff p in T^{-k} A
        prop_assert_eq!(a.contains_point(&p, k).unwrap(), a.preimage(k).contains_point(&p, 0).unwrap());
        prop_assert_eq!(a.contains_point(&shift_point(&p, k), 0).unwrap(), a.contains_point(&p, k).unwrap());
        prop_assert_eq!(a.preimage(k).image(k), a);
    }

    #[test]
    fn diameter_bounds_distances(sys in 0usize..2, a in prop::collection::vec(cyl_spec(-2..=2, 3), 1..=2), seeds in (any::<u64>(), any::<u64>())) {
        let m = system(sys);
        let sft = m.sft();
        let a = union(sft, &a);
        prop_assume!(!a.is_empty());
        let diam = diam_of_set(&a, sft, 12).unwrap().value;
        let p = sample_point(&m, -30, 30, seeds.0).unwrap();
        let q = sample_point(&m, -30, 30, seeds.1).unwrap();
        if a.contains_point(&p, 0).unwrap() && a.contains_point(&q, 0).unwrap() {
            prop_assert!(metric_distance(&p, &q, 12).unwrap().value <= diam);
        }
    }
}

#[test]
fn whole_space_has_unit_diameter() {
    for i in 0..3 {
        let m = system(i);
        assert_eq!(diam_of_set(&CylinderUnion::full(), m.sft(), 8).unwrap().value, 1.0);
    }
}
