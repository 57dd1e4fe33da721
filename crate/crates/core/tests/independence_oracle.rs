mod common;

use std::collections::BTreeMap;

use common::*;
use num_rational::Ratio;
use proptest::prelude::*;
use seqpairs_core::independence::{is_independence_set, max_independence_subset, EMap};
use seqpairs_core::oracle::{brute_is_independence_set, brute_max_independence};
use seqpairs_core::panel::golden_mean_measure;
use seqpairs_core::symbolic::{Cylinder, CylinderUnion, Sft};

fn cyl(sft: &Sft, w: &[u8]) -> CylinderUnion {
    CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, 0, w.to_vec()).unwrap())
}

fn table(sft: &Sft, default: &[CylSpec], overrides: &[(i64, Vec<CylSpec>)]) -> EMap {
    let overrides: BTreeMap<i64, CylinderUnion> = overrides.iter().map(|(s, u)| (*s, union(sft, u))).collect();
    EMap::TableE { default: union(sft, default).complement(sft), overrides }
}

fn times_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(0i64..9, 0..=6).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn checker_matches_enumeration(
        sys in 0usize..2,
        a in prop::collection::vec(cyl_spec(-1..=1, 2), 1..=2),
        b in prop::collection::vec(cyl_spec(-1..=1, 2), 1..=2),
        times in times_strategy(),
        e in prop::collection::vec(cyl_spec(-1..=1, 2), 1..=2),
        overrides in prop::collection::vec((0i64..9, prop::collection::vec(cyl_spec(-1..=2, 2), 1..=3)), 0..=3),
    ) {
        let m = system(sys);
        let sft = m.sft();
        let (a, b) = (union(sft, &a), union(sft, &b));
        for e in [EMap::whole(), EMap::ConstantE { set: union(sft, &e).complement(sft) }, table(sft, &e, &overrides)] {
            prop_assert_eq!(
                is_independence_set(sft, &a, &b, &times, &e).unwrap(),
                brute_is_independence_set(sft, &a, &b, &times, &e).unwrap(),
                "{:?} {:?}", times, e
            );
        }
    }

    #[test]
    fn subsets_of_independent_sets_are_independent(
        sys in 0usize..2,
        a in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        b in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        times in times_strategy(),
        drop in any::<usize>(),
    ) {
        let m = system(sys);
        let sft = m.sft();
        let (a, b) = (union(sft, &a), union(sft, &b));
        let e = EMap::whole();
        if !times.is_empty() && is_independence_set(sft, &a, &b, &times, &e).unwrap() {
            let mut sub = times.clone();
            sub.remove(drop % times.len());
            prop_assert!(is_independence_set(sft, &a, &b, &sub, &e).unwrap());
        }
    }

    #[test]
    fn search_matches_subset_enumeration(
        sys in 0usize..2,
        a in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        b in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        n in 1usize..=8,
        e in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        overrides in prop::collection::vec((0i64..8, prop::collection::vec(cyl_spec(-1..=2, 2), 1..=3)), 0..=2),
    ) {
        let m = system(sys);
        let sft = m.sft();
        let (a, b) = (union(sft, &a), union(sft, &b));
        let window: Vec<i64> = (0..n as i64).collect();
        for e in [EMap::ConstantE { set: union(sft, &e).complement(sft) }, table(sft, &e, &overrides)] {
            let fast = max_independence_subset(sft, &a, &b, &window, &e).unwrap();
            let (best, ratio) = brute_max_independence(sft, &a, &b, &window, &e).unwrap();
            prop_assert_eq!(fast.best_i.len(), best);
            prop_assert_eq!(fast.ratio, ratio);
            prop_assert!(brute_is_independence_set(sft, &a, &b, &fast.best_i, &e).unwrap());
        }
    }

    #[test]
    fn shrinking_e_never_helps(
        a in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        b in prop::collection::vec(cyl_spec(0..=1, 2), 1..=2),
        n in 1usize..=10,
        e in prop::collection::vec(cyl_spec(-1..=2, 3), 1..=2),
        f in prop::collection::vec(cyl_spec(-1..=2, 3), 1..=2),
    ) {
        let m = system(0);
        let sft = m.sft();
        let (a, b) = (union(sft, &a), union(sft, &b));
        let window: Vec<i64> = (0..n as i64).collect();
        let big = union(sft, &e).complement(sft);
        let small = big.intersect(sft, &union(sft, &f).complement(sft));
        let r_big = max_independence_subset(sft, &a, &b, &window, &EMap::ConstantE { set: big }).unwrap();
        let r_small = max_independence_subset(sft, &a, &b, &window, &EMap::ConstantE { set: small }).unwrap();
        prop_assert!(r_small.ratio <= r_big.ratio);
    }
}

#[test]
fn golden_mean_law_for_every_window_up_to_twelve() {
    let s = golden_mean_measure().sft().clone();
    let (a, b) = (cyl(&s, &[0]), cyl(&s, &[1]));
    for n in 1..=12usize {
        let window: Vec<i64> = (0..n as i64).collect();
        let fast = max_independence_subset(&s, &a, &b, &window, &EMap::whole()).unwrap();
        let (best, ratio) = brute_max_independence(&s, &a, &b, &window, &EMap::whole()).unwrap();
        assert_eq!(best, n.div_ceil(2));
        assert_eq!(fast.best_i.len(), best);
        assert_eq!(ratio, Ratio::new(n.div_ceil(2) as i64, n as i64));
        assert!(fast.exhaustive);
    }
}
