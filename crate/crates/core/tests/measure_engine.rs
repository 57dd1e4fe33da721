mod common;

use common::*;
use proptest::prelude::*;
use seqpairs_core::measure::{measure_of, measure_of_constraints, sample_point};
use seqpairs_core::oracle::{brute_measure, brute_resolve};
use seqpairs_core::rational::{one, zero};
use seqpairs_core::symbolic::{resolve_constraints, CylinderUnion, ShiftedConstraintSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn three_routes_agree(sys in 0usize..3, specs in constraint_specs()) {
        let m = system(sys);
        let c = constraints(m.sft(), &specs);
        let direct = measure_of_constraints(&m, &c);
        let resolved = resolve_constraints(&c, m.sft()).map(|u| measure_of(&m, &u)).unwrap_or_else(zero);
        prop_assert_eq!(&direct, &resolved);
        prop_assert_eq!(&direct, &brute_measure(&m, &c).unwrap());
    }

    #[test]
    fn resolved_words_match_enumeration(sys in 0usize..3, specs in constraint_specs()) {
        let m = system(sys);
        let sft = m.sft();
        let c = constraints(sft, &specs);
        let Some((lo, hi)) = c.span() else {
            // every constraint normalized to the whole space
            prop_assert!(resolve_constraints(&c, sft).unwrap().is_full());
            return Ok(());
        };
        let brute = brute_resolve(sft, &c, lo, hi).unwrap();
        match resolve_constraints(&c, sft) {
            None => prop_assert!(brute.is_empty()),
            Some(u) => prop_assert_eq!(u.words_over(sft, lo, hi).unwrap(), brute),
        }
    }

    #[test]
    fn measure_is_shift_invariant(sys in 0usize..3, specs in constraint_specs(), k in -20i64..20) {
        let m = system(sys);
        let c = constraints(m.sft(), &specs);
        let shifted: ShiftedConstraintSet = c.constraints.iter().map(|(s, u)| (s + k, u.clone())).collect();
        prop_assert_eq!(measure_of_constraints(&m, &c), measure_of_constraints(&m, &shifted));
    }

    #[test]
    fn complement_and_union_are_additive(sys in 0usize..3, a in prop::collection::vec(cyl_spec(-2..=2, 3), 1..=3), b in prop::collection::vec(cyl_spec(-2..=2, 3), 1..=3)) {
        let m = system(sys);
        let sft = m.sft();
        let (a, b) = (union(sft, &a), union(sft, &b));
        prop_assert_eq!(measure_of(&m, &a) + measure_of(&m, &a.complement(sft)), one());
        let lhs = measure_of(&m, &a.union(sft, &b)) + measure_of(&m, &a.intersect(sft, &b));
        prop_assert_eq!(lhs, measure_of(&m, &a) + measure_of(&m, &b));
    }
}

#[test]
fn thousand_random_sets_agree_exactly() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let m = system(i);
        let sft = m.sft();
        let k = rng.random_range(1..=4);
        let specs: Vec<(i64, Vec<CylSpec>)> = (0..k)
            .map(|_| {
                let n = rng.random_range(1..=2);
                (rng.random_range(-4..=4), (0..n).map(|_| (rng.random_range(-2..=2), rng.random_range(1..=3), rng.random::<u32>() as usize)).collect())
            })
            .collect();
        let c = constraints(sft, &specs);
        let (lo, hi) = c.span().unwrap_or((0, 0));
        assert!(hi - lo < 14);
        let resolved = resolve_constraints(&c, sft).map(|u| measure_of(&m, &u)).unwrap_or_else(zero);
        assert_eq!(measure_of_constraints(&m, &c), resolved, "{c:?}");
    }
}

#[test]
fn sampled_points_have_allowed_windows() {
    for i in 0..3 {
        let m = system(i);
        for seed in 0..20 {
            let p = sample_point(&m, -30, 30, seed).unwrap();
            let w = p.block(-30, 30).unwrap();
            assert!(m.sft().admits(&w));
        }
    }
    assert_eq!(measure_of(&system(1), &CylinderUnion::full()), one());
}
