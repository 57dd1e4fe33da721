#![allow(dead_code)]

use proptest::prelude::*;
use seqpairs_core::measure::MarkovMeasure;
use seqpairs_core::panel::{bernoulli_measure, four_cycle_measure, golden_mean_measure};
use seqpairs_core::symbolic::{Cylinder, CylinderUnion, ShiftedConstraintSet, Sft};

pub fn system(i: usize) -> MarkovMeasure {
    match i % 3 {
        0 => bernoulli_measure(),
        1 => golden_mean_measure(),
        _ => four_cycle_measure(),
    }
}

/// `(start, length, word index)`; the index picks among allowed words.
pub type CylSpec = (i64, usize, usize);

pub fn cyl_spec(start: std::ops::RangeInclusive<i64>, max_len: usize) -> impl Strategy<Value = CylSpec> {
    (start, 1..=max_len, any::<usize>())
}

pub fn cylinder(sft: &Sft, (start, len, idx): CylSpec) -> Cylinder {
    let words = sft.words_of_length(len);
    Cylinder::new(sft, start, words[idx % words.len()].clone()).unwrap()
}

pub fn union(sft: &Sft, specs: &[CylSpec]) -> CylinderUnion {
    let cyls: Vec<Cylinder> = specs.iter().map(|s| cylinder(sft, *s)).collect();
    CylinderUnion::from_cylinders(sft, &cyls)
}

/// Up to four shifted unions of up to two short cylinders, all coordinates
/// inside `[-6, 7]`.
pub fn constraint_specs() -> impl Strategy<Value = Vec<(i64, Vec<CylSpec>)>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(cyl_spec(-2..=2, 3), 1..=2)), 1..=4)
}

pub fn constraints(sft: &Sft, specs: &[(i64, Vec<CylSpec>)]) -> ShiftedConstraintSet {
    specs.iter().map(|(k, u)| (*k, union(sft, u))).collect()
}
