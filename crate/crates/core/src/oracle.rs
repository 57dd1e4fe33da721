//! Brute-force reference implementations by enumeration of allowed words.
//!
//! Each routine lists every allowed word on a block covering all the
//! coordinates involved and tests membership letter by letter. They are slow
//! and only meant for small blocks, as independent checks of the symbolic
//! routines.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::Zero;

use crate::entropy::{neumaier_sum, Partition};
use crate::error::{Error, Result};
use crate::independence::EMap;
use crate::measure::MarkovMeasure;
use crate::rational::{ln, Rational};
use crate::symbolic::{CylinderUnion, ShiftedConstraintSet, Sft, Word};

/// Longest block the oracles will enumerate.
pub const ORACLE_SPAN_CAP: usize = 22;

fn covering_block<'a>(sets: impl IntoIterator<Item = &'a CylinderUnion>) -> Option<(i64, i64)> {
    sets.into_iter().filter_map(|s| s.span()).fold(None, |acc, (a, b)| match acc {
        None => Some((a, b)),
        Some((lo, hi)) => Some((lo.min(a), hi.max(b))),
    })
}

fn check_span(lo: i64, hi: i64) -> Result<usize> {
    let len = (hi - lo + 1) as usize;
    if len > ORACLE_SPAN_CAP {
        return Err(Error::CapExceeded { what: "oracle block length", got: len, cap: ORACLE_SPAN_CAP });
    }
    Ok(len)
}

fn contains(set: &CylinderUnion, buf: &mut Word, lo: i64, word: &[u8]) -> bool {
    set.contains_with(buf, |n| word[(n - lo) as usize])
}

/// Allowed words on `[lo, hi]` lying in every `T^{-shift} set` of `c`.
pub fn brute_resolve(sft: &Sft, c: &ShiftedConstraintSet, lo: i64, hi: i64) -> Result<BTreeSet<Word>> {
    let len = check_span(lo, hi)?;
    let shifted: Vec<CylinderUnion> = c.constraints.iter().map(|(s, u)| u.preimage(*s)).collect();
    if let Some((a, b)) = covering_block(&shifted) {
        if a < lo || b > hi {
            return Err(Error::InvalidArgument(format!("block [{lo}, {hi}] does not cover [{a}, {b}]")));
        }
    }
    let mut buf = Word::new();
    Ok(sft
        .words_of_length(len)
        .into_iter()
        .filter(|w| shifted.iter().all(|u| contains(u, &mut buf, lo, w)))
        .collect())
}

/// Measure of a block word under a Markov measure.
pub fn word_measure(m: &MarkovMeasure, w: &[u8]) -> Rational {
    let Some(&first) = w.first() else {
        return Rational::from_integer(1.into());
    };
    let p = m.transition();
    w.windows(2).fold(m.stationary()[first as usize].clone(), |acc, pair| acc * &p[pair[0] as usize][pair[1] as usize])
}

/// `mu(⋂ T^{-s} U_s)` as a sum over words on the covering block.
pub fn brute_measure(m: &MarkovMeasure, c: &ShiftedConstraintSet) -> Result<Rational> {
    let shifted: Vec<CylinderUnion> = c.constraints.iter().map(|(s, u)| u.preimage(*s)).collect();
    if shifted.iter().any(|u| u.is_empty()) {
        return Ok(Rational::zero());
    }
    let Some((lo, hi)) = covering_block(&shifted) else {
        return Ok(Rational::from_integer(1.into()));
    };
    Ok(brute_resolve(m.sft(), c, lo, hi)?.iter().map(|w| word_measure(m, w)).sum())
}

/// Marks the assignments one word realizes. Bit `i` of an assignment set
/// means time `i` takes `a1`, clear means `a2`.
fn realized_patterns(m1: u32, m2: u32, n: usize, out: &mut [bool]) {
    let both = m1 & m2;
    let only1 = m1 & !m2;
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if (m1 | m2) & full != full {
        return;
    }
    // enumerate submasks of `both`
    let mut sub = both;
    loop {
        out[(only1 | sub) as usize] = true;
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & both;
    }
}

/// Independence of `times` for `(a1, a2)` relative to `e`, by listing words.
///
/// A word realizes an assignment `sigma` when it lies in every `E(s)` and in
/// `T^{-s} a_{sigma(s)}` for each `s`. The set is independent when every
/// assignment is realized.
pub fn brute_is_independence_set(sft: &Sft, a1: &CylinderUnion, a2: &CylinderUnion, times: &[i64], e: &EMap) -> Result<bool> {
    let n = times.len();
    if n > 16 {
        return Err(Error::CapExceeded { what: "oracle independence set size", got: n, cap: 16 });
    }
    if n == 0 {
        return Ok(true);
    }
    let e_sets: Vec<&CylinderUnion> = times.iter().map(|&s| e.at(s)).collect();
    if e_sets.iter().any(|u| u.is_empty()) || a1.is_empty() || a2.is_empty() {
        return Ok(false);
    }
    let p1: Vec<CylinderUnion> = times.iter().map(|&s| a1.preimage(s)).collect();
    let p2: Vec<CylinderUnion> = times.iter().map(|&s| a2.preimage(s)).collect();
    let Some((lo, hi)) = covering_block(p1.iter().chain(&p2).chain(e_sets.iter().copied())) else {
        // every set is the whole space
        return Ok(true);
    };
    let len = check_span(lo, hi)?;
    let mut realized = vec![false; 1 << n];
    let mut buf = Word::new();
    for w in sft.words_of_length(len) {
        if !e_sets.iter().all(|u| contains(u, &mut buf, lo, &w)) {
            continue;
        }
        let (mut m1, mut m2) = (0u32, 0u32);
        for i in 0..n {
            if contains(&p1[i], &mut buf, lo, &w) {
                m1 |= 1 << i;
            }
            if contains(&p2[i], &mut buf, lo, &w) {
                m2 |= 1 << i;
            }
        }
        realized_patterns(m1, m2, n, &mut realized);
    }
    Ok(realized.iter().all(|r| *r))
}

/// Size of the largest independence subset of `window` over all `2^N`
/// subsets, with its ratio to `N`.
pub fn brute_max_independence(
    sft: &Sft,
    a1: &CylinderUnion,
    a2: &CylinderUnion,
    window: &[i64],
    e: &EMap,
) -> Result<(usize, Ratio<i64>)> {
    let n = window.len();
    if n > 14 {
        return Err(Error::CapExceeded { what: "oracle window", got: n, cap: 14 });
    }
    let mut best = 0;
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let times: Vec<i64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| window[i]).collect();
        if brute_is_independence_set(sft, a1, a2, &times, e)? {
            best = size;
        }
    }
    let ratio = if n == 0 { Ratio::zero() } else { Ratio::new(best as i64, n as i64) };
    Ok((best, ratio))
}

/// `H(⋁_{s in times} T^{-s} P)` from the joint law of the atom indices.
pub fn brute_join_entropy(m: &MarkovMeasure, p: &Partition, times: &[i64]) -> Result<f64> {
    let shifted: Vec<Vec<CylinderUnion>> =
        times.iter().map(|&s| p.atoms().iter().map(|a| a.preimage(s)).collect()).collect();
    let Some((lo, hi)) = covering_block(shifted.iter().flatten()) else {
        return Ok(0.0);
    };
    let len = check_span(lo, hi)?;
    let mut law: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut buf = Word::new();
    for w in m.sft().words_of_length(len) {
        let key: Option<Vec<usize>> =
            shifted.iter().map(|atoms| atoms.iter().position(|a| contains(a, &mut buf, lo, &w))).collect();
        let key = key.ok_or_else(|| Error::InvalidPartition("a word lies in no atom".into()))?;
        *law.entry(key).or_insert_with(Rational::zero) += word_measure(m, &w);
    }
    let terms: Vec<f64> = law.values().filter(|q| !q.is_zero()).map(|q| -crate::rational::to_f64(q) * ln(q)).collect();
    Ok(neumaier_sum(terms))
}
