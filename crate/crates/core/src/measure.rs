//! Markov measures on subshifts of finite type, computed exactly.
//!
//! For a stationary chain with transition matrix `P` and stationary vector
//! `pi`, the measure of letters pinned at sparse coordinates
//! `c_0 < c_1 < .. < c_m` is `pi[w_0] * prod_i (P^{c_{i+1} - c_i})[w_i][w_{i+1}]`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};
use crate::symbolic::{CylinderUnion, PointRep, Sft, ShiftedConstraintSet, Symbol};

type Matrix = Vec<Vec<Rational>>;

/// Largest power of `P` kept in the cache; larger gaps are computed by squaring.
const POWER_CACHE: u64 = 4096;

/// A stationary irreducible Markov measure on an SFT.
pub struct MarkovMeasure {
    sft: Sft,
    transition: Matrix,
    stationary: Vec<Rational>,
    powers: Mutex<Vec<Arc<Matrix>>>,
}

impl Clone for MarkovMeasure {
    fn clone(&self) -> Self {
        MarkovMeasure {
            sft: self.sft.clone(),
            transition: self.transition.clone(),
            stationary: self.stationary.clone(),
            powers: Mutex::new(self.powers.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for MarkovMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
        f.debug_struct("MarkovMeasure")
            .field("alphabet_size", &self.sft.alphabet_size())
            .field("transition", &self.transition.iter().map(|r| show(r)).collect::<Vec<_>>())
            .field("stationary", &show(&self.stationary))
            .finish()
    }
}

impl PartialEq for MarkovMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.sft == other.sft && self.transition == other.transition
    }
}

#[derive(Serialize, Deserialize)]
struct MarkovRepr {
    sft: Sft,
    transition: Vec<Vec<String>>,
}

impl Serialize for MarkovMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MarkovRepr {
            sft: self.sft.clone(),
            transition: self.transition.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkovMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MarkovRepr::deserialize(d)?;
        let transition = r
            .transition
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        MarkovMeasure::new(r.sft, transition).map_err(serde::de::Error::custom)
    }
}

impl MarkovMeasure {
    /// Validates `transition` against `sft` and computes the stationary vector.
    pub fn new(sft: Sft, transition: Matrix) -> Result<Self> {
        let k = sft.alphabet_size();
        if transition.len() != k || transition.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidMeasure(format!("transition matrix must be {k}x{k}")));
        }
        for (a, row) in transition.iter().enumerate() {
            for (b, p) in row.iter().enumerate() {
                if p.is_positive() && !sft.is_allowed(a as Symbol, b as Symbol) {
                    return Err(Error::InvalidMeasure(format!(
                        "transition {a}->{b} has positive probability but is forbidden"
                    )));
                }
            }
        }
        let stationary = stationary_vector(&transition)?;
        let identity: Matrix =
            (0..k).map(|a| (0..k).map(|b| if a == b { Rational::one() } else { Rational::zero() }).collect()).collect();
        let powers = Mutex::new(vec![Arc::new(identity), Arc::new(transition.clone())]);
        let m = MarkovMeasure { sft, transition, stationary, powers };
        debug_assert!(m.is_stationary());
        Ok(m)
    }

    /// The uniform Bernoulli measure on the full shift over `k` letters.
    pub fn uniform_bernoulli(k: usize) -> Result<Self> {
        let p = Rational::new(1.into(), (k as i64).into());
        MarkovMeasure::new(Sft::full(k)?, vec![vec![p; k]; k])
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn transition(&self) -> &[Vec<Rational>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[Rational] {
        &self.stationary
    }

    fn is_stationary(&self) -> bool {
        let k = self.stationary.len();
        (0..k).all(|b| {
            let s: Rational = (0..k).map(|a| &self.stationary[a] * &self.transition[a][b]).sum();
            s == self.stationary[b]
        })
    }

    /// `P^steps`.
    fn power(&self, steps: u64) -> Arc<Matrix> {
        if steps <= POWER_CACHE {
            let mut cache = self.powers.lock().unwrap();
            while (cache.len() as u64) <= steps {
                let next = mat_mul(cache.last().unwrap(), &self.transition);
                cache.push(Arc::new(next));
            }
            return cache[steps as usize].clone();
        }
        let half = self.power(steps / 2);
        let mut out = mat_mul(&half, &half);
        if steps % 2 == 1 {
            out = mat_mul(&out, &self.transition);
        }
        Arc::new(out)
    }

    /// Probability of a word pinned at sparse coordinates.
    pub fn sparse_word_measure(&self, coords: &[i64], word: &[Symbol]) -> Rational {
        if word.is_empty() {
            return Rational::one();
        }
        let mut acc = self.stationary[word[0] as usize].clone();
        for (c, w) in coords.windows(2).zip(word.windows(2)) {
            if acc.is_zero() {
                break;
            }
            let steps = (c[1] - c[0]) as u64;
            let entry = if steps == 1 {
                self.transition[w[0] as usize][w[1] as usize].clone()
            } else {
                self.power(steps)[w[0] as usize][w[1] as usize].clone()
            };
            acc *= entry;
        }
        acc
    }
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let k = a.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut s = Rational::zero();
                    for (l, bl) in b.iter().enumerate() {
                        if !a[i][l].is_zero() && !bl[j].is_zero() {
                            s += &a[i][l] * &bl[j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// The unique probability vector `pi` with `pi P = pi`, by exact elimination.
///
/// Requires a row-stochastic matrix with nonnegative entries whose
/// positive-entry graph is strongly connected.
pub fn stationary_vector(transition: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let k = transition.len();
    if k == 0 || transition.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidMeasure("transition matrix must be square and nonempty".into()));
    }
    for (a, row) in transition.iter().enumerate() {
        if row.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidMeasure(format!("row {a} has a negative entry")));
        }
        let s: Rational = row.iter().sum();
        if !s.is_one() {
            return Err(Error::InvalidMeasure(format!("row {a} sums to {}, not 1", format_rational(&s))));
        }
    }
    if k > crate::symbolic::MAX_ALPHABET {
        return Err(Error::InvalidMeasure("alphabet too large".into()));
    }
    let succ: Vec<u64> = transition
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, p)| p.is_positive()).fold(0u64, |m, (b, _)| m | 1 << b))
        .collect();
    if !crate::symbolic::sft_irreducible(&succ) {
        return Err(Error::Reducible);
    }
    // Rows: (P^T - I) pi = 0 for the first k-1 equations, sum(pi) = 1 last.
    let mut aug: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rational> = (0..k)
                .map(|j| {
                    let mut v = transition[j][i].clone();
                    if i == j {
                        v -= Rational::one();
                    }
                    v
                })
                .collect();
            row.push(Rational::zero());
            row
        })
        .collect();
    aug[k - 1] = vec![Rational::one(); k + 1];
    for col in 0..k {
        let pivot = (col..k).find(|&r| !aug[r][col].is_zero()).ok_or(Error::Reducible)?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..k {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (v, p) in aug[r].iter_mut().zip(&pivot_row).skip(col) {
                    *v -= &f * p;
                }
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[k].clone()).collect())
}

/// `mu(s)` as an exact rational; additive over the disjoint normal form.
pub fn measure_of(m: &MarkovMeasure, s: &CylinderUnion) -> Rational {
    s.words().iter().map(|w| m.sparse_word_measure(s.coords(), w)).sum()
}

/// `mu(⋂ T^{-k} U)` computed directly from the constraints.
///
/// Every combination of one word per constraint is merged coordinate by
/// coordinate; inconsistent combinations are dropped, duplicates collapse, and
/// each distinct merged word contributes `pi * prod P^{gap}`. No intersection
/// or normalization of cylinder unions is involved.
pub fn measure_of_constraints(m: &MarkovMeasure, c: &ShiftedConstraintSet) -> Rational {
    let parts: Vec<(Vec<i64>, Vec<&Vec<Symbol>>)> = c
        .constraints
        .iter()
        .map(|(k, u)| (u.coords().iter().map(|x| x + k).collect(), u.words().iter().collect()))
        .collect();
    if parts.iter().any(|(_, w)| w.is_empty()) {
        return Rational::zero();
    }
    let mut merged: std::collections::BTreeSet<Vec<(i64, Symbol)>> = Default::default();
    let mut pinned: BTreeMap<i64, Symbol> = BTreeMap::new();
    merge_rec(&parts, 0, &mut pinned, &mut merged);
    merged
        .iter()
        .map(|w| {
            let coords: Vec<i64> = w.iter().map(|(c, _)| *c).collect();
            let word: Vec<Symbol> = w.iter().map(|(_, s)| *s).collect();
            m.sparse_word_measure(&coords, &word)
        })
        .sum()
}

fn merge_rec(
    parts: &[(Vec<i64>, Vec<&Vec<Symbol>>)],
    i: usize,
    pinned: &mut BTreeMap<i64, Symbol>,
    out: &mut std::collections::BTreeSet<Vec<(i64, Symbol)>>,
) {
    if i == parts.len() {
        out.insert(pinned.iter().map(|(c, s)| (*c, *s)).collect());
        return;
    }
    let (coords, words) = &parts[i];
    for w in words {
        let mut added = Vec::new();
        let mut ok = true;
        for (c, s) in coords.iter().zip(w.iter()) {
            match pinned.get(c) {
                Some(x) if x != s => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    pinned.insert(*c, *s);
                    added.push(*c);
                }
            }
        }
        if ok {
            merge_rec(parts, i + 1, pinned, out);
        }
        for c in added {
            pinned.remove(&c);
        }
    }
}

/// `||1_A - 1_B||^2 = mu(A) + mu(B) - 2 mu(A ∩ B)`.
pub fn l2_distance_sq(m: &MarkovMeasure, a: &ShiftedConstraintSet, b: &ShiftedConstraintSet) -> Rational {
    let both: ShiftedConstraintSet = a.constraints.iter().chain(&b.constraints).cloned().collect();
    let ma = measure_of_constraints(m, a);
    let mb = measure_of_constraints(m, b);
    let mab = measure_of_constraints(m, &both);
    ma + mb - mab * Rational::from_integer(2.into())
}

/// Cumulative sampling tables as doubles.
struct Sampler {
    initial: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl Sampler {
    fn new(m: &MarkovMeasure) -> Self {
        let cumulative = |v: &[Rational]| {
            let mut acc = 0.0;
            v.iter()
                .map(|p| {
                    acc += to_f64(p);
                    acc
                })
                .collect::<Vec<f64>>()
        };
        Sampler { initial: cumulative(&m.stationary), rows: m.transition.iter().map(|r| cumulative(r)).collect() }
    }

    fn draw(table: &[f64], probs: &[Rational], u: f64) -> Symbol {
        // skip zero-probability letters so that forbidden moves are never taken
        let mut last = 0;
        for (i, &c) in table.iter().enumerate() {
            if probs[i].is_zero() {
                continue;
            }
            last = i;
            if u < c {
                return i as Symbol;
            }
        }
        last as Symbol
    }
}

/// Samples a `mu`-typical window over `[lo, hi]`: the letter at `lo` comes from
/// the stationary vector and the rest follow the transition rows. The same
/// `(seed, lo, hi)` always yields the same window.
pub fn sample_point(m: &MarkovMeasure, lo: i64, hi: i64, seed: u64) -> Result<PointRep> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty sampling window [{lo}, {hi}]")));
    }
    let sampler = Sampler::new(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (hi - lo + 1) as usize;
    let mut window = Vec::with_capacity(n);
    let mut cur = Sampler::draw(&sampler.initial, &m.stationary, rng.random::<f64>());
    window.push(cur);
    for _ in 1..n {
        let a = cur as usize;
        cur = Sampler::draw(&sampler.rows[a], &m.transition[a], rng.random::<f64>());
        window.push(cur);
    }
    PointRep::sampled(&m.sft, lo, window, seed)
}

/// A seed derived from `base` and a list of tags, so that independent
/// Monte Carlo streams (per cell, per level, per trial) never depend on the
/// order in which work is scheduled.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut h = base ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tags {
        h = splitmix(h ^ splitmix(t.wrapping_add(0x632b_e59b_d9b4_e019)));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symbolic::{resolve_constraints, Cylinder};

    fn golden() -> MarkovMeasure {
        let sft = Sft::new(vec![vec![true, true], vec![true, false]]).unwrap();
        MarkovMeasure::new(sft, vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 1), rat(0, 1)]]).unwrap()
    }

    fn cyl(m: &MarkovMeasure, start: i64, w: &[u8]) -> CylinderUnion {
        CylinderUnion::from_cylinder(m.sft(), &Cylinder::new(m.sft(), start, w.to_vec()).unwrap())
    }

    #[test]
    fn stationary_examples() {
        let half = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]];
        assert_eq!(stationary_vector(&half).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        let g = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(stationary_vector(&g).unwrap(), vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(stationary_vector(&[vec![rat(1, 1)]]).unwrap(), vec![rat(1, 1)]);
    }

    #[test]
    fn stationary_rejects_bad_input() {
        let reducible = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        assert_eq!(stationary_vector(&reducible), Err(Error::Reducible));
        let not_stochastic = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 2), rat(1, 2)]];
        assert!(matches!(stationary_vector(&not_stochastic), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn forbidden_positive_transition_rejected() {
        let sft = Sft::new(vec![vec![true, true], vec![true, false]]).unwrap();
        let p = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]];
        assert!(matches!(MarkovMeasure::new(sft, p), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn measure_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        assert_eq!(measure_of(&b, &cyl(&b, 0, &[0, 1])), rat(1, 4));
        let g = golden();
        assert_eq!(measure_of(&g, &cyl(&g, 0, &[0])), rat(2, 3));
        assert_eq!(measure_of(&g, &cyl(&g, 0, &[1, 1])), rat(0, 1));
        assert_eq!(measure_of(&g, &CylinderUnion::full()), rat(1, 1));
    }

    #[test]
    fn constraint_measure_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let c = ShiftedConstraintSet::new().with(0, cyl(&b, 0, &[0])).with(2, cyl(&b, 0, &[1]));
        assert_eq!(measure_of_constraints(&b, &c), rat(1, 4));
        let g = golden();
        let c = ShiftedConstraintSet::new().with(0, cyl(&g, 0, &[0])).with(2, cyl(&g, 0, &[0]));
        assert_eq!(measure_of_constraints(&g, &c), rat(1, 2));
        // enumerate length-3 words: 000, 010 have measure 1/6 + 1/3
        let by_words: Rational = g
            .sft()
            .words_of_length(3)
            .iter()
            .filter(|w| w[0] == 0 && w[2] == 0)
            .map(|w| measure_of(&g, &cyl(&g, 0, w)))
            .sum();
        assert_eq!(by_words, rat(1, 2));
        assert_eq!(measure_of_constraints(&g, &c), measure_of(&g, &resolve_constraints(&c, g.sft()).unwrap()));
        assert_eq!(measure_of_constraints(&g, &ShiftedConstraintSet::new()), rat(1, 1));
    }

    #[test]
    fn l2_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let a = ShiftedConstraintSet::new().with(0, cyl(&b, 0, &[0]));
        let a1 = ShiftedConstraintSet::new().with(1, cyl(&b, 0, &[0]));
        let c = ShiftedConstraintSet::new().with(0, cyl(&b, 0, &[1]));
        assert_eq!(l2_distance_sq(&b, &a, &a), rat(0, 1));
        assert_eq!(l2_distance_sq(&b, &a, &a1), rat(1, 2));
        assert_eq!(l2_distance_sq(&b, &a, &c), rat(1, 1));
    }

    #[test]
    fn large_gaps_use_squaring() {
        let g = golden();
        let c = ShiftedConstraintSet::new().with(0, cyl(&g, 0, &[1])).with(10_001, cyl(&g, 0, &[1]));
        let v = to_f64(&measure_of_constraints(&g, &c));
        // mixing: close to (1/3)^2
        assert!((v - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = golden();
        let a = sample_point(&g, -5, 500, 17).unwrap();
        let b = sample_point(&g, -5, 500, 17).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_point(&g, -5, 500, 18).unwrap());
        let one = MarkovMeasure::new(Sft::full(1).unwrap(), vec![vec![rat(1, 1)]]).unwrap();
        let p = sample_point(&one, 0, 9, 3).unwrap();
        assert_eq!(p.block(0, 9).unwrap(), vec![0; 10]);
    }
}
