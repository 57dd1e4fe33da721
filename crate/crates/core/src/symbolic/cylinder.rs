use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::point::PointRep;
use super::sft::{Sft, Symbol, Word};
use crate::error::{Error, Result};

/// The cylinder `[word]_start = { x : x_{start+i} = word[i] }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    start: i64,
    word: Word,
    /// Set when `word` contains a forbidden transition, i.e. the cylinder is
    /// empty in the subshift.
    empty: bool,
}

impl Cylinder {
    pub fn new(sft: &Sft, start: i64, word: Word) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("cylinder word must be nonempty".into()));
        }
        for &s in &word {
            sft.check_symbol(s)?;
        }
        let empty = !sft.admits(&word);
        Ok(Cylinder { start, word, empty })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Last coordinate covered.
    pub fn end(&self) -> i64 {
        self.start + self.word.len() as i64 - 1
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", word_str(&self.word), self.start)?;
        if self.empty {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

pub(crate) fn word_str(w: &[Symbol]) -> String {
    w.iter().map(|s| char::from_digit(*s as u32, 36).unwrap_or('?')).collect()
}

/// A finite union of cylinders in normal form.
///
/// The set is `{ x : (x_c)_{c in coords} in words }`. `coords` is the sorted
/// minimal set of coordinates the set depends on; consecutive coordinates may
/// be far apart, with the letters in between left free (feasibility of the
/// gap is decided by reachability in the transition graph). Every word in
/// `words` is realizable in the subshift, so distinct words are disjoint
/// nonempty cylinders.
///
/// The whole space has no coordinates and the single empty word; the empty
/// set has no words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CylinderUnion {
    coords: Vec<i64>,
    words: BTreeSet<Word>,
}

impl CylinderUnion {
    /// The whole space.
    pub fn full() -> Self {
        CylinderUnion { coords: Vec::new(), words: BTreeSet::from([Vec::new()]) }
    }

    /// The empty set.
    pub fn empty() -> Self {
        CylinderUnion { coords: Vec::new(), words: BTreeSet::new() }
    }

    /// The normal form of a single cylinder.
    pub fn from_cylinder(sft: &Sft, c: &Cylinder) -> Self {
        if c.is_empty() {
            return CylinderUnion::empty();
        }
        let coords = (c.start..=c.end()).collect();
        CylinderUnion::from_parts(sft, coords, [c.word.clone()])
    }

    /// Normal form of the union of `cylinders`.
    pub fn from_cylinders(sft: &Sft, cylinders: &[Cylinder]) -> Self {
        cylinders
            .iter()
            .fold(CylinderUnion::empty(), |acc, c| acc.union(sft, &CylinderUnion::from_cylinder(sft, c)))
    }

    /// The set `{ x : (x_c)_{c in coords} in words }`, normalized.
    ///
    /// `coords` must be strictly increasing and every word must have one
    /// letter per coordinate.
    pub fn from_words(sft: &Sft, coords: Vec<i64>, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        if coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("coordinates must be strictly increasing".into()));
        }
        let words: Vec<Word> = words.into_iter().collect();
        for w in &words {
            if w.len() != coords.len() {
                return Err(Error::InvalidArgument(format!(
                    "word of length {} over {} coordinates",
                    w.len(),
                    coords.len()
                )));
            }
            for &s in w {
                sft.check_symbol(s)?;
            }
        }
        Ok(CylinderUnion::from_parts(sft, coords, words))
    }

    fn from_parts(sft: &Sft, coords: Vec<i64>, words: impl IntoIterator<Item = Word>) -> Self {
        let words: BTreeSet<Word> = words.into_iter().filter(|w| sparse_feasible(sft, &coords, w)).collect();
        let mut u = CylinderUnion { coords, words };
        u.normalize(sft);
        u
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.coords.is_empty() && !self.words.is_empty()
    }

    /// Smallest interval containing every constrained coordinate.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((*self.coords.first()?, *self.coords.last()?))
    }

    /// Number of disjoint cylinders in the normal form.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// The preimage `T^{-k}(self)`; `T^{-k}[w]_i = [w]_{i+k}`.
    pub fn preimage(&self, k: i64) -> Self {
        CylinderUnion { coords: self.coords.iter().map(|c| c + k).collect(), words: self.words.clone() }
    }

    /// The image `T^k(self) = T^{-(-k)}(self)`.
    pub fn image(&self, k: i64) -> Self {
        self.preimage(-k)
    }

    /// Whether `T^shift p` lies in the set.
    pub fn contains_point(&self, p: &PointRep, shift: i64) -> Result<bool> {
        if self.words.is_empty() {
            return Ok(false);
        }
        let mut buf = Vec::with_capacity(self.coords.len());
        for &c in &self.coords {
            buf.push(p.coordinate(c + shift)?);
        }
        Ok(self.words.contains(&buf))
    }

    /// Whether a word read at `coords` belongs to the set. `letter(c)` supplies
    /// coordinate `c`.
    #[inline]
    pub fn contains_with(&self, buf: &mut Word, mut letter: impl FnMut(i64) -> Symbol) -> bool {
        buf.clear();
        buf.extend(self.coords.iter().map(|&c| letter(c)));
        self.words.contains(buf.as_slice())
    }

    pub fn intersect(&self, sft: &Sft, other: &CylinderUnion) -> Self {
        if self.is_empty() || other.is_empty() {
            return CylinderUnion::empty();
        }
        let (coords, words) = join(sft, &self.coords, &self.words, &other.coords, &other.words);
        let mut u = CylinderUnion { coords, words };
        u.normalize(sft);
        u
    }

    pub fn union(&self, sft: &Sft, other: &CylinderUnion) -> Self {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let coords = merge_coords(&self.coords, &other.coords);
        let mut words = extend_words(sft, &self.coords, &self.words, &coords);
        words.extend(extend_words(sft, &other.coords, &other.words, &coords));
        let mut u = CylinderUnion { coords, words };
        u.normalize(sft);
        u
    }

    pub fn complement(&self, sft: &Sft) -> Self {
        if self.is_empty() {
            return CylinderUnion::full();
        }
        let all = extend_words(sft, &[], &BTreeSet::from([Vec::new()]), &self.coords);
        let words = all.into_iter().filter(|w| !self.words.contains(w)).collect();
        let mut u = CylinderUnion { coords: self.coords.clone(), words };
        u.normalize(sft);
        u
    }

    /// Whether the two sets are equal, compared on their joint coordinates.
    pub fn same_set(&self, sft: &Sft, other: &CylinderUnion) -> bool {
        if self == other {
            return true;
        }
        let coords = merge_coords(&self.coords, &other.coords);
        extend_words(sft, &self.coords, &self.words, &coords) == extend_words(sft, &other.coords, &other.words, &coords)
    }

    /// Words over the interval `[lo, hi]` whose cylinders lie in the set.
    ///
    /// Fails when the set depends on coordinates outside the interval.
    pub fn words_over(&self, sft: &Sft, lo: i64, hi: i64) -> Result<BTreeSet<Word>> {
        if let Some((a, b)) = self.span() {
            if a < lo || b > hi {
                return Err(Error::InvalidArgument(format!(
                    "set depends on [{a}, {b}], outside the interval [{lo}, {hi}]"
                )));
            }
        }
        let coords: Vec<i64> = (lo..=hi).collect();
        Ok(extend_words(sft, &self.coords, &self.words, &coords))
    }

    /// For each coordinate in `[lo, hi]`, the mask of letters taken there by
    /// some point of the set.
    pub fn realizable_letters(&self, sft: &Sft, lo: i64, hi: i64) -> Vec<u64> {
        let mut out = vec![0u64; (hi - lo + 1).max(0) as usize];
        for w in &self.words {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot |= letters_at(sft, &self.coords, w, lo + i as i64);
            }
        }
        out
    }

    /// `{ x : some y in the set has y_n = x_n for every n >= t }`.
    ///
    /// In a one-step SFT the letter at `t` separates the past from the future,
    /// so for any set `F` depending only on coordinates `>= t` the intersection
    /// with `F` is nonempty exactly when the projection's is.
    pub fn project_right(&self, sft: &Sft, t: i64) -> Self {
        let keep = self.coords.partition_point(|c| *c < t);
        if self.is_empty() || keep == 0 {
            return self.clone();
        }
        let pinned = self.coords.get(keep) == Some(&t);
        let mut coords = Vec::with_capacity(self.coords.len() - keep + 1);
        if !pinned {
            coords.push(t);
        }
        coords.extend_from_slice(&self.coords[keep..]);
        let mut words = BTreeSet::new();
        for w in &self.words {
            if pinned {
                words.insert(w[keep..].to_vec());
                continue;
            }
            let mut mask = letters_at(sft, &self.coords, w, t);
            while mask != 0 {
                let a = mask.trailing_zeros() as u8;
                mask &= mask - 1;
                let mut nw = Vec::with_capacity(coords.len());
                nw.push(a);
                nw.extend_from_slice(&w[keep..]);
                words.insert(nw);
            }
        }
        let mut u = CylinderUnion { coords, words };
        u.normalize(sft);
        u
    }

    /// Drops coordinates the set does not depend on, scanning left to right and
    /// restarting after each removal.
    fn normalize(&mut self, sft: &Sft) {
        if self.words.is_empty() {
            self.coords.clear();
            return;
        }
        'outer: loop {
            for idx in 0..self.coords.len() {
                if let Some(reduced) = self.without_coordinate(sft, idx) {
                    self.coords.remove(idx);
                    self.words = reduced;
                    continue 'outer;
                }
            }
            break;
        }
    }

    /// The word set over `coords \ {coords[idx]}` if membership does not depend
    /// on `coords[idx]`.
    fn without_coordinate(&self, sft: &Sft, idx: usize) -> Option<BTreeSet<Word>> {
        let c = self.coords[idx];
        let left = idx.checked_sub(1).map(|i| self.coords[i]);
        let right = self.coords.get(idx + 1).copied();
        let mut present: HashMap<Word, u64> = HashMap::new();
        for w in &self.words {
            let mut key = w.clone();
            let a = key.remove(idx);
            *present.entry(key).or_insert(0) |= 1 << a;
        }
        for (key, mask) in &present {
            let mut feasible = sft.alphabet_mask();
            if let Some(l) = left {
                feasible &= sft.reach_mask(key[idx - 1], (c - l) as u64);
            }
            if let Some(r) = right {
                let target = key[idx];
                let steps = (r - c) as u64;
                let mut m = feasible;
                while m != 0 {
                    let a = m.trailing_zeros() as u8;
                    if !sft.reachable(a, target, steps) {
                        feasible &= !(1 << a);
                    }
                    m &= m - 1;
                }
            }
            if *mask != feasible {
                return None;
            }
        }
        Some(present.into_keys().collect())
    }

    /// Compact textual form, e.g. `{0@0,1@0}` or `X` / `{}`.
    pub fn describe(&self) -> String {
        if self.is_full() {
            return "X".into();
        }
        if self.is_empty() {
            return "{}".into();
        }
        let coords = self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let words = self.words.iter().map(|w| word_str(w)).collect::<Vec<_>>().join("|");
        format!("{{{words}}}@({coords})")
    }
}

impl fmt::Display for CylinderUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Feasibility of letters pinned at sparse coordinates.
pub(crate) fn sparse_feasible(sft: &Sft, coords: &[i64], word: &[Symbol]) -> bool {
    coords
        .windows(2)
        .zip(word.windows(2))
        .all(|(c, w)| sft.reachable(w[0], w[1], (c[1] - c[0]) as u64))
}

/// Letters that can appear at coordinate `n` given the pinned `word`.
fn letters_at(sft: &Sft, coords: &[i64], word: &[Symbol], n: i64) -> u64 {
    match coords.binary_search(&n) {
        Ok(i) => 1 << word[i],
        Err(i) => {
            let mut mask = sft.alphabet_mask();
            if i > 0 {
                mask &= sft.reach_mask(word[i - 1], (n - coords[i - 1]) as u64);
            }
            if i < coords.len() {
                let steps = (coords[i] - n) as u64;
                let mut m = mask;
                while m != 0 {
                    let a = m.trailing_zeros() as u8;
                    if !sft.reachable(a, word[i], steps) {
                        mask &= !(1 << a);
                    }
                    m &= m - 1;
                }
            }
            mask
        }
    }
}

pub(crate) fn merge_coords(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All feasible words over `target` (a superset of `coords`) that restrict to
/// a word of `words`.
fn extend_words(sft: &Sft, coords: &[i64], words: &BTreeSet<Word>, target: &[i64]) -> BTreeSet<Word> {
    let positions: Vec<Option<usize>> = target.iter().map(|c| coords.binary_search(c).ok()).collect();
    let k = sft.alphabet_size() as u8;
    let mut out = BTreeSet::new();
    for w in words {
        let mut buf: Word = Vec::with_capacity(target.len());
        extend_rec(sft, target, &positions, w, k, &mut buf, &mut out);
    }
    out
}

fn extend_rec(
    sft: &Sft,
    target: &[i64],
    positions: &[Option<usize>],
    w: &[Symbol],
    k: u8,
    buf: &mut Word,
    out: &mut BTreeSet<Word>,
) {
    let i = buf.len();
    if i == target.len() {
        out.insert(buf.clone());
        return;
    }
    let candidates: Vec<u8> = match positions[i] {
        Some(j) => vec![w[j]],
        None => (0..k).collect(),
    };
    for a in candidates {
        if i > 0 && !sft.reachable(buf[i - 1], a, (target[i] - target[i - 1]) as u64) {
            continue;
        }
        // The next pinned letter must stay reachable.
        if let Some(next) = (i + 1..target.len()).find(|&j| positions[j].is_some()) {
            let b = w[positions[next].unwrap()];
            if !sft.reachable(a, b, (target[next] - target[i]) as u64) {
                continue;
            }
        }
        buf.push(a);
        extend_rec(sft, target, positions, w, k, buf, out);
        buf.pop();
    }
}

/// Joins two word sets on their common coordinates.
fn join(
    sft: &Sft,
    ca: &[i64],
    wa: &BTreeSet<Word>,
    cb: &[i64],
    wb: &BTreeSet<Word>,
) -> (Vec<i64>, BTreeSet<Word>) {
    let coords = merge_coords(ca, cb);
    let common: Vec<(usize, usize)> = ca
        .iter()
        .enumerate()
        .filter_map(|(i, c)| cb.binary_search(c).ok().map(|j| (i, j)))
        .collect();
    let mut index: HashMap<Word, Vec<&Word>> = HashMap::new();
    for w in wb {
        let key: Word = common.iter().map(|&(_, j)| w[j]).collect();
        index.entry(key).or_default().push(w);
    }
    // Where each merged coordinate is read from.
    let source: Vec<(bool, usize)> = coords
        .iter()
        .map(|c| match ca.binary_search(c) {
            Ok(i) => (true, i),
            Err(_) => (false, cb.binary_search(c).unwrap()),
        })
        .collect();
    let mut out = BTreeSet::new();
    for a in wa {
        let key: Word = common.iter().map(|&(i, _)| a[i]).collect();
        if let Some(matches) = index.get(&key) {
            for b in matches {
                let merged: Word = source.iter().map(|&(from_a, i)| if from_a { a[i] } else { b[i] }).collect();
                if sparse_feasible(sft, &coords, &merged) {
                    out.insert(merged);
                }
            }
        }
    }
    (coords, out)
}

/// A finite list of constraints `(k, U)`, each standing for `T^{-k} U`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedConstraintSet {
    pub constraints: Vec<(i64, CylinderUnion)>,
}

impl ShiftedConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, shift: i64, set: CylinderUnion) -> Self {
        self.constraints.push((shift, set));
        self
    }

    pub fn push(&mut self, shift: i64, set: CylinderUnion) {
        self.constraints.push((shift, set));
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Smallest interval containing every constrained coordinate.
    pub fn span(&self) -> Option<(i64, i64)> {
        self.constraints
            .iter()
            .filter_map(|(k, u)| u.span().map(|(a, b)| (a + k, b + k)))
            .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
    }
}

impl FromIterator<(i64, CylinderUnion)> for ShiftedConstraintSet {
    fn from_iter<I: IntoIterator<Item = (i64, CylinderUnion)>>(iter: I) -> Self {
        ShiftedConstraintSet { constraints: iter.into_iter().collect() }
    }
}

/// The intersection `⋂ T^{-k} U` over the constraints, or `None` when it is
/// empty in the subshift.
pub fn resolve_constraints(c: &ShiftedConstraintSet, sft: &Sft) -> Option<CylinderUnion> {
    let mut acc = CylinderUnion::full();
    for (k, u) in &c.constraints {
        acc = acc.intersect(sft, &u.preimage(*k));
        if acc.is_empty() {
            return None;
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::new(vec![vec![true, true], vec![true, false]]).unwrap()
    }

    fn cyl(sft: &Sft, start: i64, w: &[u8]) -> CylinderUnion {
        CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, start, w.to_vec()).unwrap())
    }

    #[test]
    fn forbidden_cylinder_is_flagged_not_dropped() {
        let g = golden();
        let c = Cylinder::new(&g, 0, vec![1, 1]).unwrap();
        assert!(c.is_empty());
        assert!(CylinderUnion::from_cylinder(&g, &c).is_empty());
        assert!(!Cylinder::new(&g, 0, vec![1, 0]).unwrap().is_empty());
        assert!(Cylinder::new(&g, 0, vec![]).is_err());
        assert!(Cylinder::new(&g, 0, vec![2]).is_err());
    }

    #[test]
    fn resolve_full_shift_pair() {
        let s = Sft::full(2).unwrap();
        let c = ShiftedConstraintSet::new().with(0, cyl(&s, 0, &[0])).with(1, cyl(&s, 0, &[1]));
        assert_eq!(resolve_constraints(&c, &s), Some(cyl(&s, 0, &[0, 1])));
    }

    #[test]
    fn resolve_golden_mean_forbidden() {
        let g = golden();
        let c = ShiftedConstraintSet::new().with(0, cyl(&g, 0, &[1])).with(1, cyl(&g, 0, &[1]));
        assert_eq!(resolve_constraints(&c, &g), None);
    }

    #[test]
    fn single_constraint_is_a_translate() {
        let g = golden();
        let u = cyl(&g, -1, &[0, 1, 0]);
        let c = ShiftedConstraintSet::new().with(5, u.clone());
        assert_eq!(resolve_constraints(&c, &g), Some(cyl(&g, 4, &[0, 1, 0])));
        assert_eq!(resolve_constraints(&ShiftedConstraintSet::new(), &g), Some(CylinderUnion::full()));
    }

    #[test]
    fn normalization_drops_free_coordinates() {
        let s = Sft::full(2).unwrap();
        let u = CylinderUnion::from_words(&s, vec![0, 1], [vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(u, cyl(&s, 0, &[0]));
        // x_0 = 0 and x_2 = 0 with x_1 free
        let v = CylinderUnion::from_words(&s, vec![0, 1, 2], [vec![0, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(v.coords(), &[0, 2]);
        // in the golden mean shift, 1 is always followed by 0
        let g = golden();
        assert_eq!(cyl(&g, 0, &[1, 0]), cyl(&g, 0, &[1]));
        let all = CylinderUnion::from_words(&g, vec![3], [vec![0], vec![1]]).unwrap();
        assert!(all.is_full());
    }

    #[test]
    fn complement_and_union() {
        let g = golden();
        let a = cyl(&g, 0, &[1]);
        let ac = a.complement(&g);
        assert_eq!(ac, cyl(&g, 0, &[0]));
        assert!(a.union(&g, &ac).is_full());
        assert!(a.intersect(&g, &ac).is_empty());
        assert!(CylinderUnion::full().complement(&g).is_empty());
        assert!(CylinderUnion::empty().complement(&g).is_full());
    }

    #[test]
    fn periodic_shift_compares_semantically() {
        let cycle = Sft::new((0..4).map(|a| (0..4).map(|b| b == (a + 1) % 4).collect()).collect()).unwrap();
        let a = cyl(&cycle, 0, &[0]);
        let b = cyl(&cycle, 1, &[1]);
        assert!(a.same_set(&cycle, &b));
        assert!(!a.same_set(&cycle, &cyl(&cycle, 1, &[2])));
    }

    #[test]
    fn point_membership() {
        let s = Sft::full(2).unwrap();
        let z = PointRep::fixed(&s, 0).unwrap();
        assert!(cyl(&s, 0, &[0]).contains_point(&z, 0).unwrap());
        assert!(!cyl(&s, 0, &[1]).contains_point(&z, 0).unwrap());
        let w = PointRep::sampled(&s, 0, vec![0, 1, 1, 0], 1).unwrap();
        assert!(cyl(&s, 1, &[1, 1]).contains_point(&w, 0).unwrap());
        assert!(cyl(&s, 1, &[1, 1]).contains_point(&w, 2).is_err());
    }

    #[test]
    fn realizable_letters_around_a_cylinder() {
        let g = golden();
        let m = cyl(&g, 0, &[1]).realizable_letters(&g, -1, 1);
        assert_eq!(m, vec![0b01, 0b10, 0b01]);
    }

    #[test]
    fn right_projection() {
        let g = golden();
        // x_0 = 1, x_3 = 1 projected onto coordinates >= 2: x_2 free, x_3 = 1
        let u = cyl(&g, 0, &[1]).intersect(&g, &cyl(&g, 3, &[1]));
        let p = u.project_right(&g, 2);
        assert!(p.same_set(&g, &cyl(&g, 3, &[1])));
        // x_0 = 1 projected onto coordinates >= 1 forces x_1 = 0
        assert_eq!(cyl(&g, 0, &[1]).project_right(&g, 1), cyl(&g, 1, &[0]));
        assert!(cyl(&g, 0, &[1]).project_right(&g, 2).is_full());
        assert_eq!(cyl(&g, 5, &[1]).project_right(&g, 2), cyl(&g, 5, &[1]));
    }
}
