use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of the alphabet `{0, .., k-1}`.
pub type Symbol = u8;

/// A finite word over the alphabet.
pub type Word = Vec<Symbol>;

/// Largest supported alphabet; rows of the transition relation are `u64` masks.
pub const MAX_ALPHABET: usize = 64;

/// Number of exact-length reachability relations precomputed on construction.
const REACH_CACHE: usize = 128;

/// A one-step subshift of finite type: bi-infinite sequences whose adjacent
/// letters `(a, b)` all satisfy `allowed[a][b]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SftRepr", into = "SftRepr")]
pub struct Sft {
    alphabet_size: usize,
    allowed: Vec<Vec<bool>>,
    succ: Vec<u64>,
    pred: Vec<u64>,
    // reach[g][a]: letters reachable from `a` in exactly `g` steps.
    reach: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct SftRepr {
    alphabet_size: usize,
    allowed: Vec<Vec<bool>>,
}

impl TryFrom<SftRepr> for Sft {
    type Error = Error;
    fn try_from(r: SftRepr) -> Result<Self> {
        if r.allowed.len() != r.alphabet_size {
            return Err(Error::InvalidSft(format!(
                "allowed matrix has {} rows for alphabet size {}",
                r.allowed.len(),
                r.alphabet_size
            )));
        }
        Sft::new(r.allowed)
    }
}

impl From<Sft> for SftRepr {
    fn from(s: Sft) -> Self {
        SftRepr { alphabet_size: s.alphabet_size, allowed: s.allowed }
    }
}

impl PartialEq for Sft {
    fn eq(&self, other: &Self) -> bool {
        self.allowed == other.allowed
    }
}

impl Eq for Sft {}

impl Sft {
    /// Builds the subshift from a square transition relation. Every letter needs
    /// at least one successor and one predecessor.
    pub fn new(allowed: Vec<Vec<bool>>) -> Result<Self> {
        let k = allowed.len();
        if k == 0 {
            return Err(Error::InvalidSft("alphabet must be nonempty".into()));
        }
        if k > MAX_ALPHABET {
            return Err(Error::InvalidSft(format!("alphabet size {k} exceeds {MAX_ALPHABET}")));
        }
        if let Some(row) = allowed.iter().position(|r| r.len() != k) {
            return Err(Error::InvalidSft(format!("row {row} of the allowed matrix has the wrong length")));
        }
        let mut succ = vec![0u64; k];
        let mut pred = vec![0u64; k];
        for (a, row) in allowed.iter().enumerate() {
            for (b, &ok) in row.iter().enumerate() {
                if ok {
                    succ[a] |= 1 << b;
                    pred[b] |= 1 << a;
                }
            }
        }
        if let Some(a) = succ.iter().position(|&m| m == 0) {
            return Err(Error::InvalidSft(format!("symbol {a} has no allowed successor")));
        }
        if let Some(a) = pred.iter().position(|&m| m == 0) {
            return Err(Error::InvalidSft(format!("symbol {a} has no allowed predecessor")));
        }
        let mut reach = Vec::with_capacity(REACH_CACHE);
        reach.push((0..k).map(|a| 1u64 << a).collect::<Vec<_>>());
        for g in 1..REACH_CACHE {
            let prev: &Vec<u64> = &reach[g - 1];
            let next = prev.iter().map(|&mask| step_mask(&succ, mask)).collect();
            reach.push(next);
        }
        Ok(Sft { alphabet_size: k, allowed, succ, pred, reach })
    }

    /// The full shift on `k` letters.
    pub fn full(k: usize) -> Result<Self> {
        Sft::new(vec![vec![true; k]; k])
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn allowed(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    #[inline]
    pub fn is_allowed(&self, a: Symbol, b: Symbol) -> bool {
        self.succ[a as usize] >> b & 1 == 1
    }

    /// Mask of allowed successors of `a`.
    #[inline]
    pub fn successors(&self, a: Symbol) -> u64 {
        self.succ[a as usize]
    }

    /// Mask of allowed predecessors of `b`.
    #[inline]
    pub fn predecessors(&self, b: Symbol) -> u64 {
        self.pred[b as usize]
    }

    /// Mask of the whole alphabet.
    #[inline]
    pub fn alphabet_mask(&self) -> u64 {
        if self.alphabet_size == 64 {
            u64::MAX
        } else {
            (1u64 << self.alphabet_size) - 1
        }
    }

    /// Letters reachable from `a` by an allowed path of exactly `steps` transitions.
    pub fn reach_mask(&self, a: Symbol, steps: u64) -> u64 {
        if (steps as usize) < self.reach.len() {
            return self.reach[steps as usize][a as usize];
        }
        // Square-and-multiply on the relation, applied to a single row.
        let mut mask = 1u64 << a;
        let mut power: Vec<u64> = self.succ.clone();
        let mut e = steps;
        while e > 0 {
            if e & 1 == 1 {
                mask = step_mask(&power, mask);
            }
            e >>= 1;
            if e > 0 {
                power = (0..self.alphabet_size).map(|x| step_mask(&power, power[x])).collect();
            }
        }
        mask
    }

    /// Whether some allowed path of exactly `steps` transitions leads from `a` to `b`.
    #[inline]
    pub fn reachable(&self, a: Symbol, b: Symbol, steps: u64) -> bool {
        self.reach_mask(a, steps) >> b & 1 == 1
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<()> {
        if (s as usize) < self.alphabet_size {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange { symbol: s, alphabet: self.alphabet_size })
        }
    }

    /// First forbidden adjacent pair of `word`, if any.
    pub fn first_violation(&self, word: &[Symbol]) -> Option<(usize, Symbol, Symbol)> {
        word.windows(2)
            .position(|w| !self.is_allowed(w[0], w[1]))
            .map(|i| (i, word[i], word[i + 1]))
    }

    /// Whether every adjacent pair of `word` is allowed.
    pub fn admits(&self, word: &[Symbol]) -> bool {
        self.first_violation(word).is_none()
    }

    /// All allowed words of length `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if n == 0 {
            out.push(Vec::new());
            return out;
        }
        let mut stack: Vec<Word> = (0..self.alphabet_size as u8).rev().map(|a| vec![a]).collect();
        while let Some(w) = stack.pop() {
            if w.len() == n {
                out.push(w);
                continue;
            }
            let last = *w.last().unwrap();
            for b in (0..self.alphabet_size as u8).rev() {
                if self.is_allowed(last, b) {
                    let mut next = w.clone();
                    next.push(b);
                    stack.push(next);
                }
            }
        }
        out
    }

    /// Whether the transition graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        irreducible(&self.succ)
    }
}

#[inline]
fn step_mask(rel: &[u64], mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let a = m.trailing_zeros() as usize;
        out |= rel[a];
        m &= m - 1;
    }
    out
}

/// Strong connectivity of a relation given by successor masks.
pub(crate) fn irreducible(succ: &[u64]) -> bool {
    let k = succ.len();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let closure = |start: usize, rel: &dyn Fn(usize) -> u64| {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let a = f.trailing_zeros() as usize;
                next |= rel(a);
                f &= f - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    };
    let mut pred = vec![0u64; k];
    for (a, &m) in succ.iter().enumerate() {
        for (b, p) in pred.iter_mut().enumerate() {
            if m >> b & 1 == 1 {
                *p |= 1 << a;
            }
        }
    }
    closure(0, &|a| succ[a]) == full && closure(0, &|a| pred[a]) == full
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::new(vec![vec![true, true], vec![true, false]]).unwrap()
    }

    #[test]
    fn rejects_dead_symbols() {
        let err = Sft::new(vec![vec![true, false], vec![true, false]]).unwrap_err();
        assert!(matches!(err, Error::InvalidSft(_)));
        assert!(Sft::new(vec![]).is_err());
    }

    #[test]
    fn golden_mean_word_counts_are_fibonacci() {
        let s = golden();
        let counts: Vec<usize> = (1..=8).map(|n| s.words_of_length(n).len()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn reach_beyond_cache_matches_iteration() {
        let cycle = Sft::new(
            (0..4).map(|a| (0..4).map(|b| b == (a + 1) % 4).collect()).collect(),
        )
        .unwrap();
        for steps in [0u64, 1, 5, 127, 128, 129, 1000, 1001] {
            for a in 0..4u8 {
                let expected = 1u64 << ((a as u64 + steps) % 4);
                assert_eq!(cycle.reach_mask(a, steps), expected, "steps {steps}");
            }
        }
        let g = golden();
        assert!(g.reachable(1, 1, 500));
        assert!(!g.reachable(1, 1, 1));
    }

    #[test]
    fn irreducibility() {
        assert!(golden().is_irreducible());
        assert!(!irreducible(&[0b01, 0b10]));
    }
}
