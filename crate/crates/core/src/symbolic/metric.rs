use serde::{Deserialize, Serialize};

use super::cylinder::CylinderUnion;
use super::point::PointRep;
use super::sft::Sft;
use crate::error::{Error, Result};

/// A distance or diameter under `d(x, y) = 2^{-min{|n| : x_n != y_n}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    pub value: f64,
    /// True when no disagreement was found within the horizon and `value` is
    /// only the upper bound `2^{-horizon-1}`.
    pub truncated: bool,
}

impl Distance {
    fn exact(value: f64) -> Self {
        Distance { value, truncated: false }
    }

    fn bound(horizon: usize) -> Self {
        Distance { value: 0.5f64.powi(horizon as i32 + 1), truncated: true }
    }
}

/// Distance between two points, inspecting coordinates in `[-horizon, horizon]`
/// in order of increasing `|n|`.
pub fn metric_distance(x: &PointRep, y: &PointRep, horizon: usize) -> Result<Distance> {
    for r in 0..=horizon as i64 {
        for n in if r == 0 { vec![0] } else { vec![-r, r] } {
            if x.coordinate(n)? != y.coordinate(n)? {
                return Ok(Distance::exact(0.5f64.powi(r as i32)));
            }
        }
    }
    if x == y {
        return Ok(Distance::exact(0.0));
    }
    Ok(Distance::bound(horizon))
}

/// Diameter of a set: `2^{-m}` where `m` is the smallest `|n|` at which points
/// of the set take two different letters.
///
/// A set that is a single point (every letter forced, in both directions) has
/// diameter exactly 0. Otherwise, when all coordinates in the horizon are
/// pinned, the truncated bound `2^{-horizon-1}` is returned.
pub fn diam_of_set(s: &CylinderUnion, sft: &Sft, horizon: usize) -> Result<Distance> {
    if s.is_empty() {
        return Err(Error::EmptySet("diameter of the empty set".into()));
    }
    let h = horizon as i64;
    let letters = s.realizable_letters(sft, -h, h);
    for r in 0..=h {
        let multi = |n: i64| letters[(n + h) as usize].count_ones() >= 2;
        if multi(r) || multi(-r) {
            return Ok(Distance::exact(0.5f64.powi(r as i32)));
        }
    }
    if is_singleton(s, sft) {
        return Ok(Distance::exact(0.0));
    }
    Ok(Distance::bound(horizon))
}

/// A nonempty set is one point when it is a single sparse word, every gap
/// between pinned coordinates has a unique filling, and both tails are forced.
fn is_singleton(s: &CylinderUnion, sft: &Sft) -> bool {
    if s.len() != 1 {
        return false;
    }
    let w = s.words().iter().next().unwrap();
    let coords = s.coords();
    if coords.is_empty() {
        // the whole space: a single point only for a one-letter, one-loop shift
        return sft.alphabet_size() == 1;
    }
    let forced = |rel: &dyn Fn(u8) -> u64, start: u8| {
        // every letter reachable from `start` has exactly one continuation
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let a = frontier.trailing_zeros() as u8;
            frontier &= frontier - 1;
            let next = rel(a);
            if next.count_ones() != 1 {
                return false;
            }
            if next & seen == 0 {
                seen |= next;
                frontier |= next;
            }
        }
        true
    };
    let succ = |a: u8| sft.successors(a);
    let pred = |a: u8| sft.predecessors(a);
    if !forced(&succ, *w.last().unwrap()) || !forced(&pred, w[0]) {
        return false;
    }
    // gaps: the forward path from each pinned letter is forced as well, so the
    // filling is unique
    w[..w.len() - 1].iter().all(|&a| forced(&succ, a))
}
