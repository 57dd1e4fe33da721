use serde::{Deserialize, Serialize};

use super::sft::{Sft, Symbol, Word};
use crate::error::{Error, Result};

/// How a point is stored before any translation is applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    /// `... left left | core | right right ...` with `core` starting at
    /// coordinate 0 and `left` ending at coordinate -1.
    EventuallyPeriodic { left_period: Word, core: Word, right_period: Word },
    /// A finite sample of a point on `[lo, hi]`. Reading outside the window is
    /// an error.
    SampledWindow { lo: i64, hi: i64, window: Word, seed: u64 },
}

/// A bi-infinite point, possibly translated by the shift.
///
/// Coordinate `n` of the point is coordinate `n + offset` of `kind`, so
/// `shift_point(p, k)` only adds `k` to the offset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRep {
    kind: PointKind,
    offset: i64,
}

impl PointRep {
    /// Builds an eventually periodic point and checks every junction against `sft`.
    pub fn eventually_periodic(sft: &Sft, left_period: Word, core: Word, right_period: Word) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::InvalidArgument("periods of an eventually periodic point must be nonempty".into()));
        }
        for &s in left_period.iter().chain(&core).chain(&right_period) {
            sft.check_symbol(s)?;
        }
        // left period (with wrap), left->core->right junctions, right period (with wrap)
        let mut seam: Word = left_period.clone();
        seam.extend_from_slice(&left_period);
        seam.extend_from_slice(&core);
        seam.extend_from_slice(&right_period);
        seam.extend_from_slice(&right_period);
        if let Some((_, a, b)) = sft.first_violation(&seam) {
            return Err(Error::ForbiddenTransition { from: a, to: b, context: "in eventually periodic point".into() });
        }
        Ok(PointRep { kind: PointKind::EventuallyPeriodic { left_period, core, right_period }, offset: 0 })
    }

    /// The periodic point `... w w . w w ...` with `w[0]` at coordinate 0.
    pub fn periodic(sft: &Sft, word: Word) -> Result<Self> {
        PointRep::eventually_periodic(sft, word.clone(), Vec::new(), word)
    }

    /// The constant point `... a a a ...`.
    pub fn fixed(sft: &Sft, a: Symbol) -> Result<Self> {
        PointRep::periodic(sft, vec![a])
    }

    /// A sampled window over `[lo, hi]`.
    pub fn sampled(sft: &Sft, lo: i64, window: Word, seed: u64) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::InvalidArgument("sampled window must be nonempty".into()));
        }
        for &s in &window {
            sft.check_symbol(s)?;
        }
        if let Some((i, a, b)) = sft.first_violation(&window) {
            return Err(Error::ForbiddenTransition {
                from: a,
                to: b,
                context: format!("at coordinate {} of sampled window", lo + i as i64),
            });
        }
        let hi = lo + window.len() as i64 - 1;
        Ok(PointRep { kind: PointKind::SampledWindow { lo, hi, window, seed }, offset: 0 })
    }

    pub fn kind(&self) -> &PointKind {
        &self.kind
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Coordinate `n` of the point.
    #[inline]
    pub fn coordinate(&self, n: i64) -> Result<Symbol> {
        let m = n + self.offset;
        match &self.kind {
            PointKind::EventuallyPeriodic { left_period, core, right_period } => {
                if m < 0 {
                    Ok(left_period[m.rem_euclid(left_period.len() as i64) as usize])
                } else if (m as usize) < core.len() {
                    Ok(core[m as usize])
                } else {
                    let i = (m - core.len() as i64) as usize % right_period.len();
                    Ok(right_period[i])
                }
            }
            PointKind::SampledWindow { lo, hi, window, .. } => {
                if m < *lo || m > *hi {
                    Err(Error::WindowExceeded { coord: m, lo: *lo, hi: *hi })
                } else {
                    Ok(window[(m - lo) as usize])
                }
            }
        }
    }

    /// Coordinates `lo..=hi` as a word.
    pub fn block(&self, lo: i64, hi: i64) -> Result<Word> {
        (lo..=hi).map(|n| self.coordinate(n)).collect()
    }

    /// The range of coordinates that can be evaluated, `None` when unbounded.
    pub fn evaluable_range(&self) -> Option<(i64, i64)> {
        match &self.kind {
            PointKind::EventuallyPeriodic { .. } => None,
            PointKind::SampledWindow { lo, hi, .. } => Some((lo - self.offset, hi - self.offset)),
        }
    }

    /// A short human-readable description.
    pub fn describe(&self) -> String {
        let w = |w: &Word| w.iter().map(|s| char::from_digit(*s as u32, 36).unwrap_or('?')).collect::<String>();
        let base = match &self.kind {
            PointKind::EventuallyPeriodic { left_period, core, right_period } => {
                format!("({})^-inf.{}({})^inf", w(left_period), w(core), w(right_period))
            }
            PointKind::SampledWindow { lo, hi, seed, .. } => format!("sample[seed={seed}, {lo}..={hi}]"),
        };
        if self.offset == 0 {
            base
        } else {
            format!("T^{}{}", self.offset, base)
        }
    }
}

/// The shift action `(T^k x)_n = x_{n+k}`.
pub fn shift_point(p: &PointRep, k: i64) -> PointRep {
    PointRep { kind: p.kind.clone(), offset: p.offset + k }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full2() -> Sft {
        Sft::full(2).unwrap()
    }

    #[test]
    fn shifting_by_zero_is_identity() {
        let s = full2();
        let x = PointRep::eventually_periodic(&s, vec![0], vec![1, 1, 0], vec![0, 1]).unwrap();
        assert_eq!(shift_point(&x, 0), x);
    }

    #[test]
    fn fixed_point_is_shift_invariant() {
        let s = full2();
        let z = PointRep::fixed(&s, 0).unwrap();
        for k in [-7, -1, 1, 3, 1000] {
            let y = shift_point(&z, k);
            assert_eq!(y.block(-5, 5).unwrap(), vec![0; 11]);
        }
    }

    #[test]
    fn eventually_periodic_shift_reads_core() {
        let s = full2();
        let x = PointRep::eventually_periodic(&s, vec![0], vec![0, 1], vec![1]).unwrap();
        assert_eq!(shift_point(&x, 1).coordinate(0).unwrap(), 1);
        assert_eq!(x.block(-2, 4).unwrap(), vec![0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn periodic_left_side_phase() {
        let s = Sft::full(3).unwrap();
        let x = PointRep::periodic(&s, vec![0, 1, 2]).unwrap();
        assert_eq!(x.block(-4, 4).unwrap(), vec![2, 0, 1, 2, 0, 1, 2, 0, 1]);
    }

    #[test]
    fn junctions_are_validated() {
        let golden = Sft::new(vec![vec![true, true], vec![true, false]]).unwrap();
        assert!(PointRep::periodic(&golden, vec![1]).is_err());
        assert!(PointRep::eventually_periodic(&golden, vec![0, 1], vec![1], vec![0]).is_err());
        assert!(PointRep::eventually_periodic(&golden, vec![1, 0], vec![1], vec![0]).is_ok());
        assert!(PointRep::sampled(&golden, 0, vec![0, 1, 1], 3).is_err());
        assert!(PointRep::fixed(&golden, 2).is_err());
    }

    #[test]
    fn sampled_window_refuses_to_extend() {
        let s = full2();
        let x = PointRep::sampled(&s, -1, vec![0, 1, 1, 0], 9).unwrap();
        assert_eq!(x.coordinate(2).unwrap(), 0);
        assert!(matches!(x.coordinate(3), Err(Error::WindowExceeded { .. })));
        let y = shift_point(&x, 2);
        assert_eq!(y.coordinate(0).unwrap(), 0);
        assert_eq!(y.coordinate(-1).unwrap(), 1);
        assert!(y.coordinate(1).is_err());
        assert_eq!(y.evaluable_range(), Some((-3, 0)));
    }
}
