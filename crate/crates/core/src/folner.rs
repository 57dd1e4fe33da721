//! Følner windows in `Z`, temperedness, and densities of sets of times.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{CylinderUnion, PointRep};

/// Longest period looked for when deciding that a set of times is eventually
/// periodic.
pub const MAX_DETECTED_PERIOD: usize = 64;

/// Upper limit on the total number of membership evaluations a density or
/// Birkhoff computation may perform.
pub const EVALUATION_CAP: u64 = 200_000_000;

/// A rule `n -> F_n`. Every rule here produces integer intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FolnerWindows {
    /// `F_n = {0, .., n-1}`.
    Canonical,
    /// `F_n = {0}`; not a Følner sequence, kept as a degenerate reference.
    Singleton,
    /// `F_n = {n^2, .., n^2 + n - 1}`.
    Lacunary,
}

impl FolnerWindows {
    /// `F_n` as `(first element, size)`, for `n >= 1`.
    pub fn window(&self, n: u64) -> (i64, u64) {
        match self {
            FolnerWindows::Canonical => (0, n),
            FolnerWindows::Singleton => (0, 1),
            FolnerWindows::Lacunary => ((n * n) as i64, n),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FolnerWindows::Canonical => "canonical",
            FolnerWindows::Singleton => "singleton",
            FolnerWindows::Lacunary => "lacunary",
        }
    }
}

/// Lower and upper density of a set of times, estimated as the minimum and
/// maximum window average over `n` in the tail `[tail_fraction * n_max, n_max]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub lower: Ratio<i64>,
    pub upper: Ratio<i64>,
    pub n_max: u64,
    pub tail_fraction: Ratio<i64>,
    /// Set when the set was found to be periodic over the tail and the values
    /// are its exact frequency.
    pub exact: bool,
}

impl DensityEstimate {
    pub fn upper_f64(&self) -> f64 {
        ratio_f64(&self.upper)
    }

    pub fn lower_f64(&self) -> f64 {
        ratio_f64(&self.lower)
    }
}

pub fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn tail_start(n_max: u64, tail_fraction: Ratio<i64>) -> Result<u64> {
    if n_max < 10 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 10, got {n_max}")));
    }
    if tail_fraction <= Ratio::from_integer(0) || tail_fraction > Ratio::from_integer(1) {
        return Err(Error::InvalidArgument(format!("tail fraction {tail_fraction} outside (0, 1]")));
    }
    let start = (tail_fraction * Ratio::from_integer(n_max as i64)).ceil().to_integer() as u64;
    Ok(start.max(1))
}

/// Density of `{ s : pred(s) }` along `windows`.
///
/// For canonical windows the predicate is evaluated once on `[0, n_max)`;
/// when its values repeat with a period of at most [`MAX_DETECTED_PERIOD`]
/// across the whole tail the exact periodic frequency is returned.
pub fn density<F>(mut pred: F, windows: FolnerWindows, n_max: u64, tail_fraction: Ratio<i64>) -> Result<DensityEstimate>
where
    F: FnMut(i64) -> Result<bool>,
{
    let start = tail_start(n_max, tail_fraction)?;
    let mut lower: Option<Ratio<i64>> = None;
    let mut upper: Option<Ratio<i64>> = None;
    let mut record = |r: Ratio<i64>| {
        if lower.as_ref().is_none_or(|l| r < *l) {
            lower = Some(r);
        }
        if upper.as_ref().is_none_or(|u| r > *u) {
            upper = Some(r);
        }
    };
    match windows {
        FolnerWindows::Canonical => {
            let values: Vec<bool> = (0..n_max as i64).map(&mut pred).collect::<Result<_>>()?;
            if let Some(freq) = periodic_frequency(&values[start as usize - 1..]) {
                return Ok(DensityEstimate { lower: freq, upper: freq, n_max, tail_fraction, exact: true });
            }
            let mut count = 0i64;
            for (i, v) in values.iter().enumerate() {
                count += *v as i64;
                let n = i as u64 + 1;
                if n >= start {
                    record(Ratio::new(count, n as i64));
                }
            }
        }
        _ => {
            let total: u64 = (start..=n_max).map(|n| windows.window(n).1).sum();
            if total > EVALUATION_CAP {
                return Err(Error::CapExceeded {
                    what: "membership evaluations",
                    got: total as usize,
                    cap: EVALUATION_CAP as usize,
                });
            }
            for n in start..=n_max {
                let (a, len) = windows.window(n);
                let mut count = 0i64;
                for s in a..a + len as i64 {
                    count += pred(s)? as i64;
                }
                record(Ratio::new(count, len as i64));
            }
        }
    }
    Ok(DensityEstimate { lower: lower.unwrap(), upper: upper.unwrap(), n_max, tail_fraction, exact: false })
}

/// Density of a precomputed indicator sequence over canonical windows;
/// `values[i]` is membership of time `i`.
pub fn density_of_indicator(values: &[bool], tail_fraction: Ratio<i64>) -> Result<DensityEstimate> {
    density(|s| Ok(values[s as usize]), FolnerWindows::Canonical, values.len() as u64, tail_fraction)
}

/// Exact frequency if `values` repeats with a short period throughout, which
/// must cover at least four full periods.
fn periodic_frequency(values: &[bool]) -> Option<Ratio<i64>> {
    let p = (1..=MAX_DETECTED_PERIOD).find(|&p| values.len() >= 4 * p && (p..values.len()).all(|i| values[i] == values[i - p]))?;
    let hits = values[..p].iter().filter(|v| **v).count() as i64;
    Some(Ratio::new(hits, p as i64))
}

/// `max_{1 < n <= n_max} |⋃_{k<n} F_k^{-1} F_n| / |F_n|`, with
/// `F^{-1} = {-f : f in F}` and `k` ranging over `1..n`.
pub fn temperedness_constant(windows: FolnerWindows, n_max: u64) -> Result<Ratio<i64>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
    }
    let mut best = Ratio::from_integer(0);
    for n in 2..=n_max {
        let (an, ln) = windows.window(n);
        // F_k^{-1} F_n = [an - (ak + lk - 1), an + ln - 1 - ak]
        let mut intervals: Vec<(i64, i64)> = (1..n)
            .map(|k| {
                let (ak, lk) = windows.window(k);
                (an - (ak + lk as i64 - 1), an + ln as i64 - 1 - ak)
            })
            .collect();
        intervals.sort_unstable();
        let mut size = 0i64;
        let mut cur: Option<(i64, i64)> = None;
        for (a, b) in intervals {
            match cur {
                Some((c, d)) if a <= d + 1 => cur = Some((c, d.max(b))),
                Some((c, d)) => {
                    size += d - c + 1;
                    cur = Some((a, b));
                }
                None => cur = Some((a, b)),
            }
        }
        if let Some((c, d)) = cur {
            size += d - c + 1;
        }
        best = best.max(Ratio::new(size, ln as i64));
    }
    Ok(best)
}

/// `(1/|F_n|) sum_{s in F_n} 1_{f_set}(T^s p)`, exactly.
pub fn birkhoff_average(p: &PointRep, f_set: &CylinderUnion, windows: FolnerWindows, n: u64) -> Result<Ratio<i64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("window index must be positive".into()));
    }
    let (a, len) = windows.window(n);
    if len > EVALUATION_CAP {
        return Err(Error::CapExceeded { what: "window size", got: len as usize, cap: EVALUATION_CAP as usize });
    }
    let mut buf = Vec::new();
    let mut count = 0i64;
    for s in a..a + len as i64 {
        if let Some((lo, hi)) = p.evaluable_range() {
            if let Some((c0, c1)) = f_set.span() {
                if c0 + s < lo || c1 + s > hi {
                    return Err(p.coordinate(if c0 + s < lo { c0 + s } else { c1 + s }).unwrap_err());
                }
            }
        }
        count += f_set.contains_with(&mut buf, |c| p.coordinate(c + s).unwrap()) as i64;
    }
    Ok(Ratio::new(count, len as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Cylinder, Sft};

    fn half() -> Ratio<i64> {
        Ratio::new(1, 2)
    }

    #[test]
    fn density_examples() {
        let all = density(|_| Ok(true), FolnerWindows::Canonical, 100, half()).unwrap();
        assert_eq!((all.lower, all.upper), (Ratio::from(1), Ratio::from(1)));
        let even = density(|s| Ok(s % 2 == 0), FolnerWindows::Canonical, 1000, half()).unwrap();
        assert!(even.exact);
        assert_eq!((even.lower, even.upper), (half(), half()));
        let quarter = density(|s| Ok(s % 4 == 0), FolnerWindows::Canonical, 1000, half()).unwrap();
        assert_eq!(quarter.upper, Ratio::new(1, 4));
        assert!(density(|_| Ok(true), FolnerWindows::Canonical, 9, half()).is_err());
    }

    #[test]
    fn non_periodic_sets_use_tail_extremes() {
        let squares = |s: i64| Ok(((s as f64).sqrt() as i64).pow(2) == s);
        let d = density(squares, FolnerWindows::Canonical, 400, half()).unwrap();
        assert!(!d.exact);
        assert!(d.lower <= d.upper && d.upper <= Ratio::new(1, 10));
        let lac = density(|s| Ok(s % 3 == 0), FolnerWindows::Lacunary, 50, half()).unwrap();
        assert!(lac.lower >= Ratio::new(1, 4) && lac.upper <= Ratio::new(1, 2));
    }

    #[test]
    fn complement_duality() {
        let s = |t: i64| Ok((t * t + 3 * t) % 7 < 3 || t % 11 == 0);
        let d = density(s, FolnerWindows::Canonical, 500, Ratio::new(1, 3)).unwrap();
        let c = density(|t| s(t).map(|v| !v), FolnerWindows::Canonical, 500, Ratio::new(1, 3)).unwrap();
        assert_eq!(d.upper, Ratio::from(1) - c.lower);
    }

    #[test]
    fn temperedness() {
        let c = temperedness_constant(FolnerWindows::Canonical, 100).unwrap();
        assert!(c <= Ratio::from(2));
        assert_eq!(temperedness_constant(FolnerWindows::Singleton, 50).unwrap(), Ratio::from(1));
        let a = temperedness_constant(FolnerWindows::Lacunary, 10).unwrap();
        let b = temperedness_constant(FolnerWindows::Lacunary, 40).unwrap();
        assert!(b > a && b > Ratio::from(10));
    }

    #[test]
    fn birkhoff_examples() {
        let s = Sft::full(2).unwrap();
        let zero = CylinderUnion::from_cylinder(&s, &Cylinder::new(&s, 0, vec![0]).unwrap());
        let one = CylinderUnion::from_cylinder(&s, &Cylinder::new(&s, 0, vec![1]).unwrap());
        let z = PointRep::fixed(&s, 0).unwrap();
        for n in [1, 7, 100] {
            assert_eq!(birkhoff_average(&z, &zero, FolnerWindows::Canonical, n).unwrap(), Ratio::from(1));
            assert_eq!(birkhoff_average(&z, &one, FolnerWindows::Canonical, n).unwrap(), Ratio::from(0));
        }
        let alt = PointRep::periodic(&s, vec![0, 1]).unwrap();
        assert_eq!(birkhoff_average(&alt, &zero, FolnerWindows::Canonical, 10).unwrap(), half());
        let w = PointRep::sampled(&s, 0, vec![0; 5], 1).unwrap();
        assert!(matches!(
            birkhoff_average(&w, &zero, FolnerWindows::Canonical, 6),
            Err(Error::WindowExceeded { .. })
        ));
    }
}
