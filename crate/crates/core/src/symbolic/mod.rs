//! Subshifts of finite type, points, the shift action, cylinder sets and the
//! metric.
//!
//! Conventions used throughout the crate:
//! * the action is `(T^k x)_n = x_{n+k}`, so `T^{-k}[w]_i = [w]_{i+k}`;
//! * the metric is `d(x, y) = 2^{-min{|n| : x_n != y_n}}`.

mod cylinder;
mod metric;
mod point;
mod sft;

pub use cylinder::{resolve_constraints, Cylinder, CylinderUnion, ShiftedConstraintSet};
pub use metric::{diam_of_set, metric_distance, Distance};
pub use point::{shift_point, PointKind, PointRep};
pub(crate) use sft::irreducible as sft_irreducible;
pub use sft::{Sft, Symbol, Word, MAX_ALPHABET};

/// Whether `T^shift p` lies in `s`.
pub fn point_in_set(p: &PointRep, s: &CylinderUnion, shift: i64) -> crate::Result<bool> {
    s.contains_point(p, shift)
}

/// The centred cylinder `[x_{-depth} .. x_{depth}]_{-depth}` around a point.
pub fn neighbourhood(sft: &Sft, p: &PointRep, depth: usize) -> crate::Result<CylinderUnion> {
    let d = depth as i64;
    let word = p.block(-d, d)?;
    Ok(CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, -d, word)?))
}

/// Membership of `T^s p` in `set` for `s` in `0..n`.
pub fn orbit_indicator(p: &PointRep, set: &CylinderUnion, n: usize) -> crate::Result<Vec<bool>> {
    if n == 0 || set.is_empty() {
        return Ok(vec![false; n]);
    }
    if let Some((lo, hi)) = set.span() {
        // both ends of the orbit segment must be evaluable
        p.coordinate(lo)?;
        p.coordinate(hi + n as i64 - 1)?;
    }
    let mut buf = Vec::with_capacity(set.coords().len());
    Ok((0..n as i64).map(|s| set.contains_with(&mut buf, |c| p.coordinate(c + s).unwrap())).collect())
}
