//! Mean-sensitive and diam-mean-sensitive pairs, the witness construction
//! from a generic point, the pigeonhole bound, and the cross-check of all
//! pair notions on a panel of systems.

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{positive_cells, separation_count, CrosscheckParams, Partition};
use crate::error::{Error, Result};
use crate::folner::{density, density_of_indicator, FolnerWindows, EVALUATION_CAP};
use crate::independence::{check_distinct, classify_in_pair, random_table_maps, InParams};
use crate::measure::{derive_seed, measure_of, measure_of_constraints, MarkovMeasure};
use crate::panel::PanelSystem;
use crate::rational::{format_rational, from_decimal, to_f64, Rational};
use crate::symbolic::{
    diam_of_set, neighbourhood, Cylinder, orbit_indicator, resolve_constraints, shift_point, CylinderUnion, PointRep,
    ShiftedConstraintSet, Sft,
};
use crate::verdict::{default_eps_grid, largest_below, Classification, Verdict, Witness};

/// `N = floor(1/a) + 1`: among `N` sets of measure at least `a` two must
/// intersect in positive measure.
pub fn pigeonhole_bound(a: &Rational) -> Result<u64> {
    if !a.is_positive() || *a > Rational::one() {
        return Err(Error::InvalidArgument(format!("pigeonhole level {} outside (0, 1]", format_rational(a))));
    }
    let inv = a.recip().floor().to_integer();
    Ok(inv.to_u64().expect("bounded by the denominator") + 1)
}

/// A pair `(s, t)` with `mu(T^{-s} A ∩ T^{-t} A) > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RAPair {
    pub s: i64,
    pub t: i64,
    pub intersection_measure: Rational,
}

fn pair_measure(m: &MarkovMeasure, s: i64, a: &CylinderUnion, t: i64, b: &CylinderUnion) -> Rational {
    measure_of_constraints(m, &ShiftedConstraintSet::new().with(s, a.clone()).with(t, b.clone()))
}

/// All `0 <= s < t <= bound` with `mu(T^{-s} A ∩ T^{-t} A) > 0`, sorted.
pub fn ra_search(m: &MarkovMeasure, a: &CylinderUnion, bound: i64) -> Result<Vec<RAPair>> {
    if measure_of(m, a).is_zero() {
        return Err(Error::ZeroMeasure(format!("set {}", a.describe())));
    }
    let mut out = Vec::new();
    for s in 0..=bound {
        for t in s + 1..=bound {
            let mu = pair_measure(m, s, a, t, a);
            if mu.is_positive() {
                out.push(RAPair { s, t, intersection_measure: mu });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityParams {
    /// Orbit length over which the witness density is measured.
    pub horizon: u64,
    /// Longest wait for the generic point to enter the target set.
    pub entry_horizon: usize,
    /// Shifts range over `0 <= s, t <= search_bound`.
    pub search_bound: i64,
    pub tail_fraction: Ratio<i64>,
    pub eps_grid: Vec<f64>,
    pub seed: u64,
}

impl Default for SensitivityParams {
    fn default() -> Self {
        SensitivityParams {
            horizon: 20_000,
            entry_horizon: 10_000,
            search_bound: 12,
            tail_fraction: Ratio::new(1, 2),
            eps_grid: default_eps_grid(),
            seed: 7,
        }
    }
}

/// Slack allowed between the measured density and eps.
fn tolerance(eps: f64) -> f64 {
    (eps / 2.0).min(0.02)
}

/// The first `(s, t)` in lexicographic order, `s != t`, with
/// `mu(T^{-s} A ∩ T^{-t} A) > 0` and `mu(T^{-s} U_x ∩ T^{-t} U_y) >= eps`.
fn choose_shifts(
    m: &MarkovMeasure,
    a: &CylinderUnion,
    ux: &CylinderUnion,
    uy: &CylinderUnion,
    eps: f64,
    bound: i64,
) -> Option<(i64, i64, Rational)> {
    for s in 0..=bound {
        for t in 0..=bound {
            if s == t {
                continue;
            }
            let target = pair_measure(m, s, ux, t, uy);
            if to_f64(&target) >= eps && pair_measure(m, s, a, t, a).is_positive() {
                return Some((s, t, target));
            }
        }
    }
    None
}

/// Largest exact `mu(T^{-s} U_x ∩ T^{-t} U_y)` over the admissible shifts.
fn best_target(m: &MarkovMeasure, a: &CylinderUnion, ux: &CylinderUnion, uy: &CylinderUnion, bound: i64) -> Rational {
    let mut best = Rational::zero();
    for s in 0..=bound {
        for t in 0..=bound {
            if s != t {
                let target = pair_measure(m, s, ux, t, uy);
                if target > best && pair_measure(m, s, a, t, a).is_positive() {
                    best = target;
                }
            }
        }
    }
    best
}

/// Builds `p, q in A` whose orbits visit `U_x` and `U_y` together with
/// density about `eps`.
///
/// A point `z` is sampled from the measure and followed to its first entry
/// time `e` into `T^{-s} A ∩ T^{-t} A`; then `p = T^{s+e} z`, `q = T^{t+e} z`
/// and the density of `{ g : T^g p in U_x, T^g q in U_y }` estimates
/// `mu(T^{-s} U_x ∩ T^{-t} U_y)`. The verdict is positive when the upper
/// density reaches `eps` up to a tolerance of `min(eps/2, 0.02)`.
#[allow(clippy::too_many_arguments)]
pub fn find_sensitivity_witnesses(
    sft: &Sft,
    m: &MarkovMeasure,
    a: &CylinderUnion,
    ux: &CylinderUnion,
    uy: &CylinderUnion,
    eps: f64,
    seed: u64,
    params: &SensitivityParams,
) -> Result<Verdict> {
    if measure_of(m, a).is_zero() {
        return Err(Error::ZeroMeasure(format!("set {}", a.describe())));
    }
    if ux.is_empty() || uy.is_empty() {
        return Err(Error::EmptySet("neighbourhood".into()));
    }
    let base = |v: Verdict| {
        v.with_param("eps", eps)
            .with_param("seed", seed)
            .with_param("horizon", params.horizon)
            .with_param("search_bound", params.search_bound)
    };
    let Some((s, t, target)) = choose_shifts(m, a, ux, uy, eps, params.search_bound) else {
        return Ok(base(Verdict::new(Classification::Negative, 0.0, "exact: no shifts reach eps")));
    };
    let entry_set = resolve_constraints(&ShiftedConstraintSet::new().with(s, a.clone()).with(t, a.clone()), sft)
        .ok_or_else(|| Error::EmptySet("shifted intersection".into()))?;
    let joint = resolve_constraints(&ShiftedConstraintSet::new().with(s, ux.clone()).with(t, uy.clone()), sft)
        .ok_or_else(|| Error::EmptySet("shifted neighbourhoods".into()))?;
    let found = crate::entropy::typical_point_in(m, &entry_set, &[&joint], params.entry_horizon, params.horizon, seed)?;
    let Some((z_e, e)) = found else {
        return Err(Error::NoEntry { horizon: params.entry_horizon });
    };
    // z_e = T^e z, so T^g p in U_x and T^g q in U_y iff T^{g} z_e in `joint`
    let hits = orbit_indicator(&z_e, &joint, params.horizon as usize)?;
    let d = density_of_indicator(&hits, params.tail_fraction)?;
    let value = d.upper_f64();
    let p = shift_point(&z_e, s);
    let q = shift_point(&z_e, t);
    let mut w = Witness::new(format!("(s,t)=({s},{t}) entry e={e}"));
    w.points = vec![p.describe(), q.describe()];
    w.shifts = vec![s + e as i64, t + e as i64];
    w.density = Some(value);
    w.target = Some(format_rational(&target));
    let class = if value >= eps - tolerance(eps) { Classification::Positive } else { Classification::Inconclusive };
    let mut v = Verdict::new(class, if class.is_positive() { eps } else { 0.0 }, "monte carlo: generic point first entry");
    v.witnesses.push(w);
    Ok(base(v))
}

/// Grid values not above `value`, largest first.
fn grid_at_most(grid: &[f64], value: f64) -> Vec<f64> {
    let mut g: Vec<f64> = grid.iter().copied().filter(|e| *e <= value && *e > 0.0).collect();
    g.sort_by(|a, b| b.partial_cmp(a).unwrap());
    g
}

fn check_cells(m: &MarkovMeasure, cells: &[CylinderUnion]) -> Result<()> {
    if cells.is_empty() {
        return Err(Error::InvalidArgument("empty cell family".into()));
    }
    for c in cells {
        if measure_of(m, c).is_zero() {
            return Err(Error::ZeroMeasure(format!("cell {}", c.describe())));
        }
    }
    Ok(())
}

/// Mean-sensitive pair classification of `(x, y)`.
///
/// For every level `d <= depth` and every cell `A`, the largest grid eps at
/// or below the best exact target `mu(T^{-s} U_x ∩ T^{-t} U_y)` is tried, and
/// smaller ones after it, until witnesses are certified. The pair is positive
/// when every level and cell certifies some eps; the certified eps is the
/// smallest over all of them.
pub fn classify_ms_pair(
    sft: &Sft,
    m: &MarkovMeasure,
    x: &PointRep,
    y: &PointRep,
    depth: usize,
    cell_family: &[CylinderUnion],
    params: &SensitivityParams,
) -> Result<Verdict> {
    check_distinct(x, y, depth)?;
    check_cells(m, cell_family)?;
    let mut certified = f64::INFINITY;
    let mut witnesses = Vec::new();
    let mut inconclusive = false;
    for d in 0..=depth {
        let ux = neighbourhood(sft, x, d)?;
        let uy = neighbourhood(sft, y, d)?;
        for (ci, a) in cell_family.iter().enumerate() {
            let best = to_f64(&best_target(m, a, &ux, &uy, params.search_bound));
            let mut ok = None;
            for eps in grid_at_most(&params.eps_grid, best) {
                let seed = derive_seed(params.seed, &[d as u64, ci as u64, eps.to_bits()]);
                let v = match find_sensitivity_witnesses(sft, m, a, &ux, &uy, eps, seed, params) {
                    Err(Error::NoEntry { .. }) => {
                        inconclusive = true;
                        continue;
                    }
                    other => other?,
                };
                if v.is_positive() {
                    ok = Some(v);
                    break;
                }
            }
            match ok {
                Some(v) => {
                    certified = certified.min(v.eps_certified);
                    let mut w = v.witnesses[0].clone();
                    w.label = format!("level {d} cell {}: {}", a.describe(), w.label);
                    witnesses.push(w);
                }
                None if inconclusive => {}
                None => {
                    let mut v = Verdict::new(Classification::Negative, 0.0, "exact targets and generic-point witnesses");
                    let mut w = Witness::new(format!(
                        "level {d} cell {}: best target {best:.6} certifies no grid eps",
                        a.describe()
                    ));
                    w.target = Some(format_rational(&best_target(m, a, &ux, &uy, params.search_bound)));
                    v.witnesses.push(w);
                    return Ok(ms_params(v, params, depth, cell_family.len()));
                }
            }
        }
    }
    let v = if inconclusive {
        Verdict::new(Classification::Inconclusive, 0.0, "entry horizon exhausted for some cell")
    } else {
        let mut v = Verdict::new(Classification::Positive, certified, "exact targets and generic-point witnesses");
        v.witnesses = witnesses;
        v
    };
    Ok(ms_params(v, params, depth, cell_family.len()))
}

fn ms_params(v: Verdict, p: &SensitivityParams, depth: usize, cells: usize) -> Verdict {
    v.with_param("depth", depth)
        .with_param("cells", cells)
        .with_param("horizon", p.horizon)
        .with_param("search_bound", p.search_bound)
        .with_param("seed", p.seed)
}

/// Horizon used for diameters of shifted sets.
const DIAM_HORIZON: usize = 16;

/// `diam(T^s A)` for `s` in `0..n`.
fn diam_sequence(sft: &Sft, a: &CylinderUnion, n: u64) -> Result<Vec<f64>> {
    (0..n as i64).map(|s| diam_of_set(&a.image(s), sft, DIAM_HORIZON).map(|d| d.value)).collect()
}

/// Tail maximum of `(1/|F_n|) sum_{s in F_n} diam(T^s A)`.
pub fn diam_mean_profile(sft: &Sft, _m: &MarkovMeasure, a: &CylinderUnion, windows: FolnerWindows, n_max: u64) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptySet("diameter profile of the empty set".into()));
    }
    if n_max < 10 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 10, got {n_max}")));
    }
    let start = n_max.div_ceil(2).max(1);
    let mut best = f64::NEG_INFINITY;
    match windows {
        FolnerWindows::Canonical => {
            let values = diam_sequence(sft, a, n_max)?;
            let mut sum = 0.0;
            for (i, v) in values.iter().enumerate() {
                sum += v;
                if i as u64 + 1 >= start {
                    best = best.max(sum / (i + 1) as f64);
                }
            }
        }
        _ => {
            let total: u64 = (start..=n_max).map(|n| windows.window(n).1).sum();
            if total > EVALUATION_CAP / 1000 {
                return Err(Error::CapExceeded { what: "diameter evaluations", got: total as usize, cap: (EVALUATION_CAP / 1000) as usize });
            }
            for n in start..=n_max {
                let (lo, len) = windows.window(n);
                let mut sum = 0.0;
                for s in lo..lo + len as i64 {
                    sum += diam_of_set(&a.image(s), sft, DIAM_HORIZON)?.value;
                }
                best = best.max(sum / len as f64);
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamParams {
    pub n_max: u64,
    pub eps_grid: Vec<f64>,
}

impl Default for DiamParams {
    fn default() -> Self {
        DiamParams { n_max: 400, eps_grid: default_eps_grid() }
    }
}

/// Diam-mean-sensitive pair classification of `(x, y)`.
///
/// For each level and cell `A`, `S = { s : A ∩ T^{-s} U_x != ∅ and
/// A ∩ T^{-s} U_y != ∅ }` is computed exactly by subshift feasibility; the
/// pair is positive when every such `S` has upper density above some grid eps.
pub fn classify_diam_pair(
    sft: &Sft,
    m: &MarkovMeasure,
    x: &PointRep,
    y: &PointRep,
    depth: usize,
    cell_family: &[CylinderUnion],
    params: &DiamParams,
) -> Result<Verdict> {
    check_distinct(x, y, depth)?;
    check_cells(m, cell_family)?;
    let mut certified = f64::INFINITY;
    let mut witnesses = Vec::new();
    for d in 0..=depth {
        let ux = neighbourhood(sft, x, d)?;
        let uy = neighbourhood(sft, y, d)?;
        for a in cell_family {
            let member = |s: i64| -> Result<bool> {
                Ok(!a.intersect(sft, &ux.preimage(s)).is_empty() && !a.intersect(sft, &uy.preimage(s)).is_empty())
            };
            let dens = density(member, FolnerWindows::Canonical, params.n_max, Ratio::new(1, 2))?;
            let value = dens.upper_f64();
            let label = format!("level {d} cell {}: upper density {} exact={}", a.describe(), dens.upper, dens.exact);
            match largest_below(&params.eps_grid, value) {
                Some(eps) => {
                    certified = certified.min(eps);
                    let mut w = Witness::new(label);
                    w.density = Some(value);
                    witnesses.push(w);
                }
                None => {
                    let mut v = Verdict::new(Classification::Negative, 0.0, "exact per-shift feasibility");
                    let mut w = Witness::new(label);
                    w.density = Some(value);
                    v.witnesses.push(w);
                    return Ok(v.with_param("depth", depth).with_param("n_max", params.n_max));
                }
            }
        }
    }
    let mut v = Verdict::new(Classification::Positive, certified, "exact per-shift feasibility");
    v.witnesses = witnesses;
    Ok(v.with_param("depth", depth).with_param("n_max", params.n_max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceParams {
    pub depth: usize,
    /// Cells are the positive-measure cylinders `[w]_0` with `|w| <= cell_len`.
    pub cell_len: usize,
    pub independence: InParams,
    pub sensitivity: SensitivityParams,
    pub diam: DiamParams,
    pub sequence: CrosscheckParams,
}

impl Default for EquivalenceParams {
    fn default() -> Self {
        EquivalenceParams {
            depth: 2,
            cell_len: 2,
            independence: InParams::default(),
            sensitivity: SensitivityParams::default(),
            diam: DiamParams::default(),
            sequence: CrosscheckParams::default(),
        }
    }
}

/// One row of the cross-check: the four pair notions for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub system: String,
    pub pair: String,
    pub independence: Verdict,
    pub mean_sensitive: Verdict,
    pub diam_mean_sensitive: Verdict,
    /// Positive when the separating two-set partition has positive sequence
    /// entropy along the greedy sequence.
    pub sequence_entropy: Verdict,
    pub in_equals_ms: bool,
    pub in_implies_diam: bool,
    pub ms_implies_diam: bool,
}

/// Verdict on the separating partition `{U, U^c}`, with `U = [x_n]_n` at the
/// smallest `|n|` where `x_n != y_n` (the negative `n` first on ties).
pub fn sequence_entropy_verdict(
    m: &MarkovMeasure,
    x: &PointRep,
    y: &PointRep,
    depth: usize,
    params: &CrosscheckParams,
) -> Result<Verdict> {
    check_distinct(x, y, depth)?;
    let sft = m.sft();
    let d = depth as i64;
    let mut n = 0;
    for r in 0..=d {
        if let Some(k) = [-r, r].into_iter().find(|&k| x.coordinate(k).ok() != y.coordinate(k).ok()) {
            n = k;
            break;
        }
    }
    let u = CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, n, vec![x.coordinate(n)?])?);
    let partition = Partition::two_set(sft, &u);
    let (times, profile) = crate::entropy::greedy_sequence(m, &partition, params)?;
    let rows = &profile.rows;
    let l = rows.len();
    let half = l / 2;
    let rate = if half > 0 { (rows[l - 1].h - rows[half - 1].h) / (l - half) as f64 } else { 0.0 };
    let mu = to_f64(&measure_of(m, &u));
    let eps_sep = ((mu * (1.0 - mu)).sqrt() / 2.0).max(f64::MIN_POSITIVE);
    let h = params.separation_horizon;
    let counts = (separation_count(m, &u, h, eps_sep)?, separation_count(m, &u, 2 * h, eps_sep)?);
    let positive = rate >= params.entropy_rate_threshold;
    let mut v = if positive {
        Verdict::new(Classification::Positive, rate, "exact joins along a greedy sequence")
    } else {
        Verdict::new(Classification::Negative, 0.0, "exact joins along a greedy sequence")
    };
    let mut w = Witness::new(format!(
        "partition {{U, U^c}} with U = {}; increment rate {rate:.6} nats; separation {} -> {}",
        u.describe(),
        counts.0,
        counts.1
    ));
    w.shifts = times;
    w.density = Some(rate);
    v.witnesses.push(w);
    Ok(v.with_param("coordinate", n).with_param("greedy_length", params.greedy_length))
}

/// Runs all four classifiers on every pair of every system.
pub fn equivalence_crosscheck(panel: &[PanelSystem], params: &EquivalenceParams) -> Result<Vec<EquivalenceRow>> {
    if panel.is_empty() {
        return Err(Error::InvalidArgument("empty panel".into()));
    }
    let mut rows = Vec::new();
    for sys in panel {
        if sys.pairs.is_empty() {
            return Err(Error::InvalidArgument(format!("system {} has no pairs", sys.id)));
        }
        for pi in 0..sys.pairs.len() {
            rows.push(equivalence_row(sys, pi, params)?);
        }
    }
    Ok(rows)
}

/// The cross-check row for pair `pair_index` of `sys`.
pub fn equivalence_row(sys: &PanelSystem, pair_index: usize, params: &EquivalenceParams) -> Result<EquivalenceRow> {
    let m = &sys.measure;
    let sft = m.sft();
    let cells = positive_cells(m, params.cell_len);
    let p = &sys.pairs[pair_index];
    let independence = classify_in_pair(sft, m, &p.x, &p.y, params.depth, &params.independence)?;
    let sens = SensitivityParams {
        seed: derive_seed(params.sensitivity.seed, &[pair_index as u64]),
        ..params.sensitivity.clone()
    };
    let mean_sensitive = classify_ms_pair(sft, m, &p.x, &p.y, params.depth, &cells, &sens)?;
    let diam_mean_sensitive = classify_diam_pair(sft, m, &p.x, &p.y, params.depth, &cells, &params.diam)?;
    let sequence_entropy = sequence_entropy_verdict(m, &p.x, &p.y, params.depth, &params.sequence)?;
    let (i, s, d) = (independence.is_positive(), mean_sensitive.is_positive(), diam_mean_sensitive.is_positive());
    Ok(EquivalenceRow {
        system: sys.id.clone(),
        pair: p.label.clone(),
        in_equals_ms: independence.classification == mean_sensitive.classification,
        in_implies_diam: !i || d,
        ms_implies_diam: !s || d,
        independence,
        mean_sensitive,
        diam_mean_sensitive,
        sequence_entropy,
    })
}

/// The independence verdict of pair `pair_index` with `count` random table
/// maps added to the adversaries. The maps keep `mu(E(s)) >= 1 - eps` at the
/// eps the plain verdict certified, or at the largest grid value when it was
/// not positive.
pub fn in_verdict_with_tables(
    sys: &PanelSystem,
    pair_index: usize,
    plain: &Verdict,
    params: &EquivalenceParams,
    count: usize,
    seed: u64,
) -> Result<Verdict> {
    let m = &sys.measure;
    let p = &sys.pairs[pair_index];
    let eps = if plain.is_positive() {
        plain.eps_certified
    } else {
        params.independence.eps_grid.iter().copied().fold(0.0, f64::max)
    };
    let horizon = params.independence.n_list.iter().copied().max().unwrap_or(1) as i64;
    let extras = random_table_maps(m, count, &from_decimal(eps)?, horizon, derive_seed(seed, &[pair_index as u64]))?;
    let mut in_params = params.independence.clone();
    in_params.extras.extend(extras);
    classify_in_pair(m.sft(), m, &p.x, &p.y, params.depth, &in_params)
}

/// Random finite probability spaces: in every trial, `pigeonhole_bound(a)`
/// random events of probability at least `a` contain two that intersect.
///
/// Point weights are positive integers, so two events meet in positive
/// measure exactly when they share a point.
pub fn pigeonhole_oracle(trials: usize, space_size: usize, a: &Rational, seed: u64) -> Result<bool> {
    if space_size == 0 || space_size > 20 {
        return Err(Error::InvalidArgument(format!("space size {space_size} outside 1..=20")));
    }
    let n = pigeonhole_bound(a)? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let weights: Vec<i64> = (0..space_size).map(|_| rng.random_range(1..=10)).collect();
        let total: i64 = weights.iter().sum();
        let prob = |mask: u32| {
            let w: i64 = (0..space_size).filter(|i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
            Rational::new(w.into(), total.into())
        };
        let family: Vec<u32> = (0..n)
            .map(|_| {
                let mut mask: u32 = rng.random::<u32>() & ((1u32 << space_size) - 1);
                while prob(mask) < *a {
                    mask |= 1 << rng.random_range(0..space_size);
                }
                mask
            })
            .collect();
        let meets = (0..n).any(|i| (i + 1..n).any(|j| family[i] & family[j] != 0));
        if !meets {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `a = 1/k`: `k = pigeonhole_bound(a) - 1` pairwise disjoint events of
/// probability `a` on the uniform `k`-point space, showing the bound cannot
/// be lowered. `None` when `1/a` is not an integer.
pub fn pigeonhole_counterexample(a: &Rational) -> Result<Option<Vec<u32>>> {
    let bound = pigeonhole_bound(a)?;
    let inv = a.recip();
    if !inv.is_integer() {
        return Ok(None);
    }
    let k = inv.to_integer().to_usize().unwrap();
    if k > 32 {
        return Err(Error::CapExceeded { what: "space size", got: k, cap: 32 });
    }
    let family: Vec<u32> = (0..k).map(|i| 1u32 << i).collect();
    debug_assert_eq!(family.len() as u64, bound - 1);
    Ok(Some(family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{bernoulli_measure, four_cycle_measure, golden_mean_measure};
    use crate::rational::rat;

    fn cyl(sft: &Sft, w: &[u8]) -> CylinderUnion {
        CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, 0, w.to_vec()).unwrap())
    }

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(pigeonhole_bound(&rat(1, 1)).unwrap(), 2);
        assert_eq!(pigeonhole_bound(&rat(1, 3)).unwrap(), 4);
        assert_eq!(pigeonhole_bound(&rat(2, 5)).unwrap(), 3);
        assert!(pigeonhole_bound(&rat(0, 1)).is_err());
        assert!(pigeonhole_oracle(200, 12, &rat(1, 3), 5).unwrap());
        assert!(pigeonhole_oracle(50, 12, &rat(1, 1), 5).unwrap());
        let fam = pigeonhole_counterexample(&rat(1, 4)).unwrap().unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(pigeonhole_counterexample(&rat(2, 5)).unwrap(), None);
    }

    #[test]
    fn ra_examples() {
        let b = bernoulli_measure();
        let all = ra_search(&b, &CylinderUnion::full(), 4).unwrap();
        assert_eq!(all.len(), 10);
        assert!(all.iter().all(|p| p.intersection_measure == rat(1, 1)));
        let zero = ra_search(&b, &cyl(b.sft(), &[0]), 4).unwrap();
        assert!(zero.iter().all(|p| p.intersection_measure == rat(1, 4)));
        let g = golden_mean_measure();
        let one = ra_search(&g, &cyl(g.sft(), &[1]), 3).unwrap();
        assert!(!one.iter().any(|p| (p.s, p.t) == (0, 1)));
        let p02 = one.iter().find(|p| (p.s, p.t) == (0, 2)).unwrap();
        assert_eq!(p02.intersection_measure, rat(1, 6));
        assert!(matches!(ra_search(&g, &CylinderUnion::empty(), 3), Err(Error::ZeroMeasure(_))));
    }

    #[test]
    fn witness_examples() {
        let b = bernoulli_measure();
        let s = b.sft();
        let params = SensitivityParams { horizon: 20_000, ..Default::default() };
        let v = find_sensitivity_witnesses(s, &b, &CylinderUnion::full(), &cyl(s, &[0]), &cyl(s, &[1]), 0.2, 3, &params).unwrap();
        assert!(v.is_positive());
        let w = &v.witnesses[0];
        assert!(w.label.starts_with("(s,t)=(0,1)"));
        assert_eq!(w.target.as_deref(), Some("1/4"));
        assert!((w.density.unwrap() - 0.25).abs() < 0.02);
        // no shifts can reach eps when the neighbourhoods never meet
        let g = golden_mean_measure();
        let gs = g.sft();
        let v = find_sensitivity_witnesses(gs, &g, &cyl(gs, &[0]), &cyl(gs, &[1]), &cyl(gs, &[1]), 0.9, 3, &params).unwrap();
        assert_eq!(v.classification, Classification::Negative);
        assert!(v.witnesses.is_empty());
    }

    #[test]
    fn cycle_witnesses_fail_on_single_point_cells() {
        let c = four_cycle_measure();
        let s = c.sft();
        let params = SensitivityParams::default();
        for a in 0..4u8 {
            for (x, y) in [(0u8, 1u8), (0, 2), (1, 3)] {
                for eps in [0.5, 0.1, 0.001] {
                    let v = find_sensitivity_witnesses(s, &c, &cyl(s, &[a]), &cyl(s, &[x]), &cyl(s, &[y]), eps, 1, &params).unwrap();
                    assert_eq!(v.classification, Classification::Negative);
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let b = bernoulli_measure();
        let s = b.sft();
        let zeros = PointRep::fixed(s, 0).unwrap();
        let ones = PointRep::fixed(s, 1).unwrap();
        let cells = positive_cells(&b, 2);
        let params = SensitivityParams { horizon: 5_000, ..Default::default() };
        let v = classify_ms_pair(s, &b, &zeros, &ones, 2, &cells, &params).unwrap();
        assert!(v.is_positive() && v.is_well_formed());
        let swapped = classify_ms_pair(s, &b, &ones, &zeros, 2, &cells, &params).unwrap();
        assert_eq!(v.classification, swapped.classification);
        assert!(matches!(classify_ms_pair(s, &b, &zeros, &zeros, 2, &cells, &params), Err(Error::IdenticalPoints { .. })));
        let d = classify_diam_pair(s, &b, &zeros, &ones, 2, &cells, &DiamParams::default()).unwrap();
        assert!(d.is_positive());
        assert!(d.witnesses.iter().all(|w| w.density == Some(1.0)));

        let c = four_cycle_measure();
        let cs = c.sft();
        let x = PointRep::periodic(cs, vec![0, 1, 2, 3]).unwrap();
        let y = PointRep::periodic(cs, vec![1, 2, 3, 0]).unwrap();
        let cells = positive_cells(&c, 2);
        assert_eq!(classify_ms_pair(cs, &c, &x, &y, 2, &cells, &params).unwrap().classification, Classification::Negative);
        assert_eq!(
            classify_diam_pair(cs, &c, &x, &y, 2, &cells, &DiamParams::default()).unwrap().classification,
            Classification::Negative
        );
    }

    #[test]
    fn diam_profile_examples() {
        for m in [bernoulli_measure(), golden_mean_measure(), four_cycle_measure()] {
            let v = diam_mean_profile(m.sft(), &m, &CylinderUnion::full(), FolnerWindows::Canonical, 100).unwrap();
            assert_eq!(v, 1.0);
        }
        let b = bernoulli_measure();
        let v = diam_mean_profile(b.sft(), &b, &cyl(b.sft(), &[0]), FolnerWindows::Canonical, 100).unwrap();
        // diam(A) = 1/2 and diam(T^s A) = 1 for s >= 1
        assert!((v - (1.0 - 0.5 / 100.0)).abs() < 1e-12);
        let c = four_cycle_measure();
        assert_eq!(diam_mean_profile(c.sft(), &c, &cyl(c.sft(), &[2]), FolnerWindows::Canonical, 100).unwrap(), 0.0);
    }
}
