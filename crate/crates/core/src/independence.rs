//! Independence sets of a pair of sets relative to a map `E`, largest
//! independence subsets of finite windows, and independence-pair
//! classification of pairs of points.
//!
//! `I` is an independence set for `(A_1, A_2)` relative to `E` when for every
//! `sigma : I -> {1, 2}` the set `⋂_{s in I} (E(s) ∩ T^{-s} A_{sigma(s)})` is
//! nonempty. `E(s)` enters unshifted.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{measure_of, MarkovMeasure};
use crate::rational::{format_rational, Rational};
use crate::symbolic::{neighbourhood, resolve_constraints, Cylinder, CylinderUnion, PointRep, ShiftedConstraintSet, Sft};
use crate::verdict::{default_eps_grid, Classification, Verdict, Witness};

/// Largest `|I|` accepted by [`is_independence_set`].
pub const SIGMA_CAP: usize = 20;
/// Largest window searched exhaustively.
pub const EXHAUSTIVE_CAP: usize = 24;
/// Largest number of overrides a table map may have inside a window.
pub const OVERRIDE_CAP: usize = 10;

/// A map `s -> E(s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EMap {
    ConstantE { set: CylinderUnion },
    TableE { default: CylinderUnion, overrides: BTreeMap<i64, CylinderUnion> },
}

impl EMap {
    /// `E ≡ X`.
    pub fn whole() -> Self {
        EMap::ConstantE { set: CylinderUnion::full() }
    }

    pub fn at(&self, s: i64) -> &CylinderUnion {
        match self {
            EMap::ConstantE { set } => set,
            EMap::TableE { default, overrides } => overrides.get(&s).unwrap_or(default),
        }
    }

    /// Smallest `mu(E(s))` over all `s`.
    pub fn min_measure(&self, m: &MarkovMeasure) -> Rational {
        match self {
            EMap::ConstantE { set } => measure_of(m, set),
            EMap::TableE { default, overrides } => {
                overrides.values().map(|e| measure_of(m, e)).fold(measure_of(m, default), |a, b| a.min(b))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            EMap::ConstantE { set } => format!("const {}", set.describe()),
            EMap::TableE { default, overrides } => {
                let o = overrides.iter().map(|(s, e)| format!("{s}:{}", e.describe())).collect::<Vec<_>>().join(" ");
                format!("table default {} [{o}]", default.describe())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub window: Vec<i64>,
    pub best_i: Vec<i64>,
    pub ratio: Ratio<i64>,
    pub e_map: EMap,
    /// The whole search space was covered, so `best_i` is a maximum.
    pub exhaustive: bool,
}

/// Incremental independence checking along increasing times.
///
/// After the times of `I` up to some `s` have been processed, every
/// assignment on them leaves an intersection; only its projection onto
/// coordinates that later constraints can touch matters, so equal projections
/// are merged. The frontier is the set of these projections.
struct Checker<'a> {
    sft: &'a Sft,
    sets: [&'a CylinderUnion; 2],
    /// Smallest coordinate either set depends on.
    a_min: i64,
}

type Frontier = BTreeSet<CylinderUnion>;

impl<'a> Checker<'a> {
    fn new(sft: &'a Sft, a1: &'a CylinderUnion, a2: &'a CylinderUnion) -> Self {
        let a_min = [a1, a2].iter().filter_map(|a| a.span().map(|s| s.0)).min().unwrap_or(0);
        Checker { sft, sets: [a1, a2], a_min }
    }

    fn root(&self, e: &CylinderUnion) -> Frontier {
        BTreeSet::from([e.clone()])
    }

    /// Adds time `s`; `None` when some assignment becomes empty. Later times
    /// must exceed `s`.
    fn extend(&self, frontier: &Frontier, s: i64) -> Option<Frontier> {
        let t = s + 1 + self.a_min;
        let mut out = BTreeSet::new();
        for state in frontier {
            for a in self.sets {
                let next = state.intersect(self.sft, &a.preimage(s));
                if next.is_empty() {
                    return None;
                }
                out.insert(next.project_right(self.sft, t));
            }
        }
        Some(out)
    }

    fn check(&self, e: &CylinderUnion, times: &[i64]) -> bool {
        if times.is_empty() {
            return true;
        }
        let mut f = self.root(e);
        for &s in times {
            match self.extend(&f, s) {
                Some(next) => f = next,
                None => return false,
            }
        }
        true
    }
}

/// `⋂_{s in I} E(s)`, the part of the intersection that does not depend on
/// the assignment.
fn e_total(e: &EMap, sft: &Sft, times: &[i64]) -> CylinderUnion {
    match e {
        EMap::ConstantE { set } => set.clone(),
        EMap::TableE { .. } => {
            let c: ShiftedConstraintSet = times.iter().map(|&s| (0, e.at(s).clone())).collect();
            resolve_constraints(&c, sft).unwrap_or_else(CylinderUnion::empty)
        }
    }
}

fn sorted_unique(i_set: &[i64]) -> Result<Vec<i64>> {
    let mut times = i_set.to_vec();
    times.sort_unstable();
    if times.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("repeated time in independence set".into()));
    }
    Ok(times)
}

/// Whether `i_set` is an independence set for `(a1, a2)` relative to `e`.
pub fn is_independence_set(sft: &Sft, a1: &CylinderUnion, a2: &CylinderUnion, i_set: &[i64], e: &EMap) -> Result<bool> {
    if i_set.len() > SIGMA_CAP {
        return Err(Error::CapExceeded { what: "independence set size", got: i_set.len(), cap: SIGMA_CAP });
    }
    let times = sorted_unique(i_set)?;
    if times.is_empty() {
        return Ok(true);
    }
    Ok(Checker::new(sft, a1, a2).check(&e_total(e, sft, &times), &times))
}

/// Largest independence subset of `window` relative to a constant root set,
/// by Russian-doll search: the maximum over each suffix of the window bounds
/// the search for the next longer suffix.
fn russian_doll(checker: &Checker, root: &CylinderUnion, window: &[i64]) -> Vec<i64> {
    let n = window.len();
    if n == 0 || root.is_empty() {
        return Vec::new();
    }
    let start = checker.root(root);
    let mut best_from = vec![0usize; n + 1];
    for idx in (0..n).rev() {
        let target = best_from[idx + 1] + 1;
        let found = checker
            .extend(&start, window[idx])
            .is_some_and(|f| exists(checker, window, &best_from, idx + 1, &f, 1, target));
        best_from[idx] = if found { target } else { best_from[idx + 1] };
    }
    // the lexicographically smallest set of the maximum size
    let target = best_from[0];
    let mut chosen = Vec::with_capacity(target);
    if target > 0 {
        collect(checker, window, &best_from, 0, &start, &mut chosen, target);
    }
    chosen
}

fn exists(checker: &Checker, window: &[i64], best_from: &[usize], pos: usize, f: &Frontier, size: usize, target: usize) -> bool {
    if size == target {
        return true;
    }
    for j in pos..window.len() {
        if size + best_from[j] < target {
            break;
        }
        if let Some(next) = checker.extend(f, window[j]) {
            if exists(checker, window, best_from, j + 1, &next, size + 1, target) {
                return true;
            }
        }
    }
    false
}

fn collect(
    checker: &Checker,
    window: &[i64],
    best_from: &[usize],
    pos: usize,
    f: &Frontier,
    chosen: &mut Vec<i64>,
    target: usize,
) -> bool {
    if chosen.len() == target {
        return true;
    }
    for j in pos..window.len() {
        if chosen.len() + best_from[j] < target {
            break;
        }
        if let Some(next) = checker.extend(f, window[j]) {
            chosen.push(window[j]);
            if collect(checker, window, best_from, j + 1, &next, chosen, target) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn greedy(checker: &Checker, root: &CylinderUnion, window: &[i64]) -> Vec<i64> {
    let mut f = checker.root(root);
    let mut chosen = Vec::new();
    if root.is_empty() {
        return chosen;
    }
    for &s in window {
        if let Some(next) = checker.extend(&f, s) {
            f = next;
            chosen.push(s);
        }
    }
    chosen
}

/// Larger first, then lexicographically smaller.
fn better(a: &[i64], b: &[i64]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// The largest `I ⊆ window` that is an independence set relative to `e`,
/// lexicographically smallest among those of that size.
///
/// Windows of at most [`EXHAUSTIVE_CAP`] times are searched exhaustively;
/// larger ones get a greedy set and `exhaustive = false`. A table map is
/// handled by splitting on which of its overridden times are used: with `Q`
/// the overridden times in `I`, the assignment-free part of the intersection
/// is `⋂_{s in Q} E(s)`, further cut by the default whenever `I` leaves `Q`.
pub fn max_independence_subset(
    sft: &Sft,
    a1: &CylinderUnion,
    a2: &CylinderUnion,
    window: &[i64],
    e: &EMap,
) -> Result<IndependenceReport> {
    let w = sorted_unique(window)?;
    let checker = Checker::new(sft, a1, a2);
    let exhaustive = w.len() <= EXHAUSTIVE_CAP;
    let search = |root: &CylinderUnion, sub: &[i64]| {
        if exhaustive {
            russian_doll(&checker, root, sub)
        } else {
            greedy(&checker, root, sub)
        }
    };
    let best = match e {
        EMap::ConstantE { set } => search(set, &w),
        EMap::TableE { default, overrides } => {
            let o: Vec<i64> = w.iter().copied().filter(|s| overrides.contains_key(s)).collect();
            if o.len() > OVERRIDE_CAP {
                return Err(Error::CapExceeded { what: "overrides inside the window", got: o.len(), cap: OVERRIDE_CAP });
            }
            let mut best: Vec<i64> = Vec::new();
            for mask in 0u32..1 << o.len() {
                let q: Vec<i64> = (0..o.len()).filter(|i| mask >> i & 1 == 1).map(|i| o[i]).collect();
                let eq = e_total(e, sft, &q);
                // I = Q exactly: no default involved
                if better(&q, &best) && !eq.is_empty() && checker.check(&eq, &q) {
                    best = q.clone();
                }
                let excluded: BTreeSet<i64> = o.iter().copied().filter(|s| !q.contains(s)).collect();
                let sub: Vec<i64> = w.iter().copied().filter(|s| !excluded.contains(s)).collect();
                let root = eq.intersect(sft, default);
                let cand = search(&root, &sub);
                if better(&cand, &best) {
                    best = cand;
                }
            }
            best
        }
    };
    let ratio = if w.is_empty() { Ratio::zero() } else { Ratio::new(best.len() as i64, w.len() as i64) };
    Ok(IndependenceReport { window: w, best_i: best, ratio, e_map: e.clone(), exhaustive })
}

/// For each `N`, the smallest best ratio on `{0, .., N-1}` over the family.
pub fn independence_density_profile(
    sft: &Sft,
    a1: &CylinderUnion,
    a2: &CylinderUnion,
    n_list: &[usize],
    e_family: &[EMap],
) -> Result<Vec<IndependenceReport>> {
    if e_family.is_empty() {
        return Err(Error::InvalidArgument("empty E family".into()));
    }
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let window: Vec<i64> = (0..n as i64).collect();
        let mut worst: Option<IndependenceReport> = None;
        for e in e_family {
            let r = max_independence_subset(sft, a1, a2, &window, e)?;
            if worst.as_ref().is_none_or(|w| r.ratio < w.ratio) {
                worst = Some(r);
            }
        }
        out.push(worst.unwrap());
    }
    Ok(out)
}

/// The constant map `E ≡ (T^{-s} U_x ∩ T^{-t} U_y)^c`.
pub fn bad_constant_e(m: &MarkovMeasure, s: i64, t: i64, ux: &CylinderUnion, uy: &CylinderUnion) -> EMap {
    let c = ShiftedConstraintSet::new().with(s, ux.clone()).with(t, uy.clone());
    let set = match resolve_constraints(&c, m.sft()) {
        Some(u) => u.complement(m.sft()),
        None => CylinderUnion::full(),
    };
    EMap::ConstantE { set }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InParams {
    pub n_list: Vec<usize>,
    /// Times `0 ≤ s, t ≤ ra_bound` used to build the constant adversaries.
    pub ra_bound: i64,
    /// Smallest ratio floor accepted as evidence of positive density.
    pub c_min: Ratio<i64>,
    pub eps_grid: Vec<f64>,
    /// Extra adversaries beyond `E ≡ X` and the constant ones.
    pub extras: Vec<EMap>,
}

impl Default for InParams {
    fn default() -> Self {
        InParams { n_list: vec![8, 16, 24], ra_bound: 3, c_min: Ratio::new(1, 20), eps_grid: default_eps_grid(), extras: Vec::new() }
    }
}

/// Checks that `x` and `y` differ somewhere in `[-depth, depth]`.
pub(crate) fn check_distinct(x: &PointRep, y: &PointRep, depth: usize) -> Result<()> {
    let d = depth as i64;
    if x.block(-d, d)? == y.block(-d, d)? {
        return Err(Error::IdenticalPoints { depth });
    }
    Ok(())
}

/// The constant adversaries for one pair of neighbourhoods, deduplicated.
pub fn adversary_family(m: &MarkovMeasure, ux: &CylinderUnion, uy: &CylinderUnion, ra_bound: i64) -> Vec<EMap> {
    let mut family = vec![EMap::whole()];
    for s in 0..=ra_bound {
        for t in 0..=ra_bound {
            if s == t {
                continue;
            }
            let e = bad_constant_e(m, s, t, ux, uy);
            let dup = family.iter().any(|f| match (f, &e) {
                (EMap::ConstantE { set: a }, EMap::ConstantE { set: b }) => a.same_set(m.sft(), b),
                _ => false,
            });
            if !dup {
                family.push(e);
            }
        }
    }
    family
}

/// Independence-pair classification of `(x, y)`.
///
/// At each level `d <= depth` the neighbourhoods are the centred cylinders
/// `[x_{-d} .. x_d]` and `[y_{-d} .. y_d]`. For each eps, the adversaries
/// with `mu(E(s)) >= 1 - eps` are admitted and the ratio floor is the
/// smallest best ratio over `n_list` and admitted maps. The pair is positive
/// when some eps keeps every level's floor at or above `c_min`; the largest
/// such eps is reported.
pub fn classify_in_pair(
    sft: &Sft,
    m: &MarkovMeasure,
    x: &PointRep,
    y: &PointRep,
    depth: usize,
    params: &InParams,
) -> Result<Verdict> {
    check_distinct(x, y, depth)?;
    if params.n_list.is_empty() {
        return Err(Error::InvalidArgument("empty n_list".into()));
    }
    // per level: (measure of E, worst report over n_list)
    let mut levels: Vec<Vec<(Rational, IndependenceReport)>> = Vec::new();
    for d in 0..=depth {
        let ux = neighbourhood(sft, x, d)?;
        let uy = neighbourhood(sft, y, d)?;
        let mut family = adversary_family(m, &ux, &uy, params.ra_bound);
        family.extend(params.extras.iter().cloned());
        let mut rows = Vec::with_capacity(family.len());
        for e in &family {
            let profile = independence_density_profile(sft, &ux, &uy, &params.n_list, std::slice::from_ref(e))?;
            let worst = profile.into_iter().min_by(|a, b| a.ratio.cmp(&b.ratio)).unwrap();
            rows.push((e.min_measure(m), worst));
        }
        levels.push(rows);
    }
    let floor_at = |eps: f64, level: &[(Rational, IndependenceReport)]| {
        level
            .iter()
            .filter(|(mu, _)| crate::rational::to_f64(mu) >= 1.0 - eps - 1e-12)
            .min_by(|a, b| a.1.ratio.cmp(&b.1.ratio))
            .map(|(_, r)| r.clone())
    };
    let mut grid = params.eps_grid.clone();
    grid.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for &eps in &grid {
        let floors: Vec<IndependenceReport> = levels.iter().map(|l| floor_at(eps, l).unwrap()).collect();
        if floors.iter().all(|r| r.ratio >= params.c_min) {
            let mut v = Verdict::new(Classification::Positive, eps, "exhaustive independence search over windows");
            v.witnesses = floors.iter().enumerate().map(|(d, r)| report_witness(d, r, eps)).collect();
            return Ok(in_params(v, params, depth));
        }
    }
    // the smallest eps admits the fewest adversaries; report its floors
    let eps = *grid.last().unwrap_or(&0.0);
    let mut v = Verdict::new(Classification::Negative, 0.0, "exhaustive independence search over windows");
    v.witnesses = levels
        .iter()
        .enumerate()
        .filter_map(|(d, l)| floor_at(eps, l).map(|r| (d, r)))
        .filter(|(_, r)| r.ratio < params.c_min)
        .map(|(d, r)| report_witness(d, &r, eps))
        .collect();
    Ok(in_params(v, params, depth))
}

fn report_witness(level: usize, r: &IndependenceReport, eps: f64) -> Witness {
    let mut w = Witness::new(format!(
        "level {level}: ratio {} at N={} eps={eps} I={:?} E={}",
        r.ratio,
        r.window.len(),
        r.best_i,
        r.e_map.describe()
    ));
    w.shifts = r.best_i.clone();
    w.target = Some(format_rational(&Rational::new((*r.ratio.numer()).into(), (*r.ratio.denom()).into())));
    w
}

fn in_params(v: Verdict, p: &InParams, depth: usize) -> Verdict {
    let n_list = p.n_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
    v.with_param("depth", depth)
        .with_param("n_list", n_list)
        .with_param("ra_bound", p.ra_bound)
        .with_param("c_min", p.c_min)
        .with_param("extras", p.extras.len())
}

/// `count` random table maps with `mu(E(s)) >= 1 - eps` everywhere.
///
/// Each map keeps `X` as default and overrides one to four times in
/// `0..horizon` with the complement of a random positive-measure cylinder of
/// measure at most `eps` placed near the origin.
pub fn random_table_maps(m: &MarkovMeasure, count: usize, eps: &Rational, horizon: i64, seed: u64) -> Result<Vec<EMap>> {
    if !eps.is_positive() || horizon <= 0 {
        return Err(Error::InvalidArgument("random table maps need eps > 0 and a positive horizon".into()));
    }
    let sft = m.sft();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let k = rng.random_range(1..=4);
        let mut overrides = BTreeMap::new();
        while overrides.len() < k {
            let s = rng.random_range(0..horizon);
            let start = rng.random_range(-1..=2);
            let mut len = rng.random_range(1..=3);
            let set = loop {
                let words = sft.words_of_length(len);
                let w = words[rng.random_range(0..words.len())].clone();
                let c = CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, start, w)?);
                let mu = measure_of(m, &c);
                if mu.is_positive() && &mu <= eps {
                    break c.complement(sft);
                }
                if len >= 24 {
                    return Err(Error::CapExceeded { what: "cylinder length for a table override", got: len, cap: 24 });
                }
                len += 1;
            };
            overrides.insert(s, set);
        }
        out.push(EMap::TableE { default: CylinderUnion::full(), overrides });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn golden() -> Sft {
        Sft::new(vec![vec![true, true], vec![true, false]]).unwrap()
    }

    fn cyl(sft: &Sft, w: &[u8]) -> CylinderUnion {
        CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, 0, w.to_vec()).unwrap())
    }

    fn cycle_measure() -> MarkovMeasure {
        let sft = Sft::new((0..4).map(|a| (0..4).map(|b| b == (a + 1) % 4).collect()).collect()).unwrap();
        let p = (0..4).map(|a| (0..4).map(|b| if b == (a + 1) % 4 { rat(1, 1) } else { rat(0, 1) }).collect()).collect();
        MarkovMeasure::new(sft, p).unwrap()
    }

    #[test]
    fn independence_set_examples() {
        let s = Sft::full(2).unwrap();
        assert!(is_independence_set(&s, &cyl(&s, &[0]), &cyl(&s, &[1]), &[0, 1, 2], &EMap::whole()).unwrap());
        let g = golden();
        let (a, b) = (cyl(&g, &[0]), cyl(&g, &[1]));
        assert!(!is_independence_set(&g, &a, &b, &[0, 1], &EMap::whole()).unwrap());
        assert!(is_independence_set(&g, &a, &b, &[0, 2], &EMap::whole()).unwrap());
        let big: Vec<i64> = (0..21).collect();
        assert!(matches!(
            is_independence_set(&g, &a, &b, &big, &EMap::whole()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn max_subset_examples() {
        let s = Sft::full(2).unwrap();
        let w: Vec<i64> = (0..6).collect();
        let r = max_independence_subset(&s, &cyl(&s, &[0]), &cyl(&s, &[1]), &w, &EMap::whole()).unwrap();
        assert_eq!(r.best_i, w);
        assert_eq!(r.ratio, Ratio::from(1));
        let g = golden();
        let r = max_independence_subset(&g, &cyl(&g, &[0]), &cyl(&g, &[1]), &w, &EMap::whole()).unwrap();
        assert_eq!(r.best_i, vec![0, 2, 4]);
        assert_eq!(r.ratio, Ratio::new(1, 2));
        assert!(r.exhaustive);
        let r = max_independence_subset(&g, &CylinderUnion::empty(), &cyl(&g, &[1]), &w, &EMap::whole()).unwrap();
        assert!(r.best_i.is_empty());
    }

    #[test]
    fn golden_profile_is_half() {
        let g = golden();
        let prof = independence_density_profile(&g, &cyl(&g, &[0]), &cyl(&g, &[1]), &[1, 5, 8, 12], &[EMap::whole()]).unwrap();
        for r in prof {
            let n = r.window.len() as i64;
            assert_eq!(r.ratio, Ratio::new((n + 1) / 2, n));
        }
    }

    #[test]
    fn cycle_profile_vanishes() {
        let m = cycle_measure();
        let sft = m.sft();
        let prof = independence_density_profile(sft, &cyl(sft, &[0]), &cyl(sft, &[2]), &[4, 8, 12], &[EMap::whole()]).unwrap();
        for r in prof {
            assert_eq!(r.best_i.len(), 1);
        }
    }

    #[test]
    fn bad_e_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let s = b.sft();
        let e = bad_constant_e(&b, 0, 0, &CylinderUnion::full(), &CylinderUnion::full());
        assert_eq!(e.min_measure(&b), rat(0, 1));
        let e = bad_constant_e(&b, 0, 1, &cyl(s, &[0]), &cyl(s, &[1]));
        assert_eq!(e.min_measure(&b), rat(3, 4));
        let e = bad_constant_e(&b, 0, 0, &cyl(s, &[0]), &cyl(s, &[1]));
        assert_eq!(e.min_measure(&b), rat(1, 1));
    }

    #[test]
    fn table_maps_split_on_overrides() {
        let s = Sft::full(2).unwrap();
        let (a, b) = (cyl(&s, &[0]), cyl(&s, &[1]));
        // E(2) pins x_2 = 0, which forbids sigma(2) = 2
        let e = EMap::TableE {
            default: CylinderUnion::full(),
            overrides: BTreeMap::from([(2, CylinderUnion::from_cylinder(&s, &Cylinder::new(&s, 2, vec![0]).unwrap()))]),
        };
        let w: Vec<i64> = (0..5).collect();
        let r = max_independence_subset(&s, &a, &b, &w, &e).unwrap();
        assert_eq!(r.best_i, vec![0, 1, 3, 4]);
        assert!(!is_independence_set(&s, &a, &b, &[0, 2], &e).unwrap());
        assert!(is_independence_set(&s, &a, &b, &[0, 3], &e).unwrap());
    }

    #[test]
    fn classify_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let s = b.sft();
        let zeros = PointRep::fixed(s, 0).unwrap();
        let ones = PointRep::fixed(s, 1).unwrap();
        let params = InParams { n_list: vec![8, 12], ..InParams::default() };
        let v = classify_in_pair(s, &b, &zeros, &ones, 3, &params).unwrap();
        assert!(v.is_positive() && v.is_well_formed());
        assert!(matches!(classify_in_pair(s, &b, &zeros, &zeros, 3, &params), Err(Error::IdenticalPoints { .. })));
        let c = cycle_measure();
        let x = PointRep::periodic(c.sft(), vec![0, 1, 2, 3]).unwrap();
        let y = PointRep::periodic(c.sft(), vec![2, 3, 0, 1]).unwrap();
        let params = InParams { n_list: vec![8, 24], ..InParams::default() };
        let v = classify_in_pair(c.sft(), &c, &x, &y, 2, &params).unwrap();
        assert_eq!(v.classification, Classification::Negative);
    }

    #[test]
    fn random_tables_respect_the_measure_floor() {
        let m = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let maps = random_table_maps(&m, 20, &rat(1, 10), 24, 9).unwrap();
        assert_eq!(maps, random_table_maps(&m, 20, &rat(1, 10), 24, 9).unwrap());
        for e in &maps {
            assert!(e.min_measure(&m) >= rat(9, 10));
            let EMap::TableE { overrides, .. } = e else { panic!("table expected") };
            assert!((1..=4).contains(&overrides.len()));
            assert!(overrides.keys().all(|s| (0..24).contains(s)));
        }
        assert!(random_table_maps(&m, 1, &rat(0, 1), 24, 9).is_err());
    }
}
