//! Shannon entropy of partitions, joins along time sequences, separation
//! counts of indicator orbits in `L^2`, the `d_f` pseudometric, and the
//! mean-sensitivity test for a single indicator function.
//!
//! Entropies are in nats.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folner::{density, density_of_indicator, DensityEstimate, FolnerWindows};
use crate::measure::{derive_seed, measure_of, measure_of_constraints, sample_point, MarkovMeasure};
use crate::rational::{format_rational, ln, to_f64, Rational};
use crate::symbolic::{orbit_indicator, shift_point, Cylinder, CylinderUnion, PointRep, ShiftedConstraintSet, Sft};
use crate::verdict::{default_eps_grid, largest_below, Classification, Verdict, Witness};

/// Longest sequence a join may run along.
pub const JOIN_CAP: usize = 14;

/// A finite measurable partition into pairwise disjoint nonempty atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    atoms: Vec<CylinderUnion>,
}

impl Partition {
    /// Checks disjointness, nonemptiness and total measure 1 under `m`.
    pub fn new(m: &MarkovMeasure, atoms: Vec<CylinderUnion>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidPartition("no atoms".into()));
        }
        let sft = m.sft();
        for (i, a) in atoms.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidPartition(format!("atom {i} is empty")));
            }
            for (j, b) in atoms.iter().enumerate().skip(i + 1) {
                if !a.intersect(sft, b).is_empty() {
                    return Err(Error::InvalidPartition(format!("atoms {i} and {j} overlap")));
                }
            }
        }
        let total: Rational = atoms.iter().map(|a| measure_of(m, a)).sum();
        if !total.is_one() {
            return Err(Error::InvalidPartition(format!("atom measures sum to {}", format_rational(&total))));
        }
        Ok(Partition { atoms })
    }

    /// `{X}`.
    pub fn trivial() -> Self {
        Partition { atoms: vec![CylinderUnion::full()] }
    }

    /// The time-zero partition `{[a]_0}`.
    pub fn generators(sft: &Sft) -> Self {
        let atoms = (0..sft.alphabet_size() as u8)
            .map(|a| CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, 0, vec![a]).unwrap()))
            .collect();
        Partition { atoms }
    }

    /// `{B, B^c}`, with an empty part dropped.
    pub fn two_set(sft: &Sft, b: &CylinderUnion) -> Self {
        let atoms: Vec<CylinderUnion> = [b.clone(), b.complement(sft)].into_iter().filter(|a| !a.is_empty()).collect();
        Partition { atoms }
    }

    pub fn atoms(&self) -> &[CylinderUnion] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Common refinement with `T^{-k} other`, dropping empty intersections.
    fn refine(&self, sft: &Sft, other: &Partition, k: i64) -> Partition {
        let shifted: Vec<CylinderUnion> = other.atoms.iter().map(|b| b.preimage(k)).collect();
        let atoms = self
            .atoms
            .iter()
            .flat_map(|a| shifted.iter().map(move |b| a.intersect(sft, b)))
            .filter(|c| !c.is_empty())
            .collect();
        Partition { atoms }
    }
}

/// A strictly increasing list of nonnegative times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceS(Vec<i64>);

impl SequenceS {
    pub fn new(times: Vec<i64>) -> Result<Self> {
        if times.iter().any(|t| *t < 0) {
            return Err(Error::InvalidArgument("sequence times must be nonnegative".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("sequence must be strictly increasing".into()));
        }
        Ok(SequenceS(times))
    }

    /// `{0, .., n-1}`.
    pub fn initial(n: usize) -> Self {
        SequenceS((0..n as i64).collect())
    }

    pub fn times(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub n: usize,
    pub h: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub rows: Vec<EntropyRow>,
    /// The atom measures behind every row were exact rationals.
    pub exact_measures: bool,
}

/// Compensated summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn entropy_of_measures(measures: &[Rational]) -> f64 {
    neumaier_sum(measures.iter().filter(|p| !p.is_zero()).map(|p| -to_f64(p) * ln(p)))
}

/// `H(P) = -sum mu(A) log mu(A)` in nats, with `0 log 0 = 0`.
pub fn shannon_entropy(m: &MarkovMeasure, p: &Partition) -> Result<f64> {
    let measures: Vec<Rational> = p.atoms.iter().map(|a| measure_of(m, a)).collect();
    let total: Rational = measures.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidPartition(format!("atom measures sum to {}", format_rational(&total))));
    }
    Ok(entropy_of_measures(&measures))
}

fn check_join_len(n: usize) -> Result<()> {
    if n > JOIN_CAP {
        return Err(Error::CapExceeded { what: "join length", got: n, cap: JOIN_CAP });
    }
    Ok(())
}

/// `⋁_i T^{-s_i} P`, keeping only nonempty atoms.
pub fn join_under_sequence(m: &MarkovMeasure, p: &Partition, s: &SequenceS) -> Result<Partition> {
    check_join_len(s.len())?;
    Ok(s.times().iter().fold(Partition::trivial(), |acc, &k| acc.refine(m.sft(), p, k)))
}

/// `H_n` and `H_n / n` for every prefix of `s`.
pub fn sequence_entropy_profile(m: &MarkovMeasure, p: &Partition, s: &SequenceS) -> Result<EntropyProfile> {
    check_join_len(s.len())?;
    let mut acc = Partition::trivial();
    let mut rows = Vec::with_capacity(s.len());
    for (i, &k) in s.times().iter().enumerate() {
        acc = acc.refine(m.sft(), p, k);
        let h = shannon_entropy(m, &acc)?;
        rows.push(EntropyRow { n: i + 1, h, rate: h / (i + 1) as f64 });
    }
    Ok(EntropyProfile { rows, exact_measures: true })
}

/// `||1_B - 1_{T^{-lag} B}||^2`; by invariance of the measure this is the
/// distance between any two shifts of `B` that are `lag` apart.
pub fn lag_distance_sq(m: &MarkovMeasure, base: &CylinderUnion, lag: i64) -> Rational {
    let mb = measure_of(m, base);
    let both = ShiftedConstraintSet::new().with(0, base.clone()).with(lag, base.clone());
    (mb - measure_of_constraints(m, &both)) * Rational::from_integer(2.into())
}

/// Size of the greedy eps-separated subset of `{1_{T^{-s} B} : 0 <= s < horizon}`
/// in `L^2(mu)`, taking each `s` in increasing order when it is farther than
/// `eps` from everything already taken.
pub fn separation_count(m: &MarkovMeasure, base: &CylinderUnion, horizon: usize, eps: f64) -> Result<usize> {
    if eps <= 0.0 || eps.is_nan() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let eps_sq = eps * eps;
    let mut far = vec![None; horizon];
    let mut chosen: Vec<usize> = Vec::new();
    for s in 0..horizon {
        let ok = chosen.iter().all(|&t| {
            let lag = s - t;
            *far[lag].get_or_insert_with(|| to_f64(&lag_distance_sq(m, base, lag as i64)) > eps_sq)
        });
        if ok {
            chosen.push(s);
        }
    }
    Ok(chosen.len())
}

/// `d_f(x, y) = limsup ((1/|F_n|) sum_{s in F_n} |f(T^s x) - f(T^s y)|^2)^{1/2}`
/// for `f = 1_b`, estimated by the tail maximum over `n <= n_max`.
pub fn df_estimate(x: &PointRep, y: &PointRep, b: &CylinderUnion, windows: FolnerWindows, n_max: u64) -> Result<f64> {
    let half = Ratio::new(1, 2);
    let d = if windows == FolnerWindows::Canonical {
        let ix = orbit_indicator(x, b, n_max as usize)?;
        let iy = orbit_indicator(y, b, n_max as usize)?;
        let diff: Vec<bool> = ix.iter().zip(&iy).map(|(a, c)| a != c).collect();
        density_of_indicator(&diff, half)?
    } else {
        density(|s| Ok(b.contains_point(x, s)? != b.contains_point(y, s)?), windows, n_max, half)?
    };
    Ok(d.upper_f64().sqrt())
}

/// Parameters of the Monte Carlo mean-sensitivity search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsTestParams {
    /// Orbit length over which densities are measured.
    pub n_max: u64,
    /// How far along a sampled orbit to look for the first entry into a cell.
    pub entry_horizon: usize,
    /// Independent point pairs tried per cell.
    pub attempts: usize,
    pub seed: u64,
    pub eps_grid: Vec<f64>,
    pub tail_fraction: Ratio<i64>,
}

impl Default for MsTestParams {
    fn default() -> Self {
        MsTestParams {
            n_max: 20_000,
            entry_horizon: 10_000,
            attempts: 2,
            seed: 1,
            eps_grid: default_eps_grid(),
            tail_fraction: Ratio::new(1, 2),
        }
    }
}

/// A `mu`-typical point of `cell`: a sampled orbit is followed until its first
/// visit to `cell`. The point stays evaluable for `extra` further steps past
/// the span of `reach`.
pub(crate) fn typical_point_in(
    m: &MarkovMeasure,
    cell: &CylinderUnion,
    reach: &[&CylinderUnion],
    entry_horizon: usize,
    extra: u64,
    seed: u64,
) -> Result<Option<(PointRep, usize)>> {
    let (mut lo, mut hi) = (0i64, 0i64);
    for s in reach.iter().chain(std::iter::once(&cell)) {
        if let Some((a, b)) = s.span() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    let z = sample_point(m, lo - 1, hi + entry_horizon as i64 + extra as i64 + 1, seed)?;
    let hits = orbit_indicator(&z, cell, entry_horizon)?;
    Ok(hits.iter().position(|h| *h).map(|e| (shift_point(&z, e as i64), e)))
}

/// Searches each cell `A` for sampled `p, q in A` with
/// `upper density { s : T^s p in b, T^s q not in b } > eps`.
///
/// The verdict certifies the largest grid eps that works for every cell;
/// it is negative as soon as one cell admits none.
pub fn ms_function_test(
    m: &MarkovMeasure,
    b: &CylinderUnion,
    cell_family: &[CylinderUnion],
    params: &MsTestParams,
) -> Result<Verdict> {
    if cell_family.is_empty() {
        return Err(Error::InvalidArgument("empty cell family".into()));
    }
    let bc = b.complement(m.sft());
    let mut certified = f64::INFINITY;
    let mut witnesses = Vec::new();
    let mut inconclusive = None;
    for (ci, cell) in cell_family.iter().enumerate() {
        if measure_of(m, cell).is_zero() {
            return Err(Error::ZeroMeasure(format!("cell {}", cell.describe())));
        }
        let mut best: Option<(f64, Witness)> = None;
        for attempt in 0..params.attempts {
            let mut pts = Vec::new();
            for side in 0..2u64 {
                let seed = derive_seed(params.seed, &[ci as u64, attempt as u64, side]);
                match typical_point_in(m, cell, &[b], params.entry_horizon, params.n_max, seed)? {
                    Some(p) => pts.push(p),
                    None => break,
                }
            }
            if pts.len() < 2 {
                inconclusive.get_or_insert(cell.describe());
                continue;
            }
            let ip = orbit_indicator(&pts[0].0, b, params.n_max as usize)?;
            let iq = orbit_indicator(&pts[1].0, &bc, params.n_max as usize)?;
            let both: Vec<bool> = ip.iter().zip(&iq).map(|(a, c)| *a && *c).collect();
            let d: DensityEstimate = density_of_indicator(&both, params.tail_fraction)?;
            let value = d.upper_f64();
            if best.as_ref().is_none_or(|(v, _)| value > *v) {
                let mut w = Witness::new(format!("cell {}", cell.describe()));
                w.points = vec![pts[0].0.describe(), pts[1].0.describe()];
                w.shifts = vec![pts[0].1 as i64, pts[1].1 as i64];
                w.density = Some(value);
                best = Some((value, w));
            }
        }
        let Some((value, w)) = best else { continue };
        match largest_below(&params.eps_grid, value) {
            Some(eps) => {
                certified = certified.min(eps);
                witnesses.push(w);
            }
            None => {
                let mut v = Verdict::new(Classification::Negative, 0.0, "monte carlo: no grid eps below the best density");
                v.witnesses.push(w);
                return Ok(ms_params(v, params));
            }
        }
    }
    if let Some(cell) = inconclusive {
        let mut v = Verdict::new(Classification::Inconclusive, 0.0, "monte carlo: entry horizon exhausted");
        v.witnesses.push(Witness::new(format!("no entry into cell {cell}")));
        return Ok(ms_params(v, params));
    }
    let mut v = Verdict::new(Classification::Positive, certified, "monte carlo: sampled pairs per cell");
    v.witnesses = witnesses;
    Ok(ms_params(v, params))
}

fn ms_params(v: Verdict, p: &MsTestParams) -> Verdict {
    v.with_param("n_max", p.n_max)
        .with_param("entry_horizon", p.entry_horizon)
        .with_param("attempts", p.attempts)
        .with_param("seed", p.seed)
}

/// Cylinders `[w]_0` of positive measure with `1 <= |w| <= max_len`.
pub fn positive_cells(m: &MarkovMeasure, max_len: usize) -> Vec<CylinderUnion> {
    let sft = m.sft();
    (1..=max_len)
        .flat_map(|n| sft.words_of_length(n))
        .map(|w| CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, 0, w).unwrap()))
        .filter(|c| !measure_of(m, c).is_zero())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckParams {
    pub ms: MsTestParams,
    /// Cells for the mean-sensitivity test; positive cylinders of length at
    /// most 2 when absent.
    pub cells: Option<Vec<CylinderUnion>>,
    /// Separation counts are compared at this horizon and twice it.
    pub separation_horizon: usize,
    pub greedy_length: usize,
    pub candidate_window: usize,
    /// Minimal per-step entropy increment, in nats, over the second half of
    /// the greedy sequence.
    pub entropy_rate_threshold: f64,
}

impl Default for CrosscheckParams {
    fn default() -> Self {
        CrosscheckParams {
            ms: MsTestParams::default(),
            cells: None,
            separation_horizon: 32,
            greedy_length: 10,
            candidate_window: 8,
            entropy_rate_threshold: 0.05,
        }
    }
}

/// Three independent signals on whether `1_b` fails to be almost periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub sensitive: Verdict,
    pub separation_eps: f64,
    pub separation_counts: (usize, usize),
    pub separation_growth: bool,
    pub greedy_s: Vec<i64>,
    pub greedy_profile: EntropyProfile,
    pub entropy_increment_rate: f64,
    pub entropy_positive: bool,
    pub agree: bool,
}

impl CrosscheckReport {
    pub fn sensitive_positive(&self) -> bool {
        self.sensitive.is_positive()
    }
}

/// Runs the mean-sensitivity test for `1_b`, compares separation counts at
/// two horizons, and grows a sequence greedily by entropy increment of the
/// partition `{b, b^c}`.
pub fn crosscheck_hms_hap(m: &MarkovMeasure, b: &CylinderUnion, params: &CrosscheckParams) -> Result<CrosscheckReport> {
    let sft = m.sft();
    let cells = params.cells.clone().unwrap_or_else(|| positive_cells(m, 2));
    let sensitive = ms_function_test(m, b, &cells, &params.ms)?;

    let mu = to_f64(&measure_of(m, b));
    let spread = (mu * (1.0 - mu)).sqrt() / 2.0;
    let separation_eps = if spread > 0.0 { spread } else { 0.5 };
    let h = params.separation_horizon;
    let counts = (separation_count(m, b, h, separation_eps)?, separation_count(m, b, 2 * h, separation_eps)?);

    let (greedy_s, greedy_profile) = greedy_sequence(m, &Partition::two_set(sft, b), params)?;
    let rows = &greedy_profile.rows;
    let l = rows.len();
    let half = l / 2;
    let rate = if l > half && half > 0 { (rows[l - 1].h - rows[half - 1].h) / (l - half) as f64 } else { 0.0 };
    let entropy_positive = rate >= params.entropy_rate_threshold;
    let separation_growth = counts.1 > counts.0;
    let s = sensitive.is_positive();
    Ok(CrosscheckReport {
        agree: s == separation_growth && s == entropy_positive,
        sensitive,
        separation_eps,
        separation_counts: counts,
        separation_growth,
        greedy_s,
        greedy_profile,
        entropy_increment_rate: rate,
        entropy_positive,
    })
}

/// `s_0 = 0`; each next time is the candidate among the following
/// `candidate_window` integers whose join has the largest entropy, the
/// earliest one on ties.
pub(crate) fn greedy_sequence(m: &MarkovMeasure, p: &Partition, params: &CrosscheckParams) -> Result<(Vec<i64>, EntropyProfile)> {
    let len = params.greedy_length.min(JOIN_CAP);
    let mut times = vec![0i64];
    let mut acc = Partition::trivial().refine(m.sft(), p, 0);
    let mut rows = vec![EntropyRow { n: 1, h: shannon_entropy(m, &acc)?, rate: 0.0 }];
    rows[0].rate = rows[0].h;
    while times.len() < len {
        let last = *times.last().unwrap();
        let mut best: Option<(f64, i64, Partition)> = None;
        for c in last + 1..=last + params.candidate_window as i64 {
            let next = acc.refine(m.sft(), p, c);
            let h = shannon_entropy(m, &next)?;
            if best.as_ref().is_none_or(|(bh, _, _)| h > bh + 1e-12) {
                best = Some((h, c, next));
            }
        }
        let (h, c, next) = best.unwrap();
        times.push(c);
        acc = next;
        rows.push(EntropyRow { n: times.len(), h, rate: h / times.len() as f64 });
    }
    Ok((times, EntropyProfile { rows, exact_measures: true }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn golden() -> MarkovMeasure {
        let sft = Sft::new(vec![vec![true, true], vec![true, false]]).unwrap();
        MarkovMeasure::new(sft, vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 1), rat(0, 1)]]).unwrap()
    }

    fn cycle() -> MarkovMeasure {
        let sft = Sft::new((0..4).map(|a| (0..4).map(|b| b == (a + 1) % 4).collect()).collect()).unwrap();
        let p = (0..4).map(|a| (0..4).map(|b| if b == (a + 1) % 4 { rat(1, 1) } else { rat(0, 1) }).collect()).collect();
        MarkovMeasure::new(sft, p).unwrap()
    }

    fn cyl(m: &MarkovMeasure, w: &[u8]) -> CylinderUnion {
        CylinderUnion::from_cylinder(m.sft(), &Cylinder::new(m.sft(), 0, w.to_vec()).unwrap())
    }

    #[test]
    fn entropy_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        assert_eq!(shannon_entropy(&b, &Partition::trivial()).unwrap(), 0.0);
        let h = shannon_entropy(&b, &Partition::generators(b.sft())).unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-15);
        let g = golden();
        let h = shannon_entropy(&g, &Partition::generators(g.sft())).unwrap();
        let expected = -(2.0 / 3.0) * (2.0f64 / 3.0).ln() - (1.0 / 3.0) * (1.0f64 / 3.0).ln();
        assert!((h - expected).abs() < 1e-15);
        assert!((h - (3f64.ln() - (2.0 / 3.0) * 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn partition_validation() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let zero = cyl(&b, &[0]);
        assert!(Partition::new(&b, vec![zero.clone(), cyl(&b, &[1])]).is_ok());
        assert!(matches!(Partition::new(&b, vec![zero.clone()]), Err(Error::InvalidPartition(_))));
        assert!(matches!(Partition::new(&b, vec![zero.clone(), CylinderUnion::full()]), Err(Error::InvalidPartition(_))));
        assert!(matches!(Partition::new(&b, vec![CylinderUnion::empty(), CylinderUnion::full()]), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn join_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let p = Partition::generators(b.sft());
        assert_eq!(join_under_sequence(&b, &p, &SequenceS::initial(1)).unwrap(), p);
        let j = join_under_sequence(&b, &p, &SequenceS::initial(2)).unwrap();
        assert_eq!(j.len(), 4);
        assert!(j.atoms().iter().all(|a| measure_of(&b, a) == rat(1, 4)));
        let g = golden();
        let j = join_under_sequence(&g, &Partition::generators(g.sft()), &SequenceS::initial(2)).unwrap();
        assert_eq!(j.len(), 3);
        assert!(matches!(
            join_under_sequence(&b, &p, &SequenceS::initial(15)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn profile_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let prof = sequence_entropy_profile(&b, &Partition::generators(b.sft()), &SequenceS::initial(12)).unwrap();
        for r in &prof.rows {
            assert!((r.rate - 2f64.ln()).abs() < 1e-12);
        }
        let c = cycle();
        let s = SequenceS::new(vec![0, 3, 4, 9, 10, 17]).unwrap();
        let prof = sequence_entropy_profile(&c, &Partition::generators(c.sft()), &s).unwrap();
        assert!(prof.rows.iter().all(|r| r.h <= 4f64.ln() + 1e-12));
        let prof = sequence_entropy_profile(&c, &Partition::trivial(), &s).unwrap();
        assert!(prof.rows.iter().all(|r| r.h == 0.0));
    }

    #[test]
    fn separation_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        for h in [1, 5, 40] {
            assert_eq!(separation_count(&b, &CylinderUnion::full(), h, 0.1).unwrap(), 1);
        }
        assert_eq!(separation_count(&b, &cyl(&b, &[0]), 64, 0.5).unwrap(), 64);
        let c = cycle();
        for eps in [0.01, 0.3, 0.7] {
            assert!(separation_count(&c, &cyl(&c, &[1]), 100, eps).unwrap() <= 4);
        }
        assert!(separation_count(&b, &cyl(&b, &[0]), 5, 0.0).is_err());
    }

    #[test]
    fn df_examples() {
        let s = Sft::full(2).unwrap();
        let b = CylinderUnion::from_cylinder(&s, &Cylinder::new(&s, 0, vec![0]).unwrap());
        let zeros = PointRep::fixed(&s, 0).unwrap();
        let ones = PointRep::fixed(&s, 1).unwrap();
        let alt = PointRep::periodic(&s, vec![0, 1]).unwrap();
        assert_eq!(df_estimate(&zeros, &zeros, &b, FolnerWindows::Canonical, 100).unwrap(), 0.0);
        assert_eq!(df_estimate(&zeros, &ones, &b, FolnerWindows::Canonical, 100).unwrap(), 1.0);
        let d = df_estimate(&alt, &zeros, &b, FolnerWindows::Canonical, 100).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(d, df_estimate(&zeros, &alt, &b, FolnerWindows::Canonical, 100).unwrap());
    }

    #[test]
    fn ms_test_examples() {
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let params = MsTestParams { n_max: 5_000, ..MsTestParams::default() };
        let v = ms_function_test(&b, &cyl(&b, &[0]), &positive_cells(&b, 2), &params).unwrap();
        assert!(v.is_positive() && v.is_well_formed());
        assert!(v.eps_certified >= 0.2);
        for trivial in [CylinderUnion::full(), CylinderUnion::empty()] {
            let v = ms_function_test(&b, &trivial, &positive_cells(&b, 1), &params).unwrap();
            assert_eq!(v.classification, Classification::Negative);
        }
        let c = cycle();
        let v = ms_function_test(&c, &cyl(&c, &[0]), &positive_cells(&c, 2), &params).unwrap();
        assert_eq!(v.classification, Classification::Negative);
        assert!(ms_function_test(&b, &cyl(&b, &[0]), &[], &params).is_err());
    }

    #[test]
    fn crosscheck_examples() {
        let params = CrosscheckParams { ms: MsTestParams { n_max: 5_000, ..MsTestParams::default() }, ..Default::default() };
        let b = MarkovMeasure::uniform_bernoulli(2).unwrap();
        let r = crosscheck_hms_hap(&b, &cyl(&b, &[0]), &params).unwrap();
        assert!(r.agree && r.sensitive_positive() && r.separation_growth && r.entropy_positive);
        assert!((r.entropy_increment_rate - 2f64.ln()).abs() < 1e-12);
        let c = cycle();
        let r = crosscheck_hms_hap(&c, &cyl(&c, &[2]), &params).unwrap();
        assert!(r.agree && !r.sensitive_positive() && !r.separation_growth && !r.entropy_positive);
        let r = crosscheck_hms_hap(&b, &CylinderUnion::full(), &params).unwrap();
        assert!(r.agree && !r.sensitive_positive());
    }
}
