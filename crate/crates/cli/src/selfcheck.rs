//! The acceptance suite behind `seqpairs selfcheck`.
//!
//! Each check recomputes its quantities from scratch and compares them with
//! an independent route: brute-force enumeration, a closed form, or a second
//! run.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;

use seqpairs_core::entropy::{separation_count, sequence_entropy_profile, shannon_entropy, Partition, SequenceS};
use seqpairs_core::folner::FolnerWindows;
use seqpairs_core::independence::{max_independence_subset, EMap};
use seqpairs_core::measure::{derive_seed, measure_of, measure_of_constraints, MarkovMeasure};
use seqpairs_core::oracle::{brute_max_independence, brute_measure};
use seqpairs_core::panel::{acceptance_panel, bernoulli_measure, four_cycle_measure, golden_mean_measure, PanelSystem};
use seqpairs_core::rational::{rat, Rational};
use seqpairs_core::sensitivity::{
    diam_mean_profile, equivalence_row, find_sensitivity_witnesses, in_verdict_with_tables, pigeonhole_bound,
    pigeonhole_counterexample, pigeonhole_oracle, EquivalenceParams, EquivalenceRow, SensitivityParams,
};
use seqpairs_core::symbolic::{resolve_constraints, Cylinder, CylinderUnion, ShiftedConstraintSet, Sft};
use seqpairs_core::verdict::Classification;

use crate::config::Config;
use crate::run::{run_config, RunOptions};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Outcome = Result<(bool, String), String>;

fn timed(index: usize, name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail.push_str(&format!("; over the {} s budget", b.as_secs()));
        }
    }
    CheckResult { index, name, passed, detail, elapsed }
}

fn cyl(sft: &Sft, start: i64, w: &[u8]) -> CylinderUnion {
    CylinderUnion::from_cylinder(sft, &Cylinder::new(sft, start, w.to_vec()).unwrap())
}

fn panel_measure(i: usize) -> MarkovMeasure {
    match i % 3 {
        0 => bernoulli_measure(),
        1 => golden_mean_measure(),
        _ => four_cycle_measure(),
    }
}

/// A random constraint set: up to four shifts in `[-3, 3]` of unions of up
/// to two cylinders starting in `[-2, 2]` with length at most 3.
fn random_constraints(sft: &Sft, seed: u64) -> ShiftedConstraintSet {
    let mut k = 0u64;
    let mut draw = |n: u64| {
        k += 1;
        derive_seed(seed, &[k]) % n
    };
    let count = 1 + draw(4);
    let mut c = ShiftedConstraintSet::new();
    for _ in 0..count {
        let shift = draw(7) as i64 - 3;
        let cyls: Vec<Cylinder> = (0..1 + draw(2))
            .map(|_| {
                let start = draw(5) as i64 - 2;
                let words = sft.words_of_length(1 + draw(3) as usize);
                let w = words[draw(words.len() as u64) as usize].clone();
                Cylinder::new(sft, start, w).unwrap()
            })
            .collect();
        c = c.with(shift, CylinderUnion::from_cylinders(sft, &cyls));
    }
    c
}

fn measure_engine() -> Outcome {
    let mut checked = 0;
    for i in 0..1000 {
        let m = panel_measure(i);
        let c = random_constraints(m.sft(), derive_seed(2024, &[i as u64]));
        if let Some((lo, hi)) = c.span() {
            if hi - lo + 1 > 14 {
                return Err(format!("set {i} spans {} coordinates", hi - lo + 1));
            }
        }
        let direct = measure_of_constraints(&m, &c);
        let resolved = resolve_constraints(&c, m.sft()).map(|u| measure_of(&m, &u)).unwrap_or_else(|| rat(0, 1));
        let brute = brute_measure(&m, &c).map_err(|e| e.to_string())?;
        if direct != resolved || direct != brute {
            return Ok((false, format!("set {i} disagrees: {c:?}")));
        }
        checked += 1;
    }
    Ok((true, format!("{checked} sets, three routes equal")))
}

fn entropy_exactness() -> Outcome {
    let log2 = 2f64.ln();
    let b = bernoulli_measure();
    let gen = Partition::generators(b.sft());
    let mut worst = 0f64;
    for k in 0..5u64 {
        let mut times: Vec<i64> = Vec::new();
        let mut j = 0;
        while times.len() < 12 {
            let t = (derive_seed(77, &[k, j]) % 60) as i64;
            j += 1;
            if !times.contains(&t) {
                times.push(t);
            }
        }
        times.sort_unstable();
        let profile = sequence_entropy_profile(&b, &gen, &SequenceS::new(times).unwrap()).map_err(|e| e.to_string())?;
        for r in &profile.rows {
            worst = worst.max((r.rate - log2).abs());
        }
    }
    let g = golden_mean_measure();
    let h1 = shannon_entropy(&g, &Partition::generators(g.sft())).map_err(|e| e.to_string())?;
    let g_err = (h1 - (3f64.ln() - 2.0 / 3.0 * log2)).abs();
    let c = four_cycle_measure();
    let mut cycle_max = 0f64;
    for s in [SequenceS::initial(12), SequenceS::new((0..12).map(|i| i * i).collect()).unwrap()] {
        let p = sequence_entropy_profile(&c, &Partition::generators(c.sft()), &s).map_err(|e| e.to_string())?;
        cycle_max = p.rows.iter().map(|r| r.h).fold(cycle_max, f64::max);
    }
    let ok = worst < 1e-12 && g_err < 1e-12 && cycle_max <= 4f64.ln() + 1e-12;
    Ok((ok, format!("bernoulli max |H_n/n - log 2| = {worst:.1e}; golden H_1 error {g_err:.1e}; cycle max H_n = {cycle_max:.6}")))
}

fn golden_law() -> Outcome {
    let s = golden_mean_measure().sft().clone();
    let (a, b) = (cyl(&s, 0, &[0]), cyl(&s, 0, &[1]));
    for n in 1..=12usize {
        let window: Vec<i64> = (0..n as i64).collect();
        let fast = max_independence_subset(&s, &a, &b, &window, &EMap::whole()).map_err(|e| e.to_string())?;
        let (brute, ratio) = brute_max_independence(&s, &a, &b, &window, &EMap::whole()).map_err(|e| e.to_string())?;
        let expected = n.div_ceil(2);
        if fast.best_i.len() != expected || brute != expected || ratio != Ratio::new(expected as i64, n as i64) {
            return Ok((false, format!("N = {n}: search {} brute {brute}, expected {expected}", fast.best_i.len())));
        }
    }
    Ok((true, "ceil(N/2) for N = 1..12, search equals 2^N enumeration".into()))
}

fn separation() -> Outcome {
    let b = bernoulli_measure();
    let zero = cyl(b.sft(), 0, &[0]);
    for h in 1..=64 {
        let c = separation_count(&b, &zero, h, 0.5).map_err(|e| e.to_string())?;
        if c != h {
            return Ok((false, format!("bernoulli horizon {h} gave {c}")));
        }
    }
    let c = four_cycle_measure();
    let mut most = 0;
    for w in [vec![0u8], vec![1], vec![0, 1], vec![2, 3, 0]] {
        let base = cyl(c.sft(), 0, &w);
        for eps in [1e-9, 1e-3, 0.1, 0.5, 0.7, 1.0] {
            for h in [1, 4, 17, 64, 256] {
                most = most.max(separation_count(&c, &base, h, eps).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok((most <= 4, format!("bernoulli count = horizon up to 64; cycle count at most {most}")))
}

fn witness_construction() -> Outcome {
    let b = bernoulli_measure();
    let s = b.sft();
    let (ux, uy) = (cyl(s, 0, &[0]), cyl(s, 0, &[1]));
    let params = SensitivityParams { horizon: 100_000, ..SensitivityParams::default() };
    let results: Vec<Result<Option<f64>, String>> = (1..=20u64)
        .into_par_iter()
        .map(|seed| {
            let v = find_sensitivity_witnesses(s, &b, &CylinderUnion::full(), &ux, &uy, 0.25, seed, &params)
                .map_err(|e| e.to_string())?;
            Ok(v.witnesses.first().and_then(|w| w.density))
        })
        .collect();
    let mut good = 0;
    let mut worst = 0f64;
    for r in results {
        if let Some(d) = r? {
            worst = worst.max((d - 0.25).abs());
            if (d - 0.25).abs() <= 0.02 {
                good += 1;
            }
        }
    }
    Ok((good >= 19, format!("{good}/20 seeds within 0.02 of 1/4, worst error {worst:.4}")))
}

fn panel_rows(panel: &[PanelSystem], params: &EquivalenceParams) -> Result<Vec<EquivalenceRow>, String> {
    let tasks: Vec<(usize, usize)> =
        panel.iter().enumerate().flat_map(|(si, s)| (0..s.pairs.len()).map(move |pi| (si, pi))).collect();
    tasks.par_iter().map(|&(si, pi)| equivalence_row(&panel[si], pi, params).map_err(|e| e.to_string())).collect()
}

fn equivalence(rows: &[EquivalenceRow]) -> Outcome {
    let mut problems = Vec::new();
    for r in rows {
        let all = [&r.independence, &r.mean_sensitive, &r.diam_mean_sensitive, &r.sequence_entropy];
        if !r.in_equals_ms {
            problems.push(format!("{}/{}: IN {} vs ms {}", r.system, r.pair, r.independence.classification, r.mean_sensitive.classification));
        }
        if r.system == "four_cycle" && all.iter().any(|v| v.classification != Classification::Negative) {
            problems.push(format!("{}/{} not all negative", r.system, r.pair));
        }
        if r.system == "bernoulli" && r.pair == "zeros/ones" && !all.iter().all(|v| v.is_positive()) {
            problems.push(format!("{}/{} not all positive", r.system, r.pair));
        }
    }
    let positive = rows.iter().filter(|r| r.independence.is_positive()).count();
    match problems.first() {
        None => Ok((true, format!("{} rows, {positive} positive, zero disagreements", rows.len()))),
        Some(p) => Ok((false, format!("{} problems, first: {p}", problems.len()))),
    }
}

fn table_maps(panel: &[PanelSystem], rows: &[EquivalenceRow], params: &EquivalenceParams) -> Outcome {
    let tasks: Vec<(usize, usize, &EquivalenceRow)> = panel
        .iter()
        .enumerate()
        .flat_map(|(si, s)| (0..s.pairs.len()).map(move |pi| (si, pi)))
        .zip(rows)
        .map(|((si, pi), r)| (si, pi, r))
        .collect();
    let changed: Vec<String> = tasks
        .par_iter()
        .map(|&(si, pi, r)| {
            let v = in_verdict_with_tables(&panel[si], pi, &r.independence, params, 50, derive_seed(31, &[si as u64]))
                .map_err(|e| e.to_string())?;
            let same = v.classification == r.independence.classification && v.eps_certified == r.independence.eps_certified;
            Ok((!same).then(|| format!("{}/{}", r.system, r.pair)))
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((changed.is_empty(), format!("50 table maps per row, {} verdicts changed {:?}", changed.len(), changed)))
}

fn pigeonhole() -> Outcome {
    for (i, a) in [rat(1, 3), rat(2, 5), rat(1, 2)].iter().enumerate() {
        if !pigeonhole_oracle(10_000, 12, a, derive_seed(99, &[i as u64])).map_err(|e| e.to_string())? {
            return Ok((false, format!("a disjoint family of {} events at a = {a}", pigeonhole_bound(a).unwrap())));
        }
    }
    for a in [rat(1, 2), rat(1, 3), rat(1, 4)] {
        let bound = pigeonhole_bound(&a).map_err(|e| e.to_string())?;
        let fam = pigeonhole_counterexample(&a).map_err(|e| e.to_string())?.ok_or("no counterexample")?;
        let k = fam.len() as u32;
        // the uniform law on k points
        let uniform = |mask: u32| Rational::new(mask.count_ones().into(), k.into());
        let disjoint = (0..fam.len()).all(|i| (i + 1..fam.len()).all(|j| fam[i] & fam[j] == 0));
        if fam.len() as u64 != bound - 1 || !disjoint || fam.iter().any(|&m| uniform(m) < a) {
            return Ok((false, format!("counterexample at a = {a} is not valid")));
        }
    }
    Ok((true, "10^4 trials at 1/3, 2/5, 1/2; disjoint families of size bound - 1 at 1/2, 1/3, 1/4".into()))
}

fn ms_implies_diam(panel: &[PanelSystem], rows: &[EquivalenceRow]) -> Outcome {
    let broken: Vec<String> = rows.iter().filter(|r| !r.ms_implies_diam).map(|r| format!("{}/{}", r.system, r.pair)).collect();
    let mut profiles = Vec::new();
    for sys in panel {
        let v = diam_mean_profile(sys.sft(), &sys.measure, &CylinderUnion::full(), FolnerWindows::Canonical, 400)
            .map_err(|e| e.to_string())?;
        profiles.push(v);
    }
    let ok = broken.is_empty() && profiles.iter().all(|v| *v == 1.0);
    Ok((ok, format!("ms => diam broken on {broken:?}; diam profile of X = {profiles:?}")))
}

fn determinism() -> Outcome {
    let text = crate::bundled::get("acceptance").ok_or("bundled acceptance config missing")?;
    let config = Config::parse(text).map_err(|e| e.to_string())?;
    let first = run_config(&config, &RunOptions { threads: Some(1), ..RunOptions::default() }).map_err(|e| e.to_string())?;
    let second = run_config(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
    let (a, b) = (first.csv(), second.csv());
    Ok((a == b, format!("{} rows, {} bytes, one thread vs the default pool", first.rows.len(), a.len())))
}

/// Runs the ten checks in order.
pub fn run_all(mut progress: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut record = |r: CheckResult| {
        progress(&r);
        out.push(r);
    };
    let secs = |s| Some(Duration::from_secs(s));
    record(timed(1, "exact measure engine", secs(60), measure_engine));
    record(timed(2, "entropy exactness", None, entropy_exactness));
    record(timed(3, "golden-mean independence law", secs(60), golden_law));
    record(timed(4, "separation counts", None, separation));
    record(timed(5, "witness construction", secs(120), witness_construction));

    let panel = acceptance_panel();
    let params = EquivalenceParams::default();
    let start = Instant::now();
    let rows = panel_rows(&panel, &params);
    let panel_time = start.elapsed();
    match rows {
        Ok(rows) => {
            let mut r6 = timed(6, "IN equals mean-sensitive on the panel", None, || equivalence(&rows));
            r6.elapsed += panel_time;
            record(r6);
            record(timed(7, "table maps change no verdict", None, || table_maps(&panel, &rows, &params)));
            record(timed(8, "pigeonhole bound", None, pigeonhole));
            record(timed(9, "mean-sensitive implies diam-mean-sensitive", None, || ms_implies_diam(&panel, &rows)));
        }
        Err(e) => {
            for (i, name) in [(6, "IN equals mean-sensitive on the panel"), (7, "table maps change no verdict")] {
                record(timed(i, name, None, || Err(e.clone())));
            }
            record(timed(8, "pigeonhole bound", None, pigeonhole));
            record(timed(9, "mean-sensitive implies diam-mean-sensitive", None, || Err(e.clone())));
        }
    }
    record(timed(10, "deterministic reports", None, determinism));
    out
}
