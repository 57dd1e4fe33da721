//! Turning validated experiments into report rows.

use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};

use seqpairs_core::entropy::{sequence_entropy_profile, Partition, SequenceS};
use seqpairs_core::folner::{density, FolnerWindows};
use seqpairs_core::independence::{independence_density_profile, EMap};
use seqpairs_core::measure::{derive_seed, MarkovMeasure};
use seqpairs_core::panel::{acceptance_panel, PanelSystem};
use seqpairs_core::sensitivity::{
    equivalence_row, find_sensitivity_witnesses, in_verdict_with_tables, EquivalenceParams, EquivalenceRow,
    SensitivityParams as CoreSensitivity,
};
use seqpairs_core::symbolic::{CylinderUnion, PointRep, Sft, Word};
use seqpairs_core::verdict::{Classification, Verdict};
use seqpairs_core::Error;

use crate::config::{
    panel_system, parse_point, parse_union, positive_real, rational, small_ratio, Config, ConfigError, ExperimentSpec,
    Params,
};
use crate::report::{fields, real, Report, ReportRow, Status};

/// A validated experiment, ready to run.
#[derive(Debug, Clone)]
pub enum Job {
    Entropy { m: MarkovMeasure, partition: Partition, times: SequenceS },
    Independence { sft: Sft, a1: CylinderUnion, a2: CylinderUnion, n_list: Vec<usize>, e: EMap },
    Sensitivity { m: MarkovMeasure, a: CylinderUnion, ux: CylinderUnion, uy: CylinderUnion, eps: f64, seeds: Vec<u64>, params: CoreSensitivity },
    Crosscheck { panel: Vec<PanelSystem>, params: EquivalenceParams, table_maps: usize, seed: u64 },
    Density { point: PointRep, set: CylinderUnion, windows: FolnerWindows, n_max: u64, tail_fraction: Ratio<i64> },
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces every seed `v` by `derive_seed(s, [v])`, cleared of its top
    /// bit so the config stays writable as TOML.
    pub seed_override: Option<u64>,
    pub threads: Option<usize>,
    pub timing: bool,
}

type CResult<T> = std::result::Result<T, ConfigError>;

fn windows_by_name(name: &str, field: &str) -> CResult<FolnerWindows> {
    match name {
        "canonical" => Ok(FolnerWindows::Canonical),
        "singleton" => Ok(FolnerWindows::Singleton),
        "lacunary" => Ok(FolnerWindows::Lacunary),
        other => Err(ConfigError::new(field, format!("unknown windows {other:?}"))),
    }
}

fn probability(text: &str, field: &str) -> CResult<f64> {
    let v = positive_real(text, field)?;
    if v > 1.0 {
        return Err(ConfigError::new(field, format!("{text:?} is above 1")));
    }
    Ok(v)
}

/// Checks an experiment against its system and builds the job.
pub fn prepare(config: &Config, e: &ExperimentSpec, field: &str) -> CResult<Job> {
    let measure = || -> CResult<MarkovMeasure> {
        let (i, spec) = config
            .systems
            .iter()
            .enumerate()
            .find(|(_, s)| s.id == e.system)
            .ok_or_else(|| ConfigError::new(format!("{field}.system"), format!("unknown system {:?}", e.system)))?;
        crate::config::build_system(spec, &format!("system[{i}]"))
    };
    match &e.params {
        Params::Entropy(p) => {
            let m = measure()?;
            let sft = m.sft();
            let partition = match &p.base {
                None => Partition::generators(sft),
                Some(b) => {
                    let f = format!("{field}.base");
                    let u = parse_union(sft, b, &f)?;
                    if u.is_empty() || u.is_full() {
                        return Err(ConfigError::new(f, "base set must be neither empty nor everything"));
                    }
                    Partition::two_set(sft, &u)
                }
            };
            let times = match (&p.times, p.n) {
                (Some(t), None) => SequenceS::new(t.clone()).map_err(|err| ConfigError::new(format!("{field}.times"), err))?,
                (None, Some(n)) if n > 0 => SequenceS::initial(n),
                (None, Some(_)) => return Err(ConfigError::new(format!("{field}.n"), "must be positive")),
                _ => return Err(ConfigError::new(field, "exactly one of times and n is required")),
            };
            Ok(Job::Entropy { m, partition, times })
        }
        Params::Independence(p) => {
            let m = measure()?;
            let sft = m.sft().clone();
            let a1 = parse_union(&sft, &p.a1, &format!("{field}.a1"))?;
            let a2 = parse_union(&sft, &p.a2, &format!("{field}.a2"))?;
            if p.n_list.is_empty() || p.n_list.contains(&0) {
                return Err(ConfigError::new(format!("{field}.n_list"), "expected positive window sizes"));
            }
            let e_map = match &p.e {
                None => EMap::whole(),
                Some(s) => EMap::ConstantE { set: parse_union(&sft, s, &format!("{field}.e"))? },
            };
            Ok(Job::Independence { sft, a1, a2, n_list: p.n_list.clone(), e: e_map })
        }
        Params::Sensitivity(p) => {
            let m = measure()?;
            let sft = m.sft();
            let a = match &p.a {
                None => CylinderUnion::full(),
                Some(a) => parse_union(sft, a, &format!("{field}.a"))?,
            };
            let ux = parse_union(sft, &p.ux, &format!("{field}.ux"))?;
            let uy = parse_union(sft, &p.uy, &format!("{field}.uy"))?;
            let eps = probability(&p.eps, &format!("{field}.eps"))?;
            if p.seeds.is_empty() {
                return Err(ConfigError::new(format!("{field}.seeds"), "at least one seed is required"));
            }
            let mut params = CoreSensitivity::default();
            if let Some(h) = p.horizon {
                if h == 0 {
                    return Err(ConfigError::new(format!("{field}.horizon"), "must be positive"));
                }
                params.horizon = h;
            }
            if let Some(b) = p.search_bound {
                if b < 1 {
                    return Err(ConfigError::new(format!("{field}.search_bound"), "must be at least 1"));
                }
                params.search_bound = b;
            }
            Ok(Job::Sensitivity { m, a, ux, uy, eps, seeds: p.seeds.clone(), params })
        }
        Params::Crosscheck(p) => {
            let panel = match p.panel.as_deref() {
                Some("acceptance") => acceptance_panel(),
                Some(other) => {
                    return Err(ConfigError::new(format!("{field}.panel"), format!("unknown panel {other:?}")));
                }
                None => {
                    let (i, spec) = config
                        .systems
                        .iter()
                        .enumerate()
                        .find(|(_, s)| s.id == e.system)
                        .ok_or_else(|| ConfigError::new(format!("{field}.system"), "unknown system"))?;
                    let sys = panel_system(spec, &format!("system[{i}]"))?;
                    if sys.pairs.is_empty() {
                        return Err(ConfigError::new(format!("system[{i}].pairs"), "crosscheck needs at least one pair"));
                    }
                    vec![sys]
                }
            };
            let mut params = EquivalenceParams::default();
            params.sensitivity.seed = p.seed;
            if let Some(d) = p.depth {
                params.depth = d;
            }
            if let Some(c) = p.cell_len {
                if c == 0 {
                    return Err(ConfigError::new(format!("{field}.cell_len"), "must be positive"));
                }
                params.cell_len = c;
            }
            if let Some(h) = p.horizon {
                if h == 0 {
                    return Err(ConfigError::new(format!("{field}.horizon"), "must be positive"));
                }
                params.sensitivity.horizon = h;
            }
            if let Some(n) = &p.n_list {
                if n.is_empty() || n.contains(&0) {
                    return Err(ConfigError::new(format!("{field}.n_list"), "expected positive window sizes"));
                }
                params.independence.n_list = n.clone();
            }
            if let Some(c) = &p.c_min {
                let f = format!("{field}.c_min");
                params.independence.c_min = small_ratio(c, &f)?;
                if params.independence.c_min <= Ratio::from(0) {
                    return Err(ConfigError::new(f, "must be positive"));
                }
            }
            if let Some(g) = &p.eps_grid {
                let grid = g
                    .iter()
                    .enumerate()
                    .map(|(i, v)| probability(v, &format!("{field}.eps_grid[{i}]")))
                    .collect::<CResult<Vec<_>>>()?;
                if grid.is_empty() {
                    return Err(ConfigError::new(format!("{field}.eps_grid"), "empty grid"));
                }
                params.independence.eps_grid = grid.clone();
                params.sensitivity.eps_grid = grid.clone();
                params.diam.eps_grid = grid;
            }
            for sys in &panel {
                for pair in &sys.pairs {
                    let d = params.depth as i64;
                    let differ = pair.x.block(-d, d).ok() != pair.y.block(-d, d).ok();
                    if !differ {
                        return Err(ConfigError::new(
                            format!("{field}.depth"),
                            format!("pair {} of {} agrees on [-{d}, {d}]", pair.label, sys.id),
                        ));
                    }
                }
            }
            Ok(Job::Crosscheck { panel, params, table_maps: p.table_maps.unwrap_or(0), seed: p.seed })
        }
        Params::Density(p) => {
            let m = measure()?;
            let sft = m.sft();
            let point = parse_point(sft, &m, &p.point, &format!("{field}.point"))?;
            let set = parse_union(sft, &p.set, &format!("{field}.set"))?;
            let windows = windows_by_name(p.windows.as_deref().unwrap_or("canonical"), &format!("{field}.windows"))?;
            if p.n_max == 0 {
                return Err(ConfigError::new(format!("{field}.n_max"), "must be positive"));
            }
            let tail_fraction = match &p.tail_fraction {
                None => Ratio::new(1, 2),
                Some(t) => {
                    let f = format!("{field}.tail_fraction");
                    let r = small_ratio(t, &f)?;
                    if r <= Ratio::from(0) || r > Ratio::from(1) {
                        return Err(ConfigError::new(f, "must lie in (0, 1]"));
                    }
                    r
                }
            };
            Ok(Job::Density { point, set, windows, n_max: p.n_max, tail_fraction })
        }
    }
}

/// `"p/q"`, with the denominator written even when it is 1.
pub fn ratio_text(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn inputs_digest(config: &Config, e: &ExperimentSpec) -> String {
    let mut text = toml::to_string(&e.to_table()).expect("experiment serializes");
    if let Some(s) = config.system(&e.system) {
        text.push_str(&toml::to_string(s).expect("system serializes"));
    }
    digest(&text)
}

/// Status implied by a core error.
pub fn error_status(err: &Error) -> Status {
    match err {
        Error::CapExceeded { .. } | Error::NoEntry { .. } | Error::WindowExceeded { .. } => Status::Inconclusive,
        _ => Status::Degenerate,
    }
}

fn verdict_status(v: &Verdict) -> Status {
    if v.classification == Classification::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Ok
    }
}

struct Outcome {
    rows: Vec<ReportRow>,
    details: Vec<serde_json::Value>,
    status: Status,
}

struct RowBuilder<'a> {
    e: &'a ExperimentSpec,
    digest: String,
    out: Outcome,
}

impl RowBuilder<'_> {
    fn push(&mut self, system: &str, operation: &str, outputs: String, verdict: &str, witness: String, detail: serde_json::Value) {
        self.out.rows.push(ReportRow {
            experiment_id: self.e.id.clone(),
            system_id: system.to_string(),
            operation: operation.to_string(),
            inputs_digest: self.digest.clone(),
            outputs,
            verdict: verdict.to_string(),
            witness_summary: witness,
            runtime_ms: None,
        });
        self.out.details.push(detail);
    }

    fn error(&mut self, system: &str, operation: &str, err: &Error) {
        self.out.status = self.out.status.max(error_status(err));
        let msg = err.to_string();
        self.push(system, operation, fields([("error", msg.as_str())]), "error", String::new(), json!({ "error": msg }));
    }

    fn note(&mut self, status: Status) {
        self.out.status = self.out.status.max(status);
    }
}

fn run_job(config: &Config, e: &ExperimentSpec, job: &Job) -> Outcome {
    let mut b = RowBuilder {
        e,
        digest: inputs_digest(config, e),
        out: Outcome { rows: Vec::new(), details: Vec::new(), status: Status::Ok },
    };
    let sys = e.system.as_str();
    match job {
        Job::Entropy { m, partition, times } => match sequence_entropy_profile(m, partition, times) {
            Ok(profile) => {
                for (row, t) in profile.rows.iter().zip(times.times()) {
                    let outputs = fields([("n", row.n.to_string()), ("h", real(row.h)), ("rate", real(row.rate))]);
                    let verdict = if profile.exact_measures { "exact" } else { "estimate" };
                    b.push(sys, "sequence_entropy", outputs, verdict, format!("s_n={t}"), json!({ "row": row, "time": t }));
                }
            }
            Err(err) => b.error(sys, "sequence_entropy", &err),
        },
        Job::Independence { sft, a1, a2, n_list, e: e_map } => {
            match independence_density_profile(sft, a1, a2, n_list, std::slice::from_ref(e_map)) {
                Ok(reports) => {
                    for (n, r) in n_list.iter().zip(&reports) {
                        let outputs = fields([
                            ("n", n.to_string()),
                            ("best", r.best_i.len().to_string()),
                            ("ratio", ratio_text(&r.ratio)),
                            ("exhaustive", r.exhaustive.to_string()),
                        ]);
                        let verdict = if r.exhaustive { "exhaustive" } else { "greedy" };
                        if !r.exhaustive {
                            b.note(Status::Inconclusive);
                        }
                        let i = r.best_i.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
                        b.push(sys, "max_independence", outputs, verdict, format!("I={{{i}}}"), json!(r));
                    }
                }
                Err(err) => b.error(sys, "max_independence", &err),
            }
        }
        Job::Sensitivity { m, a, ux, uy, eps, seeds, params } => {
            for &seed in seeds {
                let p = CoreSensitivity { seed, ..params.clone() };
                match find_sensitivity_witnesses(m.sft(), m, a, ux, uy, *eps, seed, &p) {
                    Ok(v) => {
                        b.note(verdict_status(&v));
                        let w = v.witnesses.first();
                        let target = w.and_then(|w| w.target.clone());
                        let dens = w.and_then(|w| w.density);
                        let err = match (&target, dens) {
                            (Some(t), Some(d)) => rational(t, "target").ok().map(|t| real((d - seqpairs_core::rational::to_f64(&t)).abs())),
                            _ => None,
                        };
                        let outputs = fields([
                            ("seed", seed.to_string()),
                            ("target", target.unwrap_or_else(|| "none".into())),
                            ("density", dens.map(real).unwrap_or_else(|| "none".into())),
                            ("abs_error", err.unwrap_or_else(|| "none".into())),
                            ("eps", real(*eps)),
                        ]);
                        b.push(sys, "sensitivity_witness", outputs, v.classification.as_str(), v.witness_summary(), json!(v));
                    }
                    Err(err) => b.error(sys, "sensitivity_witness", &err),
                }
            }
        }
        Job::Crosscheck { panel, params, table_maps, seed } => {
            let tasks: Vec<(usize, usize)> =
                panel.iter().enumerate().flat_map(|(si, s)| (0..s.pairs.len()).map(move |pi| (si, pi))).collect();
            let results: Vec<_> = tasks
                .par_iter()
                .map(|&(si, pi)| {
                    let row = equivalence_row(&panel[si], pi, params)?;
                    let tables = if *table_maps > 0 {
                        let s = derive_seed(*seed, &[si as u64]);
                        Some(in_verdict_with_tables(&panel[si], pi, &row.independence, params, *table_maps, s)?)
                    } else {
                        None
                    };
                    Ok::<_, Error>((row, tables))
                })
                .collect();
            for ((si, _), res) in tasks.iter().zip(results) {
                let sys_id = panel[*si].id.as_str();
                match res {
                    Ok((row, tables)) => crosscheck_row(&mut b, &row, tables.as_ref()),
                    Err(err) => b.error(sys_id, "crosscheck", &err),
                }
            }
        }
        Job::Density { point, set, windows, n_max, tail_fraction } => {
            let mut buf = Word::new();
            let pred = |s: i64| -> seqpairs_core::Result<bool> {
                let mut failure = None;
                let hit = set.contains_with(&mut buf, |c| match point.coordinate(c + s) {
                    Ok(v) => v,
                    Err(err) => {
                        failure.get_or_insert(err);
                        0
                    }
                });
                match failure {
                    Some(err) => Err(err),
                    None => Ok(hit),
                }
            };
            match density(pred, *windows, *n_max, *tail_fraction) {
                Ok(d) => {
                    let outputs = fields([
                        ("lower", ratio_text(&d.lower)),
                        ("upper", ratio_text(&d.upper)),
                        ("windows", windows.name().to_string()),
                        ("n_max", n_max.to_string()),
                    ]);
                    let verdict = if d.exact { "exact" } else { "estimate" };
                    b.push(sys, "density", outputs, verdict, point.describe(), json!(d));
                }
                Err(err) => b.error(sys, "density", &err),
            }
        }
    }
    b.out
}

fn crosscheck_row(b: &mut RowBuilder<'_>, row: &EquivalenceRow, tables: Option<&Verdict>) {
    let verdicts = [&row.independence, &row.mean_sensitive, &row.diam_mean_sensitive];
    let table_stable = tables.map(|t| {
        t.classification == row.independence.classification && t.eps_certified == row.independence.eps_certified
    });
    let mut out = vec![
        ("pair", row.pair.clone()),
        ("in", row.independence.classification.as_str().to_string()),
        ("ms", row.mean_sensitive.classification.as_str().to_string()),
        ("diam", row.diam_mean_sensitive.classification.as_str().to_string()),
        ("seq", row.sequence_entropy.classification.as_str().to_string()),
        ("in_eps", real(row.independence.eps_certified)),
        ("ms_eps", real(row.mean_sensitive.eps_certified)),
        ("diam_eps", real(row.diam_mean_sensitive.eps_certified)),
        ("in_equals_ms", row.in_equals_ms.to_string()),
        ("in_implies_diam", row.in_implies_diam.to_string()),
        ("ms_implies_diam", row.ms_implies_diam.to_string()),
    ];
    if let Some(s) = table_stable {
        out.push(("table_stable", s.to_string()));
    }
    let inconclusive = verdicts.iter().any(|v| v.classification == Classification::Inconclusive);
    let agree = row.in_equals_ms && row.in_implies_diam && row.ms_implies_diam && table_stable != Some(false);
    let verdict = if inconclusive {
        b.note(Status::Inconclusive);
        "inconclusive"
    } else if agree {
        "agree"
    } else {
        "disagree"
    };
    let witness = row.mean_sensitive.witnesses.first().map(|w| w.summary()).unwrap_or_default();
    b.push(&row.system, "crosscheck", fields(out), verdict, witness, json!({ "row": row, "with_tables": tables }));
}

/// The seed that replaces `v` under `--seed-override s`.
pub fn override_seed(s: u64, v: u64) -> u64 {
    derive_seed(s, &[v]) & i64::MAX as u64
}

/// Runs every experiment of `config`; rows keep the declared order whatever
/// the schedule.
pub fn run_config(config: &Config, opts: &RunOptions) -> CResult<Report> {
    let mut config = config.clone();
    if let Some(s) = opts.seed_override {
        for e in &mut config.experiments {
            for seed in e.seeds_mut() {
                *seed = override_seed(s, *seed);
            }
        }
    }
    let jobs = config
        .experiments
        .iter()
        .enumerate()
        .map(|(i, e)| prepare(&config, e, &format!("experiment[{i}]")))
        .collect::<CResult<Vec<_>>>()?;
    let work = || -> Vec<(Outcome, u64)> {
        config
            .experiments
            .par_iter()
            .zip(jobs.par_iter())
            .map(|(e, job)| {
                let start = Instant::now();
                let out = run_job(&config, e, job);
                (out, start.elapsed().as_millis() as u64)
            })
            .collect()
    };
    let results = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ConfigError::new("--threads", e))?
            .install(work),
        None => work(),
    };
    let mut report = Report { config_digest: digest(&config.to_toml()), rows: Vec::new(), details: Vec::new(), status: Status::Ok };
    for (mut out, ms) in results {
        if opts.timing {
            for r in &mut out.rows {
                r.runtime_ms = Some(ms);
            }
        }
        report.rows.extend(out.rows);
        report.details.extend(out.details);
        report.status = report.status.max(out.status);
    }
    Ok(report)
}
