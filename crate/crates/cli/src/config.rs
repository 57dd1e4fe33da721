//! Experiment configuration files.
//!
//! A config is TOML with one `[[system]]` table per subshift and one
//! `[[experiment]]` table per run. Rationals are strings `"p/q"`, symbols are
//! base-36 digits, cylinders are `"word@start"` and points are
//! `"fixed:a"`, `"periodic:w"`, `"eventually:left|core|right"`,
//! `"window:lo:word:seed"` or `"sampled:seed:radius"`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use seqpairs_core::measure::{sample_point, MarkovMeasure};
use seqpairs_core::panel::{PanelPair, PanelSystem};
use seqpairs_core::rational::{format_rational, parse_rational, to_f64, Rational};
use seqpairs_core::symbolic::{Cylinder, CylinderUnion, PointKind, PointRep, Sft, Symbol, Word};

/// A config problem, tagged with the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError { field: field.into(), message: message.to_string() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub label: String,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub alphabet_size: usize,
    /// 0/1 adjacency matrix.
    pub allowed: Vec<Vec<u8>>,
    pub transition: Vec<Vec<String>>,
    /// Optional check on the stationary vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Entropy,
    Independence,
    Sensitivity,
    Crosscheck,
    Density,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Entropy => "entropy",
            Kind::Independence => "independence",
            Kind::Sensitivity => "sensitivity",
            Kind::Crosscheck => "crosscheck",
            Kind::Density => "density",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyParams {
    /// Two-set partition `{B, B^c}`; the generator partition when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<i64>>,
    /// `S = {0, .., n-1}` when `times` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndependenceParams {
    pub a1: Vec<String>,
    pub a2: Vec<String>,
    pub n_list: Vec<usize>,
    /// Constant `E`; the whole space when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityParams {
    /// The positive-measure set `A`; the whole space when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    pub ux: Vec<String>,
    pub uy: Vec<String>,
    pub eps: String,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosscheckParams {
    pub seed: u64,
    /// `"acceptance"` for the bundled panel; otherwise the pairs of the system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<String>>,
    /// Random table maps added to the independence adversaries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_maps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityParams {
    pub point: String,
    pub set: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<String>,
    pub n_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_fraction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Entropy(EntropyParams),
    Independence(IndependenceParams),
    Sensitivity(SensitivityParams),
    Crosscheck(CrosscheckParams),
    Density(DensityParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: String,
    pub kind: Kind,
    pub system: String,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub systems: Vec<SystemSpec>,
    pub experiments: Vec<ExperimentSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    system: Vec<SystemSpec>,
    #[serde(default)]
    experiment: Vec<toml::Table>,
}

fn take_string(t: &mut toml::Table, key: &str, field: &str) -> CResult<String> {
    match t.remove(key) {
        Some(toml::Value::String(s)) => Ok(s),
        Some(_) => Err(ConfigError::new(format!("{field}.{key}"), "expected a string")),
        None => Err(ConfigError::new(format!("{field}.{key}"), "missing")),
    }
}

fn toml_error(field: &str, e: toml::de::Error) -> ConfigError {
    ConfigError::new(field, e.message().trim())
}

impl ExperimentSpec {
    fn from_table(mut t: toml::Table, field: &str) -> CResult<Self> {
        let id = take_string(&mut t, "id", field)?;
        let kind_text = take_string(&mut t, "kind", field)?;
        let kind: Kind = serde::Deserialize::deserialize(toml::Value::String(kind_text.clone()))
            .map_err(|_| ConfigError::new(format!("{field}.kind"), format!("unknown kind {kind_text:?}")))?;
        let system = take_string(&mut t, "system", field)?;
        let value = toml::Value::Table(t);
        let params = match kind {
            Kind::Entropy => Params::Entropy(value.try_into().map_err(|e| toml_error(field, e))?),
            Kind::Independence => Params::Independence(value.try_into().map_err(|e| toml_error(field, e))?),
            Kind::Sensitivity => Params::Sensitivity(value.try_into().map_err(|e| toml_error(field, e))?),
            Kind::Crosscheck => Params::Crosscheck(value.try_into().map_err(|e| toml_error(field, e))?),
            Kind::Density => Params::Density(value.try_into().map_err(|e| toml_error(field, e))?),
        };
        Ok(ExperimentSpec { id, kind, system, params })
    }

    pub fn to_table(&self) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("id".into(), self.id.clone().into());
        t.insert("kind".into(), self.kind.as_str().into());
        t.insert("system".into(), self.system.clone().into());
        if let toml::Value::Table(p) = toml::Value::try_from(&self.params).expect("params serialize") {
            t.extend(p);
        }
        t
    }

    /// Every explicit seed of the experiment.
    pub fn seeds_mut(&mut self) -> Vec<&mut u64> {
        match &mut self.params {
            Params::Sensitivity(p) => p.seeds.iter_mut().collect(),
            Params::Crosscheck(p) => vec![&mut p.seed],
            _ => Vec::new(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> CResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let at = e.span().map(|s| format!("config (byte {})", s.start)).unwrap_or_else(|| "config".into());
            toml_error(&at, e)
        })?;
        let experiments = raw
            .experiment
            .into_iter()
            .enumerate()
            .map(|(i, t)| ExperimentSpec::from_table(t, &format!("experiment[{i}]")))
            .collect::<CResult<Vec<_>>>()?;
        let config = Config { systems: raw.system, experiments };
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        let mut root = toml::Table::new();
        let systems = self.systems.iter().map(|s| toml::Value::try_from(s).expect("system serializes")).collect();
        root.insert("system".into(), toml::Value::Array(systems));
        let exps = self.experiments.iter().map(|e| toml::Value::Table(e.to_table())).collect();
        root.insert("experiment".into(), toml::Value::Array(exps));
        toml::to_string(&root).expect("config serializes")
    }

    fn validate(&self) -> CResult<()> {
        let mut ids = BTreeMap::new();
        for (i, s) in self.systems.iter().enumerate() {
            if ids.insert(s.id.clone(), i).is_some() {
                return Err(ConfigError::new(format!("system[{i}].id"), format!("duplicate id {:?}", s.id)));
            }
            let built = build_system(s, &format!("system[{i}]"))?;
            for (j, p) in s.pairs.iter().enumerate() {
                let f = format!("system[{i}].pairs[{j}]");
                parse_point(built.sft(), &built, &p.x, &format!("{f}.x"))?;
                parse_point(built.sft(), &built, &p.y, &format!("{f}.y"))?;
            }
        }
        let mut exp_ids = BTreeMap::new();
        for (i, e) in self.experiments.iter().enumerate() {
            let f = format!("experiment[{i}]");
            if exp_ids.insert(e.id.clone(), i).is_some() {
                return Err(ConfigError::new(format!("{f}.id"), format!("duplicate id {:?}", e.id)));
            }
            let panel = matches!(&e.params, Params::Crosscheck(p) if p.panel.is_some());
            if !panel && !ids.contains_key(&e.system) {
                return Err(ConfigError::new(format!("{f}.system"), format!("unknown system {:?}", e.system)));
            }
            crate::run::prepare(self, e, &f)?;
        }
        Ok(())
    }

    pub fn system(&self, id: &str) -> Option<&SystemSpec> {
        self.systems.iter().find(|s| s.id == id)
    }
}

pub fn rational(text: &str, field: &str) -> CResult<Rational> {
    parse_rational(text).map_err(|e| ConfigError::new(field, e))
}

pub fn small_ratio(text: &str, field: &str) -> CResult<Ratio<i64>> {
    let r = rational(text, field)?;
    let n = i64::try_from(r.numer()).map_err(|_| ConfigError::new(field, "numerator out of range"))?;
    let d = i64::try_from(r.denom()).map_err(|_| ConfigError::new(field, "denominator out of range"))?;
    Ok(Ratio::new(n, d))
}

/// A positive real given as an exact rational string.
pub fn positive_real(text: &str, field: &str) -> CResult<f64> {
    let r = rational(text, field)?;
    let v = to_f64(&r);
    if v <= 0.0 {
        return Err(ConfigError::new(field, format!("{text:?} must be positive")));
    }
    Ok(v)
}

pub fn build_system(s: &SystemSpec, field: &str) -> CResult<MarkovMeasure> {
    let k = s.alphabet_size;
    if s.allowed.len() != k || s.allowed.iter().any(|r| r.len() != k) {
        return Err(ConfigError::new(format!("{field}.allowed"), format!("expected a {k}x{k} matrix")));
    }
    if s.allowed.iter().flatten().any(|&v| v > 1) {
        return Err(ConfigError::new(format!("{field}.allowed"), "entries must be 0 or 1"));
    }
    if s.transition.len() != k || s.transition.iter().any(|r| r.len() != k) {
        return Err(ConfigError::new(format!("{field}.transition"), format!("expected a {k}x{k} matrix")));
    }
    let allowed = s.allowed.iter().map(|r| r.iter().map(|&v| v == 1).collect()).collect();
    let sft = Sft::new(allowed).map_err(|e| ConfigError::new(format!("{field}.allowed"), e))?;
    let mut p = Vec::with_capacity(k);
    for (i, row) in s.transition.iter().enumerate() {
        let r = row
            .iter()
            .enumerate()
            .map(|(j, v)| rational(v, &format!("{field}.transition[{i}][{j}]")))
            .collect::<CResult<Vec<_>>>()?;
        p.push(r);
    }
    let m = MarkovMeasure::new(sft, p).map_err(|e| ConfigError::new(format!("{field}.transition"), e))?;
    if let Some(pi) = &s.stationary {
        let expected = pi
            .iter()
            .enumerate()
            .map(|(i, v)| rational(v, &format!("{field}.stationary[{i}]")))
            .collect::<CResult<Vec<_>>>()?;
        if expected.as_slice() != m.stationary() {
            let got: Vec<String> = m.stationary().iter().map(format_rational).collect();
            return Err(ConfigError::new(format!("{field}.stationary"), format!("stationary vector is {got:?}")));
        }
    }
    Ok(m)
}

fn word(sft: &Sft, text: &str, field: &str) -> CResult<Word> {
    text.chars()
        .map(|c| {
            let d = c.to_digit(36).ok_or_else(|| ConfigError::new(field, format!("bad symbol {c:?} in {text:?}")))?;
            let s = d as Symbol;
            sft.check_symbol(s).map_err(|e| ConfigError::new(field, e))?;
            Ok(s)
        })
        .collect()
}

pub fn word_text(w: &[Symbol]) -> String {
    w.iter().map(|s| char::from_digit(*s as u32, 36).expect("symbol below 36")).collect()
}

/// `"word@start"`.
pub fn parse_cylinder(sft: &Sft, text: &str, field: &str) -> CResult<Cylinder> {
    let (w, start) = text
        .split_once('@')
        .ok_or_else(|| ConfigError::new(field, format!("cylinder {text:?} is not of the form word@start")))?;
    let start: i64 = start.trim().parse().map_err(|_| ConfigError::new(field, format!("bad start in {text:?}")))?;
    let w = word(sft, w.trim(), field)?;
    Cylinder::new(sft, start, w).map_err(|e| ConfigError::new(field, e))
}

/// Union of the listed cylinders.
pub fn parse_union(sft: &Sft, specs: &[String], field: &str) -> CResult<CylinderUnion> {
    if specs.is_empty() {
        return Err(ConfigError::new(field, "empty cylinder list"));
    }
    let cyls = specs
        .iter()
        .enumerate()
        .map(|(i, s)| parse_cylinder(sft, s, &format!("{field}[{i}]")))
        .collect::<CResult<Vec<_>>>()?;
    Ok(CylinderUnion::from_cylinders(sft, &cyls))
}

pub fn parse_point(sft: &Sft, m: &MarkovMeasure, text: &str, field: &str) -> CResult<PointRep> {
    let (kind, rest) =
        text.split_once(':').ok_or_else(|| ConfigError::new(field, format!("point {text:?} has no kind prefix")))?;
    let num = |s: &str| -> CResult<i64> { s.parse().map_err(|_| ConfigError::new(field, format!("bad number {s:?}"))) };
    let seed = |s: &str| -> CResult<u64> { s.parse().map_err(|_| ConfigError::new(field, format!("bad seed {s:?}"))) };
    let core = |e: seqpairs_core::Error| ConfigError::new(field, e);
    match kind {
        "fixed" => {
            let w = word(sft, rest, field)?;
            if w.len() != 1 {
                return Err(ConfigError::new(field, "fixed point takes one symbol"));
            }
            PointRep::fixed(sft, w[0]).map_err(core)
        }
        "periodic" => PointRep::periodic(sft, word(sft, rest, field)?).map_err(core),
        "eventually" => {
            let parts: Vec<&str> = rest.split('|').collect();
            if parts.len() != 3 {
                return Err(ConfigError::new(field, "expected eventually:left|core|right"));
            }
            PointRep::eventually_periodic(sft, word(sft, parts[0], field)?, word(sft, parts[1], field)?, word(sft, parts[2], field)?)
                .map_err(core)
        }
        "window" => {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(ConfigError::new(field, "expected window:lo:word:seed"));
            }
            PointRep::sampled(sft, num(parts[0])?, word(sft, parts[1], field)?, seed(parts[2])?).map_err(core)
        }
        "sampled" => {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 2 {
                return Err(ConfigError::new(field, "expected sampled:seed:radius"));
            }
            let radius = num(parts[1])?;
            if radius <= 0 {
                return Err(ConfigError::new(field, "radius must be positive"));
            }
            sample_point(m, -radius, radius, seed(parts[0])?).map_err(core)
        }
        other => Err(ConfigError::new(field, format!("unknown point kind {other:?}"))),
    }
}

/// The config spelling of an unshifted point.
pub fn point_text(p: &PointRep) -> Option<String> {
    if p.offset() != 0 {
        return None;
    }
    Some(match p.kind() {
        PointKind::EventuallyPeriodic { left_period, core, right_period } => {
            if core.is_empty() && left_period == right_period {
                if left_period.len() == 1 {
                    format!("fixed:{}", word_text(left_period))
                } else {
                    format!("periodic:{}", word_text(left_period))
                }
            } else {
                format!("eventually:{}|{}|{}", word_text(left_period), word_text(core), word_text(right_period))
            }
        }
        PointKind::SampledWindow { lo, window, seed, .. } => format!("window:{lo}:{}:{seed}", word_text(window)),
    })
}

/// The config form of a panel system, pairs included.
pub fn system_spec(sys: &PanelSystem) -> SystemSpec {
    let m = &sys.measure;
    let sft = m.sft();
    SystemSpec {
        id: sys.id.clone(),
        description: sys.description.clone(),
        alphabet_size: sft.alphabet_size(),
        allowed: sft.allowed().iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect(),
        transition: m.transition().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        stationary: Some(m.stationary().iter().map(format_rational).collect()),
        pairs: sys
            .pairs
            .iter()
            .map(|p| PairSpec {
                label: p.label.clone(),
                x: point_text(&p.x).expect("panel points are unshifted"),
                y: point_text(&p.y).expect("panel points are unshifted"),
            })
            .collect(),
    }
}

/// Builds the panel system described by a spec.
pub fn panel_system(s: &SystemSpec, field: &str) -> CResult<PanelSystem> {
    let m = build_system(s, field)?;
    let pairs = s
        .pairs
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let f = format!("{field}.pairs[{j}]");
            Ok(PanelPair {
                label: p.label.clone(),
                x: parse_point(m.sft(), &m, &p.x, &format!("{f}.x"))?,
                y: parse_point(m.sft(), &m, &p.y, &format!("{f}.y"))?,
            })
        })
        .collect::<CResult<Vec<_>>>()?;
    Ok(PanelSystem { id: s.id.clone(), description: s.description.clone(), measure: m, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqpairs_core::panel::acceptance_panel;

    #[test]
    fn panel_round_trips() {
        for sys in acceptance_panel() {
            let spec = system_spec(&sys);
            let text = toml::to_string(&spec).unwrap();
            let back: SystemSpec = toml::from_str(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(panel_system(&back, "system").unwrap(), sys);
        }
    }

    #[test]
    fn specs_parse() {
        let sys = &acceptance_panel()[1];
        let m = &sys.measure;
        let s = m.sft();
        assert_eq!(parse_cylinder(s, "01@-1", "f").unwrap().start(), -1);
        assert!(parse_cylinder(s, "012@0", "f").is_err());
        assert!(parse_cylinder(s, "01", "f").is_err());
        let p = parse_point(s, m, "eventually:0||0", "f").unwrap();
        assert_eq!(point_text(&p).unwrap(), "fixed:0");
        assert!(parse_point(s, m, "periodic:11", "f").is_err());
        let q = parse_point(s, m, "sampled:3:10", "f").unwrap();
        assert_eq!(q.evaluable_range(), Some((-10, 10)));
        let e = parse_point(s, m, "spiral:0", "pairs[0].x").unwrap_err();
        assert_eq!(e.field, "pairs[0].x");
    }

    #[test]
    fn malformed_rational_names_the_field() {
        let text = r#"
[[system]]
id = "b"
alphabet_size = 2
allowed = [[1, 1], [1, 1]]
transition = [["1/2", "1/2"], ["1/0", "1/2"]]
"#;
        let e = Config::parse(text).unwrap_err();
        assert_eq!(e.field, "system[0].transition[1][0]");
        assert!(e.message.contains("zero denominator"));
    }
}
