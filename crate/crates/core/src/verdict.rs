//! Classification results shared by the sensitivity, independence and
//! entropy classifiers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Positive,
    Negative,
    /// A horizon or cap was hit before the question was settled.
    Inconclusive,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Positive => "positive",
            Classification::Negative => "negative",
            Classification::Inconclusive => "inconclusive",
        }
    }

    pub fn is_positive(&self) -> bool {
        *self == Classification::Positive
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence attached to a verdict: the points involved, the shifts used and
/// the density that was measured, plus the exact target when one is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub points: Vec<String>,
    pub shifts: Vec<i64>,
    pub density: Option<f64>,
    pub target: Option<String>,
}

impl Witness {
    pub fn new(label: impl Into<String>) -> Self {
        Witness { label: label.into(), points: Vec::new(), shifts: Vec::new(), density: None, target: None }
    }

    pub fn summary(&self) -> String {
        let mut s = self.label.clone();
        if !self.shifts.is_empty() {
            let shifts = self.shifts.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
            s.push_str(&format!(" shifts=({shifts})"));
        }
        if let Some(d) = self.density {
            s.push_str(&format!(" density={d:.6}"));
        }
        if let Some(t) = &self.target {
            s.push_str(&format!(" target={t}"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub classification: Classification,
    /// Largest eps certified; 0 unless positive.
    pub eps_certified: f64,
    pub witnesses: Vec<Witness>,
    /// Parameters the verdict was computed with, rendered as text.
    pub params: BTreeMap<String, String>,
    /// How the estimate was obtained.
    pub provenance: String,
}

impl Verdict {
    pub fn new(classification: Classification, eps_certified: f64, provenance: impl Into<String>) -> Self {
        Verdict {
            classification,
            eps_certified,
            witnesses: Vec::new(),
            params: BTreeMap::new(),
            provenance: provenance.into(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn is_positive(&self) -> bool {
        self.classification.is_positive()
    }

    /// Positive verdicts must carry a positive eps and at least one witness.
    pub fn is_well_formed(&self) -> bool {
        !self.is_positive() || (self.eps_certified > 0.0 && !self.witnesses.is_empty())
    }

    pub fn witness_summary(&self) -> String {
        self.witnesses.iter().map(Witness::summary).collect::<Vec<_>>().join("; ")
    }
}

/// The eps values a classifier tries, largest first: `0.5, 0.2, 0.1, .., 1e-4`.
pub fn default_eps_grid() -> Vec<f64> {
    let mut out = Vec::new();
    let mut scale = 1.0;
    while scale > 1e-4 {
        for m in [5.0, 2.0, 1.0] {
            let v: f64 = m * scale / 10.0;
            if v >= 1e-4 - 1e-12 {
                out.push(v);
            }
        }
        scale /= 10.0;
    }
    out
}

/// Largest grid value strictly below `value`.
pub fn largest_below(grid: &[f64], value: f64) -> Option<f64> {
    grid.iter().copied().filter(|e| *e < value).fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.max(e))))
}
