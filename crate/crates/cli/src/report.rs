//! Report rows, CSV and the JSON mirror.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// One line of the CSV report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment_id: String,
    pub system_id: String,
    pub operation: String,
    pub inputs_digest: String,
    pub outputs: String,
    pub verdict: String,
    pub witness_summary: String,
    /// Left empty unless timing is requested, so reruns stay byte-identical.
    pub runtime_ms: Option<u64>,
}

/// How a run ended, in increasing severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Inconclusive,
    Degenerate,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Degenerate => 2,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config_digest: String,
    pub rows: Vec<ReportRow>,
    /// Full witness data, one entry per row.
    pub details: Vec<serde_json::Value>,
    pub status: Status,
}

/// Fixed 12-decimal rendering of a real.
pub fn real(v: f64) -> String {
    format!("{v:.12}")
}

/// `key=value` pairs joined by `;`.
pub fn fields<I, K, V>(pairs: I) -> String
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    pairs.into_iter().map(|(k, v)| format!("{}={}", k.as_ref(), v.as_ref())).collect::<Vec<_>>().join(";")
}

impl Report {
    pub fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("rows serialize");
        }
        if self.rows.is_empty() {
            w.write_record([
                "experiment_id",
                "system_id",
                "operation",
                "inputs_digest",
                "outputs",
                "verdict",
                "witness_summary",
                "runtime_ms",
            ])
            .expect("header");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> std::io::Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{stem}.csv"));
        let json_path = dir.join(format!("{stem}.json"));
        std::fs::File::create(&csv_path)?.write_all(self.csv().as_bytes())?;
        std::fs::File::create(&json_path)?.write_all(self.json().as_bytes())?;
        Ok((csv_path, json_path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(timing: Option<u64>) -> ReportRow {
        ReportRow {
            experiment_id: "e".into(),
            system_id: "s".into(),
            operation: "op".into(),
            inputs_digest: "00".into(),
            outputs: fields([("a", "1/2"), ("b", &real(0.5))]),
            verdict: "exact".into(),
            witness_summary: "x, \"y\"".into(),
            runtime_ms: timing,
        }
    }

    #[test]
    fn csv_layout() {
        let r = Report { config_digest: "d".into(), rows: vec![row(None), row(Some(3))], details: vec![], status: Status::Ok };
        let text = r.csv();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment_id,system_id,operation,inputs_digest,outputs,verdict,witness_summary,runtime_ms");
        assert_eq!(lines[1], "e,s,op,00,a=1/2;b=0.500000000000,exact,\"x, \"\"y\"\"\",");
        assert!(lines[2].ends_with(",3"));
        assert!(!text.contains('\r'));
        let empty = Report { rows: vec![], ..r };
        assert_eq!(empty.csv().lines().count(), 1);
    }
}
