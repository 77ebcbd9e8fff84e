use std::io::Write;

use serde::Serialize;

use crate::error::{QtmError, Result};

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// CSV text: floats carry 17 significant digits.
    pub fn to_csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

/// Largest deviation of a computed column from its closed-form counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        }
    }

    /// Folds an iterator of deviations into one check.
    pub fn from_deviations(name: impl Into<String>, deviations: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let worst = deviations.into_iter().fold(0.0f64, |acc, d| {
            if d.is_nan() || acc.is_nan() {
                f64::NAN
            } else {
                acc.max(d)
            }
        });
        Check::new(name, worst, tolerance)
    }
}

/// Tabular output of one experiment plus its summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    /// Informational `(key, value)` pairs.
    pub notes: Vec<(String, String)>,
}

impl ExperimentResult {
    pub fn new(experiment: impl Into<String>, columns: &[&str]) -> Self {
        ExperimentResult {
            experiment: experiment.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    /// `# key: value` lines, then one line per check.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.notes.iter().map(|(k, v)| format!("# {k}: {v}")).collect();
        for c in &self.checks {
            lines.push(format!(
                "# check {}: max_abs_dev={:.3e} tol={:.1e} {}",
                c.name,
                c.max_deviation,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            ));
        }
        lines
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| QtmError::InvalidArgument(format!("csv output: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field)).map_err(io)?;
        }
        w.flush()
            .map_err(|e| QtmError::InvalidArgument(format!("csv output: {e}")))
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            experiment: &'a str,
            columns: &'a [String],
            rows: &'a [Vec<Cell>],
            summary: Summary<'a>,
        }
        #[derive(Serialize)]
        struct Summary<'a> {
            notes: serde_json::Map<String, serde_json::Value>,
            checks: &'a [Check],
            passed: bool,
        }
        let notes = self
            .notes
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let doc = Doc {
            experiment: &self.experiment,
            columns: &self.columns,
            rows: &self.rows,
            summary: Summary {
                notes,
                checks: &self.checks,
                passed: self.passed(),
            },
        };
        let io = |e: std::io::Error| QtmError::InvalidArgument(format!("json output: {e}"));
        serde_json::to_writer_pretty(&mut out, &doc)
            .map_err(|e| QtmError::InvalidArgument(format!("json output: {e}")))?;
        writeln!(out).map_err(io)?;
        out.flush().map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentResult {
        let mut r = ExperimentResult::new("demo", &["n", "value", "extra"]);
        r.push_row(vec![Cell::from(0usize), Cell::from(0.1), Cell::Empty]);
        r.push_row(vec![Cell::from(1usize), Cell::from(-1.0 / 3.0), Cell::Text("x".into())]);
        r.checks.push(Check::new("demo", 1e-13, 1e-12));
        r.note("points", 2);
        r
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,value,extra\n0,1.0000000000000001e-1,\n1,-3.3333333333333331e-1,x\n"
        );
        let back: f64 = "-3.3333333333333331e-1".parse().unwrap();
        assert_eq!(back, -1.0 / 3.0);
    }

    #[test]
    fn json_round_trips() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["columns"][1], "value");
        assert_eq!(v["rows"][1][1].as_f64().unwrap(), -1.0 / 3.0);
        assert!(v["rows"][0][2].is_null());
        assert_eq!(v["summary"]["passed"], true);
        assert_eq!(v["summary"]["notes"]["points"], "2");
    }

    #[test]
    fn checks_fail_on_nan() {
        let c = Check::from_deviations("x", [1e-14, f64::NAN, 0.0], 1e-12);
        assert!(!c.passed);
        let c = Check::from_deviations("x", [1e-14, 2e-13], 1e-12);
        assert!(c.passed);
        assert_eq!(c.max_deviation, 2e-13);
    }

    #[test]
    fn summary_lines_format() {
        let lines = sample().summary_lines();
        assert_eq!(lines[0], "# points: 2");
        assert!(lines[1].starts_with("# check demo: max_abs_dev=1.000e-13"));
        assert!(lines[1].ends_with("PASS"));
    }
}
