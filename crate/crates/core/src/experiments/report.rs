use serde::Serialize;
use serde_json::{json, Map, Value};

/// Version string written into every JSON report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits for floats in CSV output.
pub const CSV_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format_sig(*v, CSV_DIGITS),
            Cell::Text(s) => csv_quote(s),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::UInt(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::UInt(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
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
        Cell::UInt(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `digits` significant digits with trailing zeros removed: plain decimal
/// for magnitudes in `[1e-6, 10^digits)`, otherwise mantissa and exponent
/// (`6.21e-301`).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i64;
    if !(-6..digits as i64).contains(&magnitude) {
        let s = format!("{x:.prec$e}", prec = digits - 1);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i64 - 1 - magnitude).clamp(0, 340) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Echo of everything that determines an experiment's output.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub exhaustive: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub c: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ground: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str, seed: u64) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            seed,
            ..Default::default()
        }
    }
}

/// Rows plus summary of one experiment run.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
    /// Structured extras that only appear in JSON output.
    pub details: Value,
    /// Failed checks; a verification run with failures exits with code 4.
    pub failures: Vec<String>,
    /// Seconds; reported on stderr only so outputs stay reproducible.
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, columns: Vec<&'static str>) -> Self {
        ExperimentReport {
            config,
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            details: Value::Null,
            failures: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn add_summary(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    /// Header plus rows, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Summary as `key,value` lines.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.summary {
            out.push_str(&format!("{k},{}\n", v.to_csv()));
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect();
        let mut top = json!({
            "config": self.config,
            "rows": rows,
            "summary": summary,
            "version": VERSION,
        });
        if !self.details.is_null() {
            top["details"] = self.details.clone();
        }
        if !self.failures.is_empty() {
            top["failures"] = json!(self.failures);
        }
        top
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report is valid JSON");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(518.737751763962, 12), "518.737751764");
        assert_eq!(format_sig(161700.0, 12), "161700");
        assert_eq!(format_sig(-2.5e-7, 12), "-2.5e-7");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(f64::INFINITY, 12), "inf");
        assert_eq!(format_sig(1e20, 12), "1e20");
        assert_eq!(format_sig(6.21013648657e-301, 12), "6.21013648657e-301");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(format_sig(999999999999.0, 12), "999999999999");
        assert_eq!(format_sig(0.0000012345, 12), "0.0000012345");
    }

    #[test]
    fn csv_and_json_layout() {
        let mut r = ExperimentReport::new(ExperimentConfig::new("demo", 1), vec!["n", "label", "x"]);
        r.push_row(vec![3usize.into(), "a,b".into(), 0.25.into()]);
        r.add_summary("mean", 0.25);
        assert_eq!(r.to_csv(), "n,label,x\n3,\"a,b\",0.25\n");
        let v = r.to_json_value();
        assert_eq!(v["rows"][0]["x"], json!(0.25));
        assert_eq!(v["summary"]["mean"], json!(0.25));
        assert_eq!(v["config"]["experiment"], json!("demo"));
        assert_eq!(v["version"], json!(VERSION));
        assert!(v.get("details").is_none());
    }
}
