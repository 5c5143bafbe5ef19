//! Tabular reports rendered as CSV (with `#` metadata lines) or JSON.

use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::CliError;

pub const TOOL: &str = "qillum";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A single table cell or metadata value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<Cell>),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl From<&[f64]> for Cell {
    fn from(v: &[f64]) -> Self {
        Cell::List(v.iter().map(|&x| Cell::Num(x)).collect())
    }
}

/// Rounds to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Number text with 9 significant digits; plain notation for moderate
/// magnitudes, exponent notation otherwise.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round9(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-4..1e9).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::List(v) => v.iter().map(Cell::csv_text).collect::<Vec<_>>().join(";"),
            Cell::Empty => String::new(),
        }
    }

    /// TOML-style literal, used in metadata lines.
    fn literal(&self) -> String {
        match self {
            Cell::Text(s) => format!("{s:?}"),
            Cell::List(v) => format!(
                "[{}]",
                v.iter().map(Cell::literal).collect::<Vec<_>>().join(", ")
            ),
            Cell::Empty => "\"\"".into(),
            other => other.csv_text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                serde_json::Number::from_f64(round9(*x)).map_or(Value::Null, Value::Number)
            }
            Cell::Num(x) => Value::String(fmt_num(*x)),
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::List(v) => Value::Array(v.iter().map(Cell::json).collect()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Output of one subcommand: resolved parameters, a table and trailing
/// summary values.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(&'static str, Cell)>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Self {
            command,
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.params.push((key, value.into()));
    }

    pub fn footer(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.footer.push((key, value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        out.push_str(&format!("# {TOOL} {VERSION}\n"));
        out.push_str(&format!("# command = {:?}\n", self.command));
        for (k, v) in self.params.iter().filter(|(_, v)| *v != Cell::Empty) {
            out.push_str(&format!("# {k} = {}\n", v.literal()));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        let body = w
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| CliError::Output(e.to_string()))?);
        for (k, v) in &self.footer {
            out.push_str(&format!("# {k} = {}\n", v.literal()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let pairs = |list: &[(&'static str, Cell)]| -> Value {
            let mut m = Map::new();
            for (k, v) in list {
                m.insert((*k).to_string(), v.json());
            }
            Value::Object(m)
        };
        let doc = json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "params": pairs(&self.params),
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "footer": pairs(&self.footer),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_text() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(0.167947696278681), "0.167947696");
        assert_eq!(fmt_num(4.85e6), "4850000");
        assert_eq!(fmt_num(1.25e-6), "1.25e-6");
        assert_eq!(fmt_num(1e9), "1e9");
        assert_eq!(fmt_num(-26.0577265), "-26.0577265");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333");
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo", &["a", "b"]);
        r.param("x", 0.5);
        r.param("name", "q_s,p_i");
        r.push(vec![Cell::Int(1), Cell::Num(2.0)]);
        r.footer("total", 3.0);
        let s = r.to_csv().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], format!("# {TOOL} {VERSION}"));
        assert_eq!(lines[1], "# command = \"demo\"");
        assert_eq!(lines[2], "# x = 0.5");
        assert_eq!(lines[3], "# name = \"q_s,p_i\"");
        assert_eq!(lines[4], "a,b");
        assert_eq!(lines[5], "1,2");
        assert_eq!(lines[6], "# total = 3");
    }

    #[test]
    fn json_layout() {
        let mut r = Report::new("demo", &["a"]);
        r.push(vec![Cell::Num(f64::INFINITY)]);
        r.push(vec![Cell::Empty]);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["rows"][0][0], "inf");
        assert!(v["rows"][1][0].is_null());
    }
}
