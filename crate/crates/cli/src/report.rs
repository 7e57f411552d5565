//! Report model and its JSON, CSV and text renderings.

use serde_json::{Map, Value};

/// One pass/fail check in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: Value,
    pub actual: Value,
    pub tolerance: Value,
}

impl Check {
    /// Passes iff `|actual - expected| <= tolerance`.
    pub fn near(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            pass: (actual - expected).abs() <= tolerance,
            expected: num(expected),
            actual: num(actual),
            tolerance: num(tolerance),
        }
    }

    pub fn flag(name: impl Into<String>, expected: bool, actual: bool) -> Self {
        Self {
            name: name.into(),
            pass: expected == actual,
            expected: Value::Bool(expected),
            actual: Value::Bool(actual),
            tolerance: Value::Null,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("pass".into(), Value::Bool(self.pass));
        m.insert("expected".into(), self.expected.clone());
        m.insert("actual".into(), self.actual.clone());
        m.insert("tolerance".into(), self.tolerance.clone());
        Value::Object(m)
    }
}

/// A table cell for CSV and text output.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Divergent,
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Divergent => "DIVERGENT".into(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    /// Tabular view of the results; the first table is the CSV output.
    pub tables: Vec<Table>,
}

/// Shortest decimal string that parses back to `x`; `-0` prints as `0.0`.
pub fn fmt_f64(x: f64) -> String {
    num(x).to_string()
}

/// JSON number for a finite `x`, `null` otherwise.
pub fn num(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.into()));
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        m.insert("results".into(), self.results.clone());
        m.insert(
            "checks".into(),
            Value::Array(self.checks.iter().map(Check::to_json).collect()),
        );
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        render_json(&self.to_json_value())
    }

    /// Header plus one line per row of the first table. Empty if the report
    /// has no table.
    pub fn to_csv(&self) -> String {
        let Some(t) = self.tables.first() else {
            return String::new();
        };
        let mut out = t.columns.join(",");
        out.push('\n');
        for row in &t.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render())).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if !self.parameters.is_empty() {
            out.push_str("parameters:\n");
            for (k, v) in &self.parameters {
                out.push_str(&format!("  {k} = {}\n", compact(v)));
            }
        }
        for t in &self.tables {
            out.push('\n');
            out.push_str(t.title);
            out.push_str(":\n");
            out.push_str(&aligned(t));
        }
        if !self.checks.is_empty() {
            out.push_str("\nchecks:\n");
            for c in &self.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                out.push_str(&format!(
                    "  {verdict} {}: actual {}, expected {}",
                    c.name,
                    compact(&c.actual),
                    compact(&c.expected)
                ));
                if !c.tolerance.is_null() {
                    out.push_str(&format!(", tolerance {}", compact(&c.tolerance)));
                }
                out.push('\n');
            }
            let failed = self.checks.iter().filter(|c| !c.pass).count();
            out.push_str(&format!(
                "{} of {} checks passed\n",
                self.checks.len() - failed,
                self.checks.len()
            ));
        }
        out
    }
}

/// Pretty JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializing a Value cannot fail");
    s.push('\n');
    s
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn aligned(t: &Table) -> String {
    let rendered: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.len()).collect();
    for row in &rendered {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(t.columns.clone());
    for row in &rendered {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
