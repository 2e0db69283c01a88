//! Report assembly and serialization.
//!
//! Every real number is written in scientific notation with 17 significant
//! digits, so a report round-trips each `f64` exactly and two runs with the
//! same configuration produce identical bytes.

use std::str::FromStr;

use arstat_core::VerificationReport;
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// `x` as a JSON number with 17 significant digits; non-finite values
/// become the strings `"NaN"`, `"inf"` and `"-inf"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt_f64(x)).expect("formatted float is valid JSON"))
    } else {
        Value::String(fmt_f64(x))
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub mask: String,
    pub instances: usize,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        mask: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            pass: residual <= tolerance,
            residual,
            tolerance,
            mask: mask.into(),
            instances: 1,
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool, mask: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            residual: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            mask: mask.into(),
            instances: 1,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("pass".into(), Value::Bool(self.pass));
        m.insert("residual".into(), num(self.residual));
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("mask".into(), Value::String(self.mask.clone()));
        m.insert("instances".into(), Value::from(self.instances));
        Value::Object(m)
    }
}

impl From<&VerificationReport> for Check {
    fn from(r: &VerificationReport) -> Self {
        Check {
            name: r.identity.clone(),
            pass: r.pass,
            residual: r.residual,
            tolerance: r.tolerance,
            mask: r.mask.clone(),
            instances: r.checks,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => num(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }

    fn to_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
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

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        m.insert(
            "rows".into(),
            Value::Array(
                self.rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                    .collect(),
            ),
        );
        Value::Object(m)
    }
}

/// Everything a command produces.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// The JSON report: schema version, command, effective configuration,
/// overall verdict, checks, command data and the table if any.
pub fn to_json(command: &str, config: &Map<String, Value>, outcome: &Outcome) -> String {
    let mut m = Map::new();
    m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    m.insert("command".into(), Value::String(command.into()));
    m.insert("config".into(), Value::Object(config.clone()));
    m.insert("pass".into(), Value::Bool(outcome.pass()));
    m.insert(
        "checks".into(),
        Value::Array(outcome.checks.iter().map(Check::to_json).collect()),
    );
    m.insert("data".into(), Value::Object(outcome.data.clone()));
    if let Some(table) = &outcome.table {
        m.insert("table".into(), table.to_json());
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes");
    text.push('\n');
    text
}

/// The command's table as CSV, or the checks when it has none.
pub fn to_csv(outcome: &Outcome) -> Result<String, csv::Error> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    match &outcome.table {
        Some(table) => {
            wtr.write_record(&table.columns)?;
            for row in &table.rows {
                wtr.write_record(row.iter().map(Cell::to_field))?;
            }
        }
        None => {
            wtr.write_record(["name", "pass", "residual", "tolerance", "mask", "instances"])?;
            for c in &outcome.checks {
                wtr.write_record([
                    c.name.clone(),
                    c.pass.to_string(),
                    fmt_f64(c.residual),
                    fmt_f64(c.tolerance),
                    c.mask.clone(),
                    c.instances.to_string(),
                ])?;
            }
        }
    }
    let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
