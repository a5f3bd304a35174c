//! Versioned machine-readable reports.
//!
//! Every subcommand produces one [`Report`]. Its JSON form is deterministic:
//! object keys are sorted, no timestamps or paths are recorded, and floats are
//! printed in shortest round-trip form.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "weakcr";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Value,
    /// Human-readable criterion, e.g. `< 1e-12`.
    pub criterion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub args: Vec<String>,
    pub parameters: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub failures: Vec<String>,
    /// Summary lines for text output.
    #[serde(skip)]
    pub headline: Vec<String>,
    /// Flat rows for CSV output, when the command produced a table.
    #[serde(skip)]
    pub table: Option<Table>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, parameters: Value) -> Self {
        Self {
            schema: SCHEMA,
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            args: Vec::new(),
            parameters,
            tolerances: BTreeMap::new(),
            result: Value::Null,
            checks: Vec::new(),
            passed: true,
            failures: Vec::new(),
            headline: Vec::new(),
            table: None,
        }
    }

    pub fn tolerance(&mut self, name: &str, tol: f64) -> f64 {
        self.tolerances.insert(name.to_string(), tol);
        tol
    }

    pub fn check(&mut self, name: &str, passed: bool, value: impl Serialize, criterion: impl Into<String>) {
        if !passed {
            self.passed = false;
            self.failures.push(name.to_string());
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            value: to_value(&value),
            criterion: criterion.into(),
        });
    }

    /// `value < tol`, also failing on NaN.
    pub fn check_below(&mut self, name: &str, value: f64, tol: f64) {
        self.check(name, value < tol, float(value), format!("< {tol:e}"));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Option<String> {
        let table = self.table.as_ref()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).ok()?;
        for row in &table.rows {
            w.write_record(row).ok()?;
        }
        String::from_utf8(w.into_inner().ok()?).ok()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.headline {
            out.push_str(line);
            out.push('\n');
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {} = {} ({})\n", c.name, c.value, c.criterion));
        }
        out
    }
}

/// Non-finite floats inside `v` become `null`.
pub fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// JSON number for finite floats, `"inf"`, `"-inf"` or `"nan"` otherwise.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}
