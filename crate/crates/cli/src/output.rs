//! Output documents and their JSON / CSV / text renderings.

use std::io::{self, Write};

use gmp_core::{AlgebraLabel, GmpModel, PhysicalParams};
use serde_json::{json, Map, Value};

pub const DIMENSIONLESS: &str = "dimensionless";
pub const ENERGY: &str = "energy";
pub const LENGTH: &str = "length";
pub const INVERSE_LENGTH: &str = "1/length";
pub const MASS: &str = "mass";
pub const ACTION: &str = "action";

/// Rendering used when `--format` is not given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preferred {
    Json,
    Csv,
    Text,
}

/// Rows of a CSV table, preceded by `#` comment lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            comments: Vec::new(),
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, out: &mut dyn Write) -> io::Result<()> {
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Column `name` parsed back into numbers (empty cells become NaN).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r[i].parse().unwrap_or(f64::NAN))
                .collect(),
        )
    }
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub json: Value,
    pub csv: Table,
    pub text: Option<String>,
    pub preferred: Preferred,
    /// Failed checks (`verify` only); non-zero turns into exit status 2.
    pub failures: usize,
}

impl Document {
    pub fn new(json: Value, csv: Table) -> Self {
        Self {
            json,
            csv,
            text: None,
            preferred: Preferred::Json,
            failures: 0,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn units(pairs: &[(&str, &str)]) -> Value {
    Value::Object(
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Value::from(*v)))
            .collect::<Map<_, _>>(),
    )
}

pub const COUNT: &str = "count";

pub const MODEL_UNITS: [(&str, &str); 6] = [
    ("k", DIMENSIONLESS),
    ("b", DIMENSIONLESS),
    ("l", DIMENSIONLESS),
    ("C", DIMENSIONLESS),
    ("n_max", COUNT),
    ("n", COUNT),
];

pub const PARAM_UNITS: [(&str, &str); 5] = [
    ("D", ENERGY),
    ("a", INVERSE_LENGTH),
    ("re", LENGTH),
    ("mu", MASS),
    ("hbar", ACTION),
];

pub fn model_json(m: &GmpModel) -> Value {
    json!({
        "k": m.k(),
        "b": m.b(),
        "l": m.l(),
        "C": m.c(),
        "n_max": m.n_max(),
    })
}

pub fn params_json(p: Option<&PhysicalParams>) -> Value {
    p.map_or(Value::Null, |p| {
        json!({
            "D": p.depth,
            "a": p.a,
            "re": p.r_e,
            "mu": p.mu,
            "hbar": p.hbar,
        })
    })
}

pub fn label_json(l: &AlgebraLabel) -> Value {
    json!({ "l": l.l, "m": l.m, "g": l.g })
}

pub fn model_comment(m: &GmpModel) -> String {
    format!(
        "k={} b={} l={} C={} n_max={}",
        num(m.k()),
        num(m.b()),
        num(m.l()),
        num(m.c()),
        m.n_max()
    )
}

pub fn params_comment(p: &PhysicalParams) -> String {
    format!(
        "D={} a={} re={} mu={} hbar={}",
        num(p.depth),
        num(p.a),
        num(p.r_e),
        num(p.mu),
        num(p.hbar)
    )
}
