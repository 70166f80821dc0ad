use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use rarefact::arith::sig17;

use crate::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn int(n: impl Into<BigInt>) -> Self {
        Cell::Int(n.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(x) => sig17(*x),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Exact integers that do not fit an i64 are kept as strings.
            Cell::Int(n) => i64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string())),
            Cell::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == header.len()));
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows }
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let record: Map<String, Value> =
                        self.header.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(record)
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Integer(BigInt),
    Complex(Complex64),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Integer(n) => n.to_string(),
            Scalar::Complex(z) if z.im == 0.0 => format_real(z.re),
            Scalar::Complex(z) => {
                let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                format!("{}{sign}{}i", format_real(z.re), format_real(z.im.abs()))
            }
        }
    }

    fn json(&self) -> Value {
        match self {
            Scalar::Integer(n) => json!({ "value": Cell::Int(n.clone()).json() }),
            Scalar::Complex(z) => json!({ "re": Cell::Real(z.re).json(), "im": Cell::Real(z.im).json() }),
        }
    }
}

/// Shortest round-trip decimal, with `-0` folded into `0`.
fn format_real(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Scalar(Scalar),
    Table(Table),
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Report::Scalar(s), Format::Csv) => format!("{}\n", s.text()),
            (Report::Table(t), Format::Csv) => t.csv(),
            (Report::Scalar(s), Format::Json) => format!("{}\n", s.json()),
            (Report::Table(t), Format::Json) => format!("{}\n", t.json()),
        }
    }
}
