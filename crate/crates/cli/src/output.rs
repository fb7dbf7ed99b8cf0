use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use rootcount::numeric::rational_to_f64;

/// Headers plus string cells, rendered as aligned text or CSV.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn with_row(mut self, row: Vec<String>) -> Self {
        self.push(row);
        self
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let last = cells.len().saturating_sub(1);
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i == last {
                    out.push_str(cell);
                } else {
                    let _ = write!(out, "{cell:<w$}  ");
                }
            }
            out.push('\n');
        };
        line(&self.headers);
        for row in &self.rows {
            line(row);
        }
        out
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// `"p/q"`, always with a denominator.
pub fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn ints(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Rational for a text cell: exact when short, otherwise digit counts.
pub fn short_rational(q: &BigRational) -> String {
    let s = rational(q);
    if s.len() <= 40 {
        s
    } else {
        let digits = |n: &BigInt| n.magnitude().to_string().len();
        format!(
            "({}-digit)/({}-digit)",
            digits(q.numer()),
            digits(q.denom())
        )
    }
}

pub fn float(x: f64) -> String {
    format!("{x:.10}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub rational: String,
    pub float: f64,
}

impl Estimate {
    pub fn of(q: &BigRational) -> Self {
        Self {
            rational: rational(q),
            float: rational_to_f64(q),
        }
    }

    pub fn opt(q: Option<&BigRational>) -> Option<Self> {
        q.map(Self::of)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Shift {
    pub alpha: i64,
    pub beta: i64,
}

impl From<(i64, i64)> for Shift {
    fn from((alpha, beta): (i64, i64)) -> Self {
        Self { alpha, beta }
    }
}

pub fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
