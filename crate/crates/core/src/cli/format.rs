//! Deterministic rendering of numbers and row tables.

use std::fmt::Write as _;

/// Significant digits in every rendered float.
pub const SIGNIFICANT_DIGITS: i32 = 12;
/// Placeholder for a value that could not be computed.
pub const NA: &str = "NA";

/// Fixed-notation decimal with [`SIGNIFICANT_DIGITS`] significant digits.
/// Non-finite values render as [`NA`].
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return NA.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", (SIGNIFICANT_DIGITS - 1) as usize, 0.0);
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can produce "-0.000..."
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Fixed notation with `decimals` places.
pub fn fmt_fixed(x: f64, decimals: usize) -> String {
    if !x.is_finite() {
        return NA.to_string();
    }
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Already-rendered number.
    Num(String),
    /// Identifier-like text (no quoting or escaping is applied).
    Text(&'static str),
    Na,
}

impl Cell {
    pub fn sig(x: f64) -> Self {
        Cell::Num(fmt_sig(x))
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Na, Cell::sig)
    }

    pub fn int(x: impl Into<i64>) -> Self {
        Cell::Num(x.into().to_string())
    }
}

/// Header plus rows, written as CSV or as a JSON array of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(s) => s.as_str(),
                    Cell::Text(s) => s,
                    Cell::Na => NA,
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `NA` becomes `null`, numbers are emitted verbatim.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (key, cell)) in self.header.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{key}\": ");
                match cell {
                    Cell::Num(s) => out.push_str(s),
                    Cell::Text(s) => {
                        let _ = write!(out, "\"{s}\"");
                    }
                    Cell::Na => out.push_str("null"),
                }
            }
            out.push('}');
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out
    }
}
