//! Minimal CSV writer for numeric tables.
//!
//! Values are printed with 12 significant digits in the shortest of fixed or
//! exponent notation (like C's `%.12g`, but with Rust-style exponents such
//! as `1e-7`), and undefined values as `NA`.

use std::fmt::Write;

pub const NA: &str = "NA";

pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return NA.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        format!("{}e{exp}", strip_zeros(mantissa))
    } else {
        let decimals = (11 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_cell(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), format_value)
}

/// A table whose first column is time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub times: Vec<f64>,
    pub columns: Vec<(String, Vec<Option<f64>>)>,
}

impl Table {
    pub fn new(times: Vec<f64>) -> Self {
        Self {
            times,
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.columns
            .push((name.into(), values.into_iter().map(Some).collect()));
    }

    pub fn push_optional(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) {
        self.columns.push((name.into(), values));
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(&escape(name));
        }
        out.push('\n');
        for (i, &t) in self.times.iter().enumerate() {
            out.push_str(&format_value(t));
            for (_, values) in &self.columns {
                write!(out, ",{}", format_cell(values[i])).expect("write to String");
            }
            out.push('\n');
        }
        out
    }
}

pub fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
