use std::fmt::Write as _;

use clap::ValueEnum;
use quiverlab::linalg::QMatrix;
use quiverlab::rational::format_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

/// Accumulates command output. Text mode renders records as aligned
/// `key  value` columns; kv mode renders `key=value` lines and drops
/// free-form text.
pub struct Printer {
    format: Format,
    buf: String,
}

impl Printer {
    pub fn new(format: Format) -> Self {
        Printer {
            format,
            buf: String::new(),
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// A line that only appears in text mode.
    pub fn line(&mut self, text: impl AsRef<str>) {
        if self.format == Format::Text {
            self.buf.push_str(text.as_ref());
            self.buf.push('\n');
        }
    }

    /// A `key=value` line that only appears in kv mode.
    pub fn kv(&mut self, key: impl AsRef<str>, value: impl AsRef<str>) {
        if self.format == Format::Kv {
            let _ = writeln!(self.buf, "{}={}", key.as_ref(), value.as_ref());
        }
    }

    pub fn record(&mut self, pairs: &[(String, String)]) {
        match self.format {
            Format::Text => {
                let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in pairs {
                    let _ = writeln!(self.buf, "{k:<width$}  {v}");
                }
            }
            Format::Kv => {
                for (k, v) in pairs {
                    let _ = writeln!(self.buf, "{k}={v}");
                }
            }
        }
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn pair(k: impl Into<String>, v: impl ToString) -> (String, String) {
    (k.into(), v.to_string())
}

/// Twelve significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn rational_row(row: &[quiverlab::Rational]) -> String {
    row.iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn matrix_rows(m: &QMatrix) -> Vec<String> {
    (0..m.nrows()).map(|i| rational_row(m.row(i))).collect()
}

pub fn int_matrix_rows(m: &[Vec<i64>]) -> Vec<String> {
    m.iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .collect()
}

pub fn list<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
