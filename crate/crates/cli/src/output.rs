use std::fmt;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use extremal_core::hankel::{format_value, round_significant};

/// Significant digits in every printed number.
pub const DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

pub fn round(x: f64) -> f64 {
    round_significant(x, DIGITS)
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Io(e.to_string()))
}

/// CSV with a fixed header and rounded numeric rows.
pub fn csv_rows<const K: usize>(
    header: [&str; K],
    rows: impl IntoIterator<Item = [f64; K]>,
) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.map(|x| format_value(round(x)))).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(round(0.0), 0.0);
    }

    #[test]
    fn csv_header_and_rows() {
        let text = csv_rows(["a", "b"], [[1.0, 2.5e-9], [0.1, 3.0]]).unwrap();
        assert_eq!(text, "a,b\n1,2.5e-9\n0.1,3\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).code(), 2);
        assert_eq!(CliError::Numerical(String::new()).code(), 3);
    }
}
