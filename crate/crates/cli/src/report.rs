//! Rendering of reports as text, JSON or CSV.

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

/// Rows of the CSV form of a report.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub trait Report: Serialize {
    fn text(&self) -> String;
    fn table(&self) -> Table;
    /// `false` when some row or step failed; the exit status follows it.
    fn ok(&self) -> bool {
        true
    }
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(report.text()),
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let table = report.table();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Shortest round-trip decimal in exponent form.
pub fn sci(v: f64) -> String {
    format!("{v:e}")
}

pub fn opt_sci(v: Option<f64>) -> Option<String> {
    v.map(sci)
}

/// Fixed-width exponent form for text tables.
pub fn short(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3e}")
    } else {
        v.to_string()
    }
}

pub fn opt_short(v: Option<f64>) -> String {
    v.map(short).unwrap_or_else(|| "-".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_strings() {
        assert_eq!(sci(0.25), "2.5e-1");
        assert_eq!(short(1234.0), "1.234e3");
        assert_eq!(opt_short(None), "-");
    }
}
