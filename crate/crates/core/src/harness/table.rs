use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Rows of per-SNR aggregates. The first column is always `SNR`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<(f64, Vec<f64>)>,
}

impl Table {
    pub fn new(value_columns: &[&str]) -> Self {
        let mut columns = vec!["SNR".to_string()];
        columns.extend(value_columns.iter().map(|c| c.to_string()));
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, snr_db: f64, values: Vec<f64>) -> Result<()> {
        if values.len() + 1 != self.columns.len() {
            return Err(Error::LengthMismatch {
                expected: self.columns.len() - 1,
                actual: values.len(),
            });
        }
        self.rows.push((snr_db, values));
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn snrs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.0).collect()
    }

    /// Values of a named column, one per row.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        if idx == 0 {
            return Some(self.snrs());
        }
        Some(self.rows.iter().map(|r| r.1[idx - 1]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for (snr, values) in &self.rows {
            let _ = write!(out, "{snr}");
            for v in values {
                let _ = write!(out, ",{v:?}");
            }
            out.push('\n');
        }
        out
    }
}
