//! CSV output: `#`-prefixed metadata, one header row, `{:.16e}` values.

use crate::error::CliError;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn with_columns(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Rows must match the header and hold finite values only.
    pub fn push(&mut self, row: Vec<f64>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Config(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Solve(hadamard_core::Error::NonFinite {
                node: self.rows.len(),
                value: row[bad],
            }));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    /// The CSV text; the timestamp line is the only run-dependent content.
    pub fn render(&self, timestamp: Option<u64>) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        if let Some(ts) = timestamp {
            let _ = writeln!(out, "# timestamp={ts}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path, timestamp: Option<u64>) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(path, self.render(timestamp)).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_doubles() {
        let mut t = ResultTable::new(&["x"]);
        let values = [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e-300, -2.5e17];
        for v in values {
            t.push(vec![v]).unwrap();
        }
        let text = t.render(None);
        let parsed: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
        assert_eq!(parsed, values);
    }

    #[test]
    fn rejects_ragged_and_non_finite_rows() {
        let mut t = ResultTable::new(&["a", "b"]);
        assert!(t.push(vec![1.0]).is_err());
        assert!(t.push(vec![1.0, f64::NAN]).is_err());
        assert!(t.rows().is_empty());
    }

    #[test]
    fn timestamp_is_isolated() {
        let mut t = ResultTable::new(&["a"]);
        t.meta("seed", 4);
        t.push(vec![1.0]).unwrap();
        let a = t.render(Some(1));
        let b = t.render(Some(2));
        let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# timestamp=")).collect::<Vec<_>>().join("\n");
        assert_ne!(a, b);
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.lines().next(), Some("# seed=4"));
    }
}
