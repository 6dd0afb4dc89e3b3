use crate::table::ResultTable;
use std::path::PathBuf;

/// Outcome of one command: a table, one summary line per check and the
/// number of failed checks.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: ResultTable,
    pub lines: Vec<String>,
    pub failures: usize,
    pub out: PathBuf,
}

impl Report {
    pub fn new(table: ResultTable, out: PathBuf) -> Self {
        Self {
            table,
            lines: Vec::new(),
            failures: 0,
            out,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl AsRef<str>) {
        let tag = if passed { "PASS" } else { "FAIL" };
        self.failures += usize::from(!passed);
        self.lines.push(format!("{tag} {name}: {}", detail.as_ref()));
    }

    pub fn skip(&mut self, name: &str, why: impl AsRef<str>) {
        self.lines.push(format!("SKIP {name}: {}", why.as_ref()));
    }

    pub fn info(&mut self, name: &str, detail: impl AsRef<str>) {
        self.lines.push(format!("INFO {name}: {}", detail.as_ref()));
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}
