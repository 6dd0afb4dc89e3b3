//! Batch runner behind the `hadamard` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;
pub mod report;
pub mod table;

pub use config::{Cli, Command};
pub use error::CliError;
pub use report::Report;
pub use table::ResultTable;

use std::path::{Path, PathBuf};

/// Output directory override for relative `--out` paths.
pub const OUT_DIR_VAR: &str = "HADAMARD_OUT_DIR";

/// Where the CSV goes: `out` or `<command>.csv`, under `HADAMARD_OUT_DIR`
/// when that is set and the path is relative.
pub fn output_path(out: Option<&Path>, command: &str) -> PathBuf {
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(format!("{command}.csv")));
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

/// Resolve the configuration and run one command.
///
/// The returned report carries the table, the summary lines and the path the
/// table belongs at; writing is left to the caller. On a solver error the
/// report is returned alongside it so partial tables can still be written.
pub fn run(command: &Command) -> (Option<Report>, Option<CliError>) {
    match commands::dispatch(command) {
        Ok(report) => (Some(report), None),
        Err(failure) => {
            let (report, err) = *failure;
            (report, Some(err))
        }
    }
}
