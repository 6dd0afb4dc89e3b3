mod convergence;
mod diffusion;
mod elliptic;
mod extremum;
mod frac_op;

use crate::config::{resolve, Command, CommonFlags};
use crate::error::CliError;
use crate::report::Report;
use crate::table::ResultTable;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::PathBuf;

pub use diffusion::Form;

/// A failed command, with the partial report when a solver aborted midway.
pub type Failure = Box<(Option<Report>, CliError)>;

type Runner<C> = fn(&C, &mut Report) -> Result<(), CliError>;

fn execute<F: Serialize, C: Serialize + DeserializeOwned>(
    name: &str,
    flags: &F,
    common: &CommonFlags,
    out: impl Fn(&C) -> Option<PathBuf>,
    runner: Runner<C>,
) -> Result<Report, Failure> {
    let cfg: C = resolve(flags, common.config.as_deref()).map_err(|e| Box::new((None, e)))?;
    let mut echo = serde_json::to_value(&cfg).map_err(|e| Box::new((None, CliError::Config(e.to_string()))))?;
    // the destination is not part of the computation; reruns elsewhere must match byte for byte
    if let Some(map) = echo.as_object_mut() {
        map.remove("out");
    }
    let mut report = Report::new(ResultTable::new(&[]), crate::output_path(out(&cfg).as_deref(), name));
    let result = runner(&cfg, &mut report);
    let table = &mut report.table;
    table.meta("command", name);
    table.meta("version", env!("CARGO_PKG_VERSION"));
    table.meta("config", &echo);
    if let Some(seed) = echo.get("seed") {
        table.meta("seed", seed);
    }
    match result {
        Ok(()) => Ok(report),
        Err(e @ CliError::Solve(_)) if !report.table.rows().is_empty() => Err(Box::new((Some(report), e))),
        Err(e) => Err(Box::new((None, e))),
    }
}

pub fn dispatch(command: &Command) -> Result<Report, Failure> {
    let name = command.name();
    match command {
        Command::FracOp(f) => execute(name, f, &f.common, |c: &crate::config::FracOpConfig| c.out.clone(), frac_op::run),
        Command::VerifyExtremum(f) => {
            execute(name, f, &f.common, |c: &crate::config::ExtremumConfig| c.out.clone(), extremum::run)
        }
        Command::SolveDiffusion(f) => {
            execute(name, f, &f.common, |c: &crate::config::DiffusionConfig| c.out.clone(), |c, r| {
                diffusion::run(c, Form::Caputo, r)
            })
        }
        Command::SolveGeneralized(f) => {
            execute(name, f, &f.common, |c: &crate::config::DiffusionConfig| c.out.clone(), |c, r| {
                diffusion::run(c, Form::Generalized, r)
            })
        }
        Command::SolveElliptic(f) => {
            execute(name, f, &f.common, |c: &crate::config::EllipticConfig| c.out.clone(), elliptic::run)
        }
        Command::Convergence(f) => {
            execute(name, f, &f.common, |c: &crate::config::ConvergenceConfig| c.out.clone(), convergence::run)
        }
    }
}
