use crate::config::{ConvergenceConfig, RefineArg, TargetArg};
use crate::error::{config, CliError};
use crate::parse;
use crate::report::Report;
use crate::table::ResultTable;
use hadamard_core::diffusion::catalog::{diffusion_problem, CatalogParams};
use hadamard_core::diffusion::{solve, EquationForm, SolveOptions, SpaceGrid};
use hadamard_core::elliptic::catalog::{elliptic_problem, EllipticParams};
use hadamard_core::elliptic::{solve_elliptic_with, solve_nonlinear_elliptic_with, EllipticGuess};
use std::sync::Arc;

/// Errors at or below this on two consecutive levels mean the problem is
/// reproduced exactly and no order can be observed.
pub const SATURATION: f64 = 1e-10;
/// Allowed shortfall of an observed order below the promised rate.
pub const ORDER_SLACK: f64 = 0.2;

fn promised_rate(c: &ConvergenceConfig) -> f64 {
    let a = c.alpha;
    match (c.target, c.refine) {
        (TargetArg::Elliptic, _) => 2.0 - a,
        (_, RefineArg::Space) => 2.0,
        (TargetArg::Caputo, _) => 2.0 - a,
        (TargetArg::Generalized, _) => 1.0,
    }
}

fn validate(c: &ConvergenceConfig) -> Result<(), CliError> {
    if c.levels.len() < 4 {
        return Err(CliError::Config(format!("a ladder needs at least 4 levels, got {}", c.levels.len())));
    }
    if c.levels.windows(2).any(|w| w[1] <= w[0]) || c.levels[0] == 0 {
        return Err(CliError::Config("levels must be positive and strictly increasing".into()));
    }
    parse::order(c.alpha)?;
    Ok(())
}

/// Error of one ladder level. Setup problems are configuration errors.
fn level_error(c: &ConvergenceConfig, n: usize) -> Result<f64, CliError> {
    let alpha = parse::order(c.alpha)?;
    match c.target {
        TargetArg::Caputo | TargetArg::Generalized => {
            let (nx, nt) = match c.refine {
                RefineArg::Time => (c.nx, n),
                RefineArg::Space => (n, c.nt),
                RefineArg::Both => (n, n),
            };
            let params = CatalogParams {
                alpha,
                nu: c.nu,
                space: SpaceGrid::interval(1.0, nx).map_err(config)?,
                time: Arc::new(parse::log_grid(1.0, c.t_end, nt, c.grading)?),
            };
            let key = c.problem.clone().unwrap_or_else(|| {
                match c.target {
                    TargetArg::Caputo => "manufactured_ch",
                    _ => "manufactured_rh",
                }
                .to_string()
            });
            let problem = diffusion_problem(&key, &params).map_err(config)?;
            if problem.exact.is_none() {
                return Err(CliError::Config(format!("problem '{key}' has no exact solution")));
            }
            let form = match c.target {
                TargetArg::Caputo => EquationForm::Caputo,
                _ => EquationForm::Generalized(c.placement.into()),
            };
            let field = solve(&problem, form, &SolveOptions { exec: c.exec, ..SolveOptions::default() })?;
            Ok(field.max_error().expect("exact solution checked above"))
        }
        TargetArg::Elliptic => {
            let params = EllipticParams { alpha, extents: c.extents.clone(), cells: vec![n; c.extents.len()] };
            let key = c.problem.clone().unwrap_or_else(|| "manufactured".to_string());
            let problem = elliptic_problem(&key, &params).map_err(config)?;
            if problem.exact.is_none() {
                return Err(CliError::Config(format!("problem '{key}' has no exact solution")));
            }
            let field = if problem.source.is_linear() {
                solve_elliptic_with(&problem, c.exec)?
            } else {
                solve_nonlinear_elliptic_with(&problem, EllipticGuess::Zero, c.exec)?
            };
            Ok(field.max_error().expect("exact solution checked above"))
        }
    }
}

pub fn run(c: &ConvergenceConfig, report: &mut Report) -> Result<(), CliError> {
    validate(c)?;
    let rate = promised_rate(c);
    report.table = ResultTable::new(&["level", "n", "error", "order", "saturated", "below_rate"]);
    let mut previous: Option<(usize, f64)> = None;
    for (level, &n) in c.levels.iter().enumerate() {
        let error = level_error(c, n)?;
        let (mut order, mut saturated, mut below) = (0.0, false, false);
        if let Some((n0, e0)) = previous {
            saturated = e0 <= SATURATION && error <= SATURATION;
            if !saturated {
                order = (e0 / error).ln() / (n as f64 / n0 as f64).ln();
                if !order.is_finite() {
                    order = 0.0;
                }
                below = order < rate - ORDER_SLACK;
            }
            let name = format!("order {n0}->{n}");
            if saturated {
                report.check(&name, true, format!("saturated, errors {e0:.3e} and {error:.3e}"));
            } else {
                report.check(
                    &name,
                    !below,
                    format!("{order:.4} (promised {rate:.3}, floor {:.3}), error {error:.3e}", rate - ORDER_SLACK),
                );
            }
        }
        let flag = |b: bool| f64::from(u8::from(b));
        report.table.push(vec![level as f64, n as f64, error, order, flag(saturated), flag(below)])?;
        previous = Some((n, error));
    }
    Ok(())
}
