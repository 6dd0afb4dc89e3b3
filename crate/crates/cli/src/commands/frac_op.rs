use crate::config::{FracOpConfig, MethodKind, OpKind};
use crate::error::{config, CliError};
use crate::parse;
use crate::report::Report;
use crate::table::ResultTable;
use hadamard_core::closed_form::{closed_form_deriv, Operator};
use hadamard_core::ops::{
    caputo_hadamard_deriv_with, compose_check_with, hadamard_integral_with, riemann_hadamard_deriv_with, RiemannMethod,
};
use std::sync::Arc;

pub fn run(c: &FracOpConfig, report: &mut Report) -> Result<(), CliError> {
    let (a, t_end) = parse::interval(&c.grid)?;
    let grid = Arc::new(parse::log_grid(a, t_end, c.n, c.grading)?);
    let alpha = parse::order(c.alpha)?;
    let tag = parse::input(&c.input)?;
    let f = tag.sample(grid.clone()).map_err(config)?;
    let t = grid.t();

    let operator = match c.op {
        OpKind::Hadamard => Some(Operator::Hadamard),
        OpKind::CaputoHadamard => Some(Operator::CaputoHadamard),
        OpKind::Integral => Some(Operator::Integral),
        OpKind::Compose => None,
    };
    // reject unsupported operand/operator pairs before any work
    if let Some(op) = operator {
        closed_form_deriv(&tag, alpha, a, t[1], op).map_err(config)?;
    } else if f.is_singular() {
        return Err(CliError::Config("compose needs an operand bounded at t = a".into()));
    }

    let (numeric, oracle): (Vec<f64>, Vec<f64>) = match operator {
        Some(op) => {
            let values = match op {
                Operator::Hadamard => {
                    let method = match c.method {
                        MethodKind::Split => RiemannMethod::Split,
                        MethodKind::Direct => RiemannMethod::Direct,
                    };
                    riemann_hadamard_deriv_with(&f, alpha, method, c.exec)?
                }
                Operator::CaputoHadamard => caputo_hadamard_deriv_with(&f, alpha, c.exec)?,
                Operator::Integral => hadamard_integral_with(&f, alpha, c.exec)?,
            };
            let oracle = (1..t.len())
                .map(|k| closed_form_deriv(&tag, alpha, a, t[k], op))
                .collect::<Result<Vec<_>, _>>()?;
            (values.values()[1..].to_vec(), oracle)
        }
        None => {
            let residual = compose_check_with(&f, alpha, c.exec)?;
            let numeric = residual.values().iter().zip(f.values()).map(|(r, v)| r + v).skip(1).collect();
            (numeric, f.values()[1..].to_vec())
        }
    };

    report.table = ResultTable::new(&["t", "numeric", "oracle", "error"]);
    let (mut worst_abs, mut worst_rel): (f64, f64) = (0.0, 0.0);
    for (k, (num, ora)) in numeric.iter().zip(&oracle).enumerate() {
        let err = (num - ora).abs();
        worst_abs = worst_abs.max(err);
        if *ora != 0.0 {
            worst_rel = worst_rel.max(err / ora.abs());
        }
        report.table.push(vec![t[k + 1], *num, *ora, err])?;
    }
    let name = format!("frac-op {}", serde_json::to_value(c.op).map_err(config)?.as_str().unwrap_or("op"));
    let detail = format!("max abs error {worst_abs:.3e}, max rel error {worst_rel:.3e} over {} nodes", numeric.len());
    match c.tol {
        Some(tol) => report.check(&name, worst_abs <= tol, format!("{detail} (tol {tol:e})")),
        None => report.info(&name, detail),
    }
    Ok(())
}
