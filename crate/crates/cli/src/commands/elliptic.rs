use crate::config::{EllipticConfig, GuessArg, SideArg};
use crate::error::{config, CliError};
use crate::parse;
use crate::report::Report;
use crate::table::ResultTable;
use hadamard_core::diffusion::Side;
use hadamard_core::elliptic::catalog::{elliptic_problem, random_elliptic, EllipticParams};
use hadamard_core::elliptic::checks::check_weak_side;
use hadamard_core::elliptic::{
    check_argmax_fractional, check_sign, check_strong_principle, check_weak_principles, solve_elliptic_with,
    solve_nonlinear_elliptic_with, BSign, CSign, EllipticField, EllipticGuess, EllipticProblem,
};
use hadamard_core::Exec;

/// Agreement required between nonlinear solves from different guesses.
const UNIQUENESS_TOL: f64 = 1e-9;

fn solve_with(problem: &EllipticProblem, guess: EllipticGuess, exec: Exec) -> Result<EllipticField, CliError> {
    Ok(if problem.source.is_linear() {
        solve_elliptic_with(problem, exec)?
    } else {
        solve_nonlinear_elliptic_with(problem, guess, exec)?
    })
}

pub fn run(c: &EllipticConfig, report: &mut Report) -> Result<(), CliError> {
    if c.extents.len() != c.cells.len() {
        return Err(CliError::Config(format!(
            "{} extents but {} cell counts",
            c.extents.len(),
            c.cells.len()
        )));
    }
    let params = EllipticParams { alpha: parse::order(c.alpha)?, extents: c.extents.clone(), cells: c.cells.clone() };
    let guess = match c.guess {
        GuessArg::Zero => EllipticGuess::Zero,
        GuessArg::Boundary => EllipticGuess::BoundaryExtension,
    };
    if c.problem == "random" {
        return suite(c, &params, report);
    }
    let problem = elliptic_problem(&c.problem, &params).map_err(config)?;
    problem.validate().map_err(config)?;
    let field = solve_with(&problem, guess, c.exec)?;
    let grid = problem.grid();
    let exact = problem.exact.clone();

    let mut columns = vec!["node".to_string()];
    columns.extend((1..=grid.dims()).map(|j| format!("x{j}")));
    columns.push("u".into());
    if exact.is_some() {
        columns.extend(["exact".into(), "error".into()]);
    }
    report.table = ResultTable::with_columns(columns);
    for (n, &u) in field.values.iter().enumerate() {
        let x = grid.point(n);
        let mut row = vec![n as f64];
        row.extend_from_slice(&x);
        row.push(u);
        if let Some(e) = &exact {
            let v = e(&x);
            row.extend([v, (u - v).abs()]);
        }
        report.table.push(row)?;
    }

    if let Some(err) = field.max_error() {
        match c.max_error {
            Some(limit) => report.check("max error", err <= limit, format!("{err:.6e} (limit {limit:e})")),
            None => report.info("max error", format!("{err:.6e}")),
        }
    }
    let weak = check_weak_principles(&field);
    for (name, side, which) in [("weak principle upper", weak.upper, Side::Max), ("weak principle lower", weak.lower, Side::Min)] {
        match side {
            Some(s) => report.check(
                name,
                s.passed,
                format!("extreme {:.6e} vs bound {:.6e}, violation {:.3e}, tol {:.3e}", s.extreme, s.bound, s.violation, weak.tol),
            ),
            None => {
                let s = check_weak_side(&field, which, weak.tol);
                report.skip(
                    name,
                    format!(
                        "sign hypotheses on b, c, F do not hold; extreme {:.6e} vs bound {:.6e}, violation {:.3e}",
                        s.extreme, s.bound, s.violation
                    ),
                );
            }
        }
    }
    let strong = check_strong_principle(&field);
    if strong.homogeneous {
        report.check(
            "strong principle",
            strong.passed,
            format!(
                "interior max {}, interior min {}, sup norm {:.3e}, tol {:.3e}",
                strong.max_inside, strong.min_inside, strong.sup_norm, strong.tol
            ),
        );
    } else {
        report.skip("strong principle", "equation is not homogeneous");
    }
    let structural = problem.b_sign == BSign::Negative && problem.c_sign == CSign::Nonpositive;
    let argmax = check_argmax_fractional(&field);
    match argmax.node {
        Some(node) if structural => report.check(
            "fractional derivative at interior max",
            argmax.passed,
            format!("node {node}, value {:.6e}, tol {:.3e}", argmax.value, argmax.tol),
        ),
        _ => report.skip("fractional derivative at interior max", "no positive interior maximum with b < 0, c <= 0"),
    }
    sign_lines(&problem, &field, structural, report);
    if !problem.source.is_linear() {
        let other_guess = match guess {
            EllipticGuess::Zero => EllipticGuess::BoundaryExtension,
            EllipticGuess::BoundaryExtension => EllipticGuess::Zero,
        };
        let other = solve_with(&problem, other_guess, c.exec)?;
        let diff = field.max_diff(&other)?;
        report.check(
            "picard uniqueness",
            diff <= UNIQUENESS_TOL,
            format!("zero and boundary-extension guesses differ by {diff:.3e}"),
        );
    }
    Ok(())
}

/// Sign propagation needs `F = 0`, `c <= 0`, `b < 0` and one-signed boundary data.
fn sign_lines(problem: &EllipticProblem, field: &EllipticField, structural: bool, report: &mut Report) {
    let grid = problem.grid();
    let source_free = problem.source.is_linear() && grid.interior().all(|n| problem.source.eval(0.0, &grid.point(n)) == 0.0);
    let boundary: Vec<f64> = grid.boundary().map(|n| field.values[n]).collect();
    let sides = [
        ("sign nonnegative", Side::Min, boundary.iter().all(|&v| v >= 0.0)),
        ("sign nonpositive", Side::Max, boundary.iter().all(|&v| v <= 0.0)),
    ];
    for (name, side, data_ok) in sides {
        if structural && source_free && data_ok {
            let r = check_sign(field, side);
            report.check(name, r.passed, format!("extreme {:.6e}, tol {:.3e}", r.extreme, r.tol));
        } else {
            report.skip(name, "needs F = 0, b < 0, c <= 0 and boundary data of that sign");
        }
    }
}

fn suite(c: &EllipticConfig, params: &EllipticParams, report: &mut Report) -> Result<(), CliError> {
    if c.count == 0 {
        return Err(CliError::Config("count must be positive".into()));
    }
    let sides: Vec<Side> = match c.side {
        Some(SideArg::Max) => vec![Side::Max],
        Some(SideArg::Min) => vec![Side::Min],
        None => vec![Side::Max, Side::Min],
    };
    report.table = ResultTable::new(&["side", "index", "bound", "extreme", "violation", "tol", "passed"]);
    for side in sides {
        let (mut failed, mut worst) = (0usize, f64::NEG_INFINITY);
        for i in 0..c.count {
            let problem = random_elliptic(c.seed, i, params, side).map_err(config)?;
            let field = solve_elliptic_with(&problem, c.exec)?;
            let weak = check_weak_principles(&field);
            let checked = match side {
                Side::Max => weak.upper,
                Side::Min => weak.lower,
            }
            .ok_or_else(|| CliError::Config(format!("random problem {i} does not meet the {side:?} hypotheses")))?;
            failed += usize::from(!checked.passed);
            worst = worst.max(checked.violation - weak.tol);
            report.table.push(vec![
                if side == Side::Max { 1.0 } else { -1.0 },
                i as f64,
                checked.bound,
                checked.extreme,
                checked.violation,
                weak.tol,
                f64::from(u8::from(checked.passed)),
            ])?;
        }
        let name = match side {
            Side::Max => "weak principle upper suite",
            Side::Min => "weak principle lower suite",
        };
        report.check(
            name,
            failed == 0,
            format!("{} problems, {failed} failed, worst violation - tol {worst:.3e}", c.count),
        );
    }
    Ok(())
}
