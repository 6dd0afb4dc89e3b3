use crate::config::{DiffusionConfig, SignArg};
use crate::error::{config, CliError};
use crate::parse;
use crate::report::Report;
use crate::table::ResultTable;
use hadamard_core::diffusion::catalog::{diffusion_problem, random_problem, CatalogParams};
use hadamard_core::diffusion::checks::dependence_from_fields;
use hadamard_core::diffusion::problem::SpaceFn;
use hadamard_core::diffusion::{
    check_generalized_principles, check_max_principle, check_picard_uniqueness, check_shift_identity, solve,
    DiffusionProblem, EquationForm, MaxPrincipleReport, PicardGuess, SolveOptions, SourceSign, SpaceGrid, SpaceTimeField,
};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Caputo,
    Generalized,
}

struct Setup {
    params: CatalogParams,
    form: EquationForm,
    opts: SolveOptions,
    lengths: Vec<f64>,
}

fn setup(c: &DiffusionConfig, form: Form) -> Result<Setup, CliError> {
    let space = match c.ny {
        None => SpaceGrid::interval(c.lx, c.nx),
        Some(ny) => SpaceGrid::rectangle(c.lx, c.ly, c.nx, ny),
    }
    .map_err(config)?;
    let lengths = if c.ny.is_some() { vec![c.lx, c.ly] } else { vec![c.lx] };
    let time = Arc::new(parse::log_grid(1.0, c.t_end, c.nt, c.grading)?);
    let equation = match form {
        Form::Caputo => EquationForm::Caputo,
        Form::Generalized => EquationForm::Generalized(c.placement.into()),
    };
    if form == Form::Caputo && !c.shift_mu.is_empty() {
        return Err(CliError::Config("shift_mu applies to solve-generalized only".into()));
    }
    if c.delta.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(CliError::Config("delta values must be positive".into()));
    }
    Ok(Setup {
        params: CatalogParams { alpha: parse::order(c.alpha)?, nu: c.nu, space, time },
        form: equation,
        opts: SolveOptions { exec: c.exec, ..SolveOptions::default() },
        lengths,
    })
}

pub fn run(c: &DiffusionConfig, form: Form, report: &mut Report) -> Result<(), CliError> {
    let s = setup(c, form)?;
    let key = c.problem.clone().unwrap_or_else(|| {
        match form {
            Form::Caputo => "manufactured_ch",
            Form::Generalized => "manufactured_rh",
        }
        .to_string()
    });
    if key == "random" {
        suite(c, &s, report)
    } else {
        single(c, &s, &key, report)
    }
}

/// `φ + δ Π sin(π x_d / L_d)`: same boundary values, sup-distance δ.
fn perturbed(problem: &DiffusionProblem, lengths: &[f64], delta: f64) -> DiffusionProblem {
    let phi = problem.initial.clone();
    let ls = lengths.to_vec();
    let initial: SpaceFn =
        Arc::new(move |x: &[f64]| phi(x) + delta * x.iter().zip(&ls).map(|(xi, l)| (PI * xi / l).sin()).product::<f64>());
    problem.with_initial(initial)
}

fn principle_lines(report: &mut Report, name: &str, r: &MaxPrincipleReport) {
    for (side, check) in [("min", r.min), ("max", r.max)] {
        let label = format!("{name} {side}");
        match check {
            Some(s) => report.check(
                &label,
                s.passed,
                format!("extreme {:.6e} vs bound {:.6e}, violation {:.3e}, tol {:.3e}", s.extreme, s.bound, s.violation, r.tol),
            ),
            None => report.skip(&label, format!("source sign {:?} does not back this side", r.source_sign)),
        }
    }
}

fn single(c: &DiffusionConfig, s: &Setup, key: &str, report: &mut Report) -> Result<(), CliError> {
    let problem = diffusion_problem(key, &s.params).map_err(config)?;
    let field = solve(&problem, s.form, &s.opts)?;
    let dims = s.params.space.dims();
    let exact = problem.exact.clone();

    let mut columns = vec!["layer", "t", "x"];
    if dims == 2 {
        columns.push("y");
    }
    columns.push("u");
    if exact.is_some() {
        columns.extend(["exact", "error"]);
    }
    report.table = ResultTable::new(&columns);
    let space = *field.space();
    for (k, &t) in field.time().t().iter().enumerate() {
        for (n, &u) in field.layer(k).iter().enumerate() {
            let x = space.point(n);
            let mut row = vec![k as f64, t];
            row.extend_from_slice(&x);
            row.push(u);
            if let Some(e) = &exact {
                let v = e(&x, t);
                row.extend([v, (u - v).abs()]);
            }
            report.table.push(row)?;
        }
    }

    if let Some(err) = field.max_error() {
        match c.max_error {
            Some(limit) => report.check("max error", err <= limit, format!("{err:.6e} (limit {limit:e})")),
            None => report.info("max error", format!("{err:.6e}")),
        }
    }
    match s.form {
        EquationForm::Caputo => principle_lines(report, "max principle", &check_max_principle(&field)),
        EquationForm::Generalized(_) => generalized_lines(report, &field)?,
    }
    for &delta in &c.delta {
        let other = solve(&perturbed(&problem, &s.lengths, delta), s.form, &s.opts)?;
        let r = dependence_from_fields(&field, &other)?;
        report.check(
            &format!("continuous dependence delta={delta}"),
            r.passed,
            format!("|u1-u2| {:.6e} <= data gap {:.6e} + tol {:.3e}", r.diff, r.delta, r.tol),
        );
    }
    if !problem.source.is_linear() {
        let r = check_picard_uniqueness(&problem, s.form, [PicardGuess::Constant(0.0), PicardGuess::Constant(10.0)], &s.opts)?;
        report.check(
            "picard uniqueness",
            r.passed,
            format!("guesses 0 and 10 differ by {:.3e} ({} and {} iterations)", r.max_diff, r.picard_a, r.picard_b),
        );
    }
    for &mu in &c.shift_mu {
        let r = check_shift_identity(&field, mu, c.shift_t_min)?;
        report.check(
            &format!("shift identity mu={mu}"),
            r.checked_nodes > 0 && r.max_rel_error <= c.shift_tol,
            format!(
                "max rel error {:.3e}, max abs error {:.3e} over {} nodes with t >= {} (tol {:e})",
                r.max_rel_error, r.max_abs_error, r.checked_nodes, c.shift_t_min, c.shift_tol
            ),
        );
    }
    Ok(())
}

fn generalized_lines(report: &mut Report, field: &SpaceTimeField) -> Result<(), CliError> {
    let r = check_generalized_principles(field)?;
    principle_lines(report, "max principle", &r.max_principle);
    let v = r.vanishing_history;
    report.check(
        "vanishing history",
        v.passed,
        format!("first-step fractional term {:.3e} <= {:.3e}", v.first_value, v.bound),
    );
    match r.initial_sign {
        Some(i) => report.check("initial fractional sign", i.passed, format!("min {:.3e}, tol {:.3e}", i.min_value, i.tol)),
        None => report.skip("initial fractional sign", "initial data take negative values"),
    }
    Ok(())
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    worst: f64,
}

impl Tally {
    fn add(&mut self, passed: bool, slack: f64) {
        self.checks += 1;
        self.failed += usize::from(!passed);
        self.worst = if self.checks == 1 { slack } else { self.worst.max(slack) };
    }

    fn emit(&self, report: &mut Report, name: &str, what: &str) {
        if self.checks == 0 {
            report.skip(name, "no problem met the hypotheses");
        } else {
            report.check(
                name,
                self.failed == 0,
                format!("{} checks, {} failed, worst {what} {:.3e}", self.checks, self.failed, self.worst),
            );
        }
    }
}

fn suite(c: &DiffusionConfig, s: &Setup, report: &mut Report) -> Result<(), CliError> {
    if c.count == 0 {
        return Err(CliError::Config("count must be positive".into()));
    }
    let signs: Vec<SourceSign> = match c.sign {
        Some(SignArg::Nonnegative) => vec![SourceSign::NonNegative],
        Some(SignArg::Nonpositive) => vec![SourceSign::NonPositive],
        Some(SignArg::Zero) => vec![SourceSign::Zero],
        None => vec![SourceSign::NonNegative, SourceSign::NonPositive, SourceSign::Zero],
    };
    report.table = ResultTable::new(&[
        "index",
        "sign",
        "min_checked",
        "min_violation",
        "max_checked",
        "max_violation",
        "tol",
        "passed",
    ]);
    let generalized = matches!(s.form, EquationForm::Generalized(_));
    let (mut principle, mut vanishing, mut initial) = (Tally::default(), Tally::default(), Tally::default());
    let mut dependence: Vec<Tally> = c.delta.iter().map(|_| Tally::default()).collect();
    for i in 0..c.count {
        let sign = signs[i as usize % signs.len()];
        let problem = random_problem(c.seed, i, &s.params, sign, c.nonnegative_data).map_err(config)?;
        let field = solve(&problem, s.form, &s.opts)?;
        let mut passed = true;
        let r = if generalized {
            let g = check_generalized_principles(&field)?;
            vanishing.add(g.vanishing_history.passed, g.vanishing_history.first_value - g.vanishing_history.bound);
            passed &= g.vanishing_history.passed;
            if let Some(init) = g.initial_sign {
                initial.add(init.passed, -init.min_value - init.tol);
                passed &= init.passed;
            }
            g.max_principle
        } else {
            check_max_principle(&field)
        };
        for side in [r.min, r.max].into_iter().flatten() {
            principle.add(side.passed, side.violation - r.tol);
        }
        passed &= r.passed();
        for (t, &delta) in dependence.iter_mut().zip(&c.delta) {
            let other = solve(&perturbed(&problem, &s.lengths, delta), s.form, &s.opts)?;
            let d = dependence_from_fields(&field, &other)?;
            t.add(d.passed, d.diff - d.delta - d.tol);
            passed &= d.passed;
        }
        let sign_code = match sign {
            SourceSign::NonNegative => 1.0,
            SourceSign::NonPositive => -1.0,
            _ => 0.0,
        };
        let flag = |b: bool| f64::from(u8::from(b));
        report.table.push(vec![
            i as f64,
            sign_code,
            flag(r.min.is_some()),
            r.min.map_or(0.0, |m| m.violation),
            flag(r.max.is_some()),
            r.max.map_or(0.0, |m| m.violation),
            r.tol,
            flag(passed),
        ])?;
    }
    principle.emit(report, &format!("max principle suite ({} problems)", c.count), "violation - tol");
    if generalized {
        vanishing.emit(report, "vanishing history suite", "excess");
        initial.emit(report, "initial fractional sign suite", "excess");
    }
    for (t, delta) in dependence.iter().zip(&c.delta) {
        t.emit(report, &format!("continuous dependence suite delta={delta}"), "excess");
    }
    Ok(())
}
