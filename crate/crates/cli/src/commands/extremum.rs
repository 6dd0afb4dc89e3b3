use crate::config::{ExtremumConfig, FamilyArg};
use crate::error::{config, CliError};
use crate::parse;
use crate::report::Report;
use crate::table::ResultTable;
use hadamard_core::extremum::{refine_failure, Campaign, CheckStatus, ExtremumKind, FamilyKind, Proposition, SampledFamily};
use std::sync::Arc;

pub fn run(c: &ExtremumConfig, report: &mut Report) -> Result<(), CliError> {
    let (a, t_end) = parse::interval(&c.grid)?;
    if c.n < 16 {
        return Err(CliError::Config(format!("extremum checks need n >= 16, got {}", c.n)));
    }
    if c.count == 0 {
        return Err(CliError::Config("count must be positive".into()));
    }
    if c.alpha.is_empty() {
        return Err(CliError::Config("at least one alpha is needed".into()));
    }
    let grid = Arc::new(parse::log_grid(a, t_end, c.n, c.grading)?);
    let alphas = c.alpha.iter().map(|&x| parse::order(x)).collect::<Result<Vec<_>, _>>()?;
    let kind = match c.family {
        FamilyArg::LogPolynomial => FamilyKind::LogPolynomial,
        FamilyArg::LogTrig => FamilyKind::LogTrig,
        FamilyArg::Mixed => FamilyKind::Mixed,
    };
    let campaign = Campaign::new(SampledFamily::new(c.seed, kind), c.count, alphas, grid).with_exec(c.exec);
    let outcomes = campaign.outcomes()?;
    let summary = campaign.summarize(&outcomes);

    report.table = ResultTable::new(&[
        "index",
        "alpha",
        "proposition",
        "kind",
        "node",
        "t0",
        "lhs",
        "rhs",
        "margin",
        "has_chain",
        "chain_margin",
        "budget",
        "status",
    ]);
    for o in &outcomes {
        for r in &o.reports {
            report.table.push(vec![
                o.index as f64,
                o.alpha,
                match r.proposition {
                    Proposition::Caputo => 0.0,
                    Proposition::Riemann => 1.0,
                },
                match r.kind {
                    ExtremumKind::Max => 0.0,
                    ExtremumKind::Min => 1.0,
                },
                r.node as f64,
                r.t0,
                r.lhs,
                r.rhs,
                r.margin,
                f64::from(u8::from(r.chain_margin.is_some())),
                r.chain_margin.unwrap_or(0.0),
                r.tolerance_budget,
                match r.status {
                    CheckStatus::Pass => 1.0,
                    CheckStatus::Fail => 0.0,
                    CheckStatus::Skipped => -1.0,
                },
            ])?;
        }
    }

    for t in &summary.tallies {
        let prop = serde_json::to_value(t.proposition).map_err(config)?;
        report.check(
            &format!("extremum alpha={} {}", t.alpha, prop.as_str().unwrap_or("?")),
            t.failed == 0,
            format!(
                "{} checks, {} passed, {} failed, {} skipped; worst margin {:.3e} (index {}), worst margin/budget {:.3e}",
                t.checks, t.passed, t.failed, t.skipped, t.worst_margin, t.worst_index, t.worst_relative
            ),
        );
    }
    for f in &summary.failures {
        let r = refine_failure(&campaign, f)?;
        report.info(
            "refinement",
            format!(
                "index {} alpha {}: margin {:.3e} at n={} -> {:.3e} at n={}; {}",
                f.index,
                f.alpha,
                r.margin,
                r.intervals,
                r.refined_margin,
                r.refined_intervals,
                if r.is_artifact { "shrinks, discretization artifact" } else { "does not shrink" }
            ),
        );
    }
    Ok(())
}
