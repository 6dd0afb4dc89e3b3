use super::{caputo_report, riemann_report, tolerance_budget, ExtremumKind, ExtremumReport, Proposition, SampledFamily};
use super::{locate_extremum, CheckStatus};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{FracOrder, LogGrid};
use crate::weights::SlopeWeights;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Campaign {
    pub family: SampledFamily,
    pub count: u64,
    pub alphas: Vec<FracOrder>,
    pub grid: Arc<LogGrid>,
    pub exec: Exec,
}

/// All reports for one sampled function at one order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionOutcome {
    pub index: u64,
    pub alpha: f64,
    pub reports: Vec<ExtremumReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub alpha: f64,
    pub proposition: Proposition,
    pub checks: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    /// Smallest margin seen and the function index that produced it.
    pub worst_margin: f64,
    pub worst_index: u64,
    /// Smallest `margin / budget` seen, useful when budgets vary widely.
    pub worst_relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub index: u64,
    pub alpha: f64,
    pub report: ExtremumReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub seed: u64,
    pub count: u64,
    pub intervals: usize,
    pub tallies: Vec<Tally>,
    pub failures: Vec<FailureRecord>,
}

impl CampaignSummary {
    pub fn total_failures(&self) -> u64 {
        self.tallies.iter().map(|t| t.failed).sum()
    }
}

impl Campaign {
    pub fn new(family: SampledFamily, count: u64, alphas: Vec<FracOrder>, grid: Arc<LogGrid>) -> Self {
        Self {
            family,
            count,
            alphas,
            grid,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Unsupported("campaign count must be positive".into()));
        }
        if self.alphas.is_empty() {
            return Err(Error::Unsupported("campaign needs at least one order".into()));
        }
        if self.grid.intervals() < 16 {
            return Err(Error::InvalidGrid("extremum checks need n >= 16".into()));
        }
        Ok(())
    }

    /// Every report, ordered by order then function index.
    pub fn outcomes(&self) -> Result<Vec<FunctionOutcome>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.alphas.len() * self.count as usize);
        for &alpha in &self.alphas {
            let weights = SlopeWeights::new(&self.grid, alpha.value());
            let batch = self.exec.map(self.count as usize, |i| {
                check_member(&self.family, i as u64, alpha, &self.grid, &weights)
            });
            for item in batch {
                out.push(item?);
            }
        }
        Ok(out)
    }

    pub fn run(&self) -> Result<CampaignSummary> {
        let outcomes = self.outcomes()?;
        Ok(self.summarize(&outcomes))
    }

    /// Tallies and failure records for outcomes produced by this campaign.
    pub fn summarize(&self, outcomes: &[FunctionOutcome]) -> CampaignSummary {
        summarize(self, outcomes)
    }
}

fn check_member(
    family: &SampledFamily,
    index: u64,
    alpha: FracOrder,
    grid: &Arc<LogGrid>,
    weights: &SlopeWeights<'_>,
) -> Result<FunctionOutcome> {
    let f = family.member(index).sample(grid.clone())?;
    let budget = tolerance_budget(&f, alpha);
    let mut reports = Vec::with_capacity(4);
    for kind in [ExtremumKind::Max, ExtremumKind::Min] {
        let node = locate_extremum(&f, kind)?.node;
        reports.push(caputo_report(&f, alpha, node, kind, weights, budget)?);
        reports.push(riemann_report(&f, alpha, node, kind, weights, budget)?);
    }
    Ok(FunctionOutcome {
        index,
        alpha: alpha.value(),
        reports,
    })
}

fn summarize(campaign: &Campaign, outcomes: &[FunctionOutcome]) -> CampaignSummary {
    let mut tallies: Vec<Tally> = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        for r in &o.reports {
            let pos = tallies
                .iter()
                .position(|t| t.alpha == o.alpha && t.proposition == r.proposition)
                .unwrap_or_else(|| {
                    tallies.push(Tally {
                        alpha: o.alpha,
                        proposition: r.proposition,
                        checks: 0,
                        passed: 0,
                        failed: 0,
                        skipped: 0,
                        worst_margin: f64::INFINITY,
                        worst_index: o.index,
                        worst_relative: f64::INFINITY,
                    });
                    tallies.len() - 1
                });
            let t = &mut tallies[pos];
            t.checks += 1;
            match r.status {
                CheckStatus::Pass => t.passed += 1,
                CheckStatus::Skipped => {
                    t.skipped += 1;
                    continue;
                }
                CheckStatus::Fail => {
                    t.failed += 1;
                    failures.push(FailureRecord {
                        seed: campaign.family.seed,
                        index: o.index,
                        alpha: o.alpha,
                        report: *r,
                    });
                }
            }
            let m = r.margin.min(r.chain_margin.unwrap_or(f64::INFINITY));
            if m < t.worst_margin {
                t.worst_margin = m;
                t.worst_index = o.index;
            }
            if r.tolerance_budget > 0.0 {
                t.worst_relative = t.worst_relative.min(m / r.tolerance_budget);
            }
        }
    }
    CampaignSummary {
        seed: campaign.family.seed,
        count: campaign.count,
        intervals: campaign.grid.intervals(),
        tallies,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub intervals: usize,
    pub margin: f64,
    pub refined_intervals: usize,
    pub refined_margin: f64,
    /// `|coarse deficit| / |refined deficit|`; infinite when the refined
    /// check has no deficit.
    pub shrink_factor: f64,
    /// True when the violation shrinks by at least 1.5 under doubling.
    pub is_artifact: bool,
}

/// Re-run a failing check on a grid with twice the intervals.
pub fn refine_failure(campaign: &Campaign, failure: &FailureRecord) -> Result<Refinement> {
    let g = &campaign.grid;
    let n = g.intervals();
    let fine = Arc::new(if g.is_uniform() {
        LogGrid::uniform(g.a(), g.t_end(), 2 * n)?
    } else {
        LogGrid::graded(g.a(), g.t_end(), 2 * n, g.grading())?
    });
    let alpha = FracOrder::new(failure.alpha)?;
    let weights = SlopeWeights::new(&fine, alpha.value());
    let f = campaign.family.member(failure.index).sample(fine.clone())?;
    let budget = tolerance_budget(&f, alpha);
    let kind = failure.report.kind;
    let node = locate_extremum(&f, kind)?.node;
    let report = match failure.report.proposition {
        Proposition::Caputo => caputo_report(&f, alpha, node, kind, &weights, budget)?,
        Proposition::Riemann => riemann_report(&f, alpha, node, kind, &weights, budget)?,
    };
    let deficit = |r: &ExtremumReport| (-r.margin.min(r.chain_margin.unwrap_or(f64::INFINITY))).max(0.0);
    let coarse = deficit(&failure.report);
    let refined = deficit(&report);
    let shrink_factor = if refined == 0.0 { f64::INFINITY } else { coarse / refined };
    Ok(Refinement {
        intervals: n,
        margin: failure.report.margin,
        refined_intervals: 2 * n,
        refined_margin: report.margin,
        shrink_factor,
        is_artifact: shrink_factor >= 1.5,
    })
}

/// Convenience wrapper matching the common call shape.
pub fn fuzz_campaign(family: SampledFamily, count: u64, alphas: &[FracOrder], grid: Arc<LogGrid>) -> Result<CampaignSummary> {
    Campaign::new(family, count, alphas.to_vec(), grid).run()
}

#[cfg(test)]
mod tests {
    use super::super::FamilyKind;
    use super::*;

    #[test]
    fn serial_and_parallel_agree() {
        let grid = Arc::new(LogGrid::uniform(1.0, 10.0, 128).unwrap());
        let alphas = vec![FracOrder::new(0.3).unwrap(), FracOrder::new(0.8).unwrap()];
        let c = Campaign::new(SampledFamily::new(7, FamilyKind::Mixed), 40, alphas, grid);
        let a = c.clone().with_exec(Exec::Serial).run().unwrap();
        let b = c.with_exec(Exec::Parallel).run().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_failures(), 0);
        assert_eq!(a.tallies.len(), 4);
        assert!(a.tallies.iter().all(|t| t.checks == 80));
    }

    #[test]
    fn zero_count_rejected() {
        let grid = Arc::new(LogGrid::uniform(1.0, 10.0, 64).unwrap());
        let c = Campaign::new(SampledFamily::new(1, FamilyKind::LogTrig), 0, vec![FracOrder::new(0.5).unwrap()], grid);
        assert!(c.run().is_err());
    }
}
