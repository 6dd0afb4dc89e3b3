use hadamard_core::extremum::*;
use hadamard_core::{Exec, FracOrder, GridFunction, LogGrid};
use std::f64::consts::E;
use std::sync::Arc;

fn grid(n: usize) -> Arc<LogGrid> {
    Arc::new(LogGrid::uniform(1.0, E * E, n).unwrap())
}

fn alphas() -> Vec<FracOrder> {
    [0.1, 0.25, 0.5, 0.75, 0.9].iter().map(|&a| FracOrder::new(a).unwrap()).collect()
}

#[test]
fn parabola_example() {
    let f = GridFunction::from_fn(grid(2048), |t| -(t.ln() - 1.0).powi(2)).unwrap();
    let r = check_caputo_extremum(&f, FracOrder::new(0.5).unwrap(), ExtremumKind::Max).unwrap();
    assert_eq!(r.node, 1024);
    assert!((r.lhs - 0.752_252_778_1).abs() < 1e-3, "{}", r.lhs);
    assert!((r.rhs - 0.564_189_583_547_756_3).abs() < 1e-12, "{}", r.rhs);
    assert_eq!(r.status, CheckStatus::Pass);
    let rr = check_riemann_extremum(&f, FracOrder::new(0.5).unwrap(), ExtremumKind::Max).unwrap();
    // f(t0) = 0: the sign corollary D^α f(t0) ≥ 0 is checked as well
    assert!(rr.chain_margin.is_some());
    assert_eq!(rr.status, CheckStatus::Pass);
}

#[test]
fn minimum_mirrors_maximum() {
    let g = grid(512);
    let al = FracOrder::new(0.3).unwrap();
    let f = GridFunction::from_fn(g.clone(), |t| (t.ln() - 0.7).powi(2) - 0.2).unwrap();
    let neg = GridFunction::new(g, f.values().iter().map(|v| -v).collect()).unwrap();
    let lo = check_caputo_extremum(&f, al, ExtremumKind::Min).unwrap();
    let hi = check_caputo_extremum(&neg, al, ExtremumKind::Max).unwrap();
    assert_eq!(lo.node, hi.node);
    assert_eq!(lo.margin, hi.margin);
    assert_eq!(lo.lhs, -hi.lhs);
}

#[test]
fn campaign_has_no_failures() {
    for kind in [FamilyKind::LogPolynomial, FamilyKind::LogTrig, FamilyKind::Mixed] {
        let summary = fuzz_campaign(SampledFamily::new(7, kind), 60, &alphas(), grid(512)).unwrap();
        assert_eq!(summary.total_failures(), 0, "{kind:?}");
        assert_eq!(summary.tallies.len(), 10);
        for t in &summary.tallies {
            assert_eq!(t.checks, 120);
            assert_eq!(t.passed + t.skipped, t.checks);
        }
    }
}

#[test]
fn campaign_is_reproducible() {
    let run = |exec| {
        Campaign::new(SampledFamily::new(99, FamilyKind::Mixed), 40, alphas(), grid(256))
            .with_exec(exec)
            .run()
            .unwrap()
    };
    let a = serde_json::to_string(&run(Exec::Serial)).unwrap();
    let b = serde_json::to_string(&run(Exec::Parallel)).unwrap();
    let c = serde_json::to_string(&run(Exec::Parallel)).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn refinement_clears_a_spurious_deficit() {
    let fam = SampledFamily::new(3, FamilyKind::LogTrig);
    let campaign = Campaign::new(fam.clone(), 4, alphas(), grid(128));
    let f = fam.member(2).sample(grid(128)).unwrap();
    let mut report = check_caputo_extremum(&f, alphas()[2], ExtremumKind::Max).unwrap();
    report.margin = -1.0;
    report.status = CheckStatus::Fail;
    let record = FailureRecord { seed: 3, index: 2, alpha: 0.5, report };
    let r = refine_failure(&campaign, &record).unwrap();
    assert_eq!(r.refined_intervals, 256);
    assert!(r.refined_margin >= 0.0);
    assert!(r.is_artifact);
}

#[test]
fn invalid_campaigns() {
    let fam = SampledFamily::new(1, FamilyKind::Mixed);
    assert!(fuzz_campaign(fam.clone(), 0, &alphas(), grid(64)).is_err());
    assert!(fuzz_campaign(fam.clone(), 5, &[], grid(64)).is_err());
    assert!(fuzz_campaign(fam, 5, &alphas(), grid(8)).is_err());
}
