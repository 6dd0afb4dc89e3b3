// Frozen reference values are written out digit by digit.
#![allow(clippy::approx_constant)]

use hadamard_core::closed_form::{closed_form_deriv, ClosedFormTag, Operator, TrigTerm};
use hadamard_core::ops::*;
use hadamard_core::{gamma, FracOrder, GridFunction, LogGrid};
use std::f64::consts::E;
use std::sync::Arc;

fn alpha(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn uniform(t_end: f64, n: usize) -> Arc<LogGrid> {
    Arc::new(LogGrid::uniform(1.0, t_end, n).unwrap())
}

fn graded(t_end: f64, n: usize) -> Arc<LogGrid> {
    Arc::new(LogGrid::graded(1.0, t_end, n, 2.0).unwrap())
}

#[test]
fn gamma_reference_values() {
    assert_eq!(gamma(1.0).unwrap(), 1.0);
    assert!((gamma(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-13);
    assert!((gamma(2.5).unwrap() - 1.329_340_388_179_137).abs() < 1e-13);
    assert!(gamma(0.0).is_err());
    assert!(gamma(-2.0).is_err());
}

#[test]
fn frozen_kernel_values() {
    let g = uniform(E * E, 1024);
    let at_e = g.nearest(E);
    assert!((g.t()[at_e] - E).abs() < 1e-12);

    let parabola = GridFunction::from_fn(g.clone(), |t| -(t.ln() - 1.0).powi(2)).unwrap();
    let d = caputo_hadamard_deriv(&parabola, alpha(0.5)).unwrap();
    assert!((d.values()[at_e] - 0.752_252_778_1).abs() < 1e-3);

    let log = GridFunction::from_fn(g.clone(), f64::ln).unwrap();
    let d = caputo_hadamard_deriv(&log, alpha(0.5)).unwrap();
    assert!((d.values()[at_e] - 1.128_379_167_095_512_6).abs() < 1e-12);
    let d = riemann_hadamard_deriv(&log, alpha(0.5), RiemannMethod::Split).unwrap();
    assert!((d.values()[at_e] - 1.128_379_167_095_512_6).abs() < 1e-12);

    let one = GridFunction::from_fn(g.clone(), |_| 1.0).unwrap();
    let d = riemann_hadamard_deriv(&one, alpha(0.5), RiemannMethod::Split).unwrap();
    assert!((d.values()[at_e] - 0.564_189_583_5).abs() < 1e-10);
    let i = hadamard_integral(&one, alpha(0.5)).unwrap();
    assert!((i.values()[at_e] - 1.128_379_167_1).abs() < 1e-10);
}

#[test]
fn integral_of_singular_power_is_exact() {
    // I^0.7 (log t)^-0.7 = Γ(0.3)
    let g = graded(5.0, 200);
    let f = GridFunction::log_power(g, 1.0, -0.7).unwrap();
    let i = hadamard_integral(&f, alpha(0.7)).unwrap();
    for v in i.values() {
        assert!((v - 2.991_568_987_687_59).abs() < 1e-10, "{v}");
    }
}

fn max_rel_error(beta: f64, a: f64, n: usize) -> f64 {
    let g = graded(E * E, n);
    let tag = ClosedFormTag::LogPower { beta };
    let f = tag.sample(g.clone()).unwrap();
    let d = riemann_hadamard_deriv(&f, alpha(a), RiemannMethod::Split).unwrap();
    (1..g.len())
        .filter(|&k| g.t()[k] >= 1.1)
        .map(|k| {
            let exact = closed_form_deriv(&tag, alpha(a), 1.0, g.t()[k], Operator::Hadamard).unwrap();
            ((d.values()[k] - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn log_power_orders_on_graded_grids() {
    for beta in [1.5, 3.0] {
        for a in [0.25, 0.75] {
            let coarse = max_rel_error(beta, a, 256);
            let fine = max_rel_error(beta, a, 512);
            let order = (coarse / fine).log2();
            assert!(order >= 2.0 - a - 0.15, "beta {beta} alpha {a}: order {order}");
        }
    }
    // affine in log t: reproduced to roundoff
    assert!(max_rel_error(2.0, 0.5, 128) < 1e-12);
}

#[test]
fn null_case_direct() {
    for a in [0.1, 0.4, 0.9] {
        let g = graded(E * E, 512);
        let f = GridFunction::log_power(g.clone(), 1.0, a - 1.0).unwrap();
        let d = riemann_hadamard_deriv(&f, alpha(a), RiemannMethod::Direct).unwrap();
        let budget = 50.0 * g.max_step().powf(2.0 - a);
        for k in 1..g.len() {
            assert!(d.values()[k].abs() <= budget, "alpha {a} node {k}: {}", d.values()[k]);
        }
    }
}

#[test]
fn split_and_direct_converge_together() {
    let gap = |n: usize| {
        let g = uniform(E * E, n);
        let f = GridFunction::from_log_fn(g.clone(), |u| 1.0 + u.sin() + 0.3 * u * u).unwrap();
        let s = riemann_hadamard_deriv(&f, alpha(0.4), RiemannMethod::Split).unwrap();
        let d = riemann_hadamard_deriv(&f, alpha(0.4), RiemannMethod::Direct).unwrap();
        (1..g.len())
            .filter(|&k| g.t()[k] >= 1.5)
            .map(|k| (s.values()[k] - d.values()[k]).abs())
            .fold(0.0, f64::max)
    };
    let gaps: Vec<f64> = [64, 128, 256, 512].into_iter().map(gap).collect();
    for w in gaps.windows(2) {
        assert!(w[1] < 0.75 * w[0], "{gaps:?}");
    }
    assert!(gaps[3] < 1e-3);
}

#[test]
fn composition_residual_shrinks() {
    let g = uniform(E * E, 1024);
    let log = GridFunction::from_fn(g, f64::ln).unwrap();
    assert!(compose_check(&log, alpha(0.5)).unwrap().max_abs() <= 5e-3);

    let residuals: Vec<f64> = [256, 512, 1024, 2048]
        .into_iter()
        .map(|n| {
            let f = GridFunction::from_log_fn(uniform(E * E, n), |u| u * u).unwrap();
            compose_check(&f, alpha(0.25)).unwrap().max_abs()
        })
        .collect();
    for w in residuals.windows(2) {
        assert!(w[1] < w[0], "{residuals:?}");
    }
}

#[test]
fn composition_with_endpoint_value() {
    let residuals: Vec<f64> = [128, 256, 512]
        .into_iter()
        .map(|n| {
            let f = GridFunction::from_log_fn(uniform(E * E, n), |u| 1.0 + (2.0 * u).sin()).unwrap();
            compose_check(&f, alpha(0.7)).unwrap().max_abs()
        })
        .collect();
    assert!(residuals[1] < residuals[0] && residuals[2] < residuals[1], "{residuals:?}");
}

#[test]
fn limit_orders() {
    let g = uniform(E * E, 4096);
    let f = GridFunction::from_fn(g.clone(), |t| t.ln().sin()).unwrap();
    let near_one = caputo_hadamard_deriv(&f, alpha(0.99)).unwrap();
    let near_zero = caputo_hadamard_deriv(&f, alpha(0.01)).unwrap();
    for k in (64..g.len()).step_by(64) {
        let u = g.u()[k];
        let delta = u.cos();
        if delta.abs() > 0.2 {
            assert!((near_one.values()[k] - delta).abs() <= 0.1 * delta.abs(), "node {k}");
        }
        let jump = u.sin();
        if jump.abs() > 0.2 {
            assert!((near_zero.values()[k] - jump).abs() <= 0.1 * jump.abs(), "node {k}");
        }
    }
}

#[test]
fn trig_oracle_agrees_with_kernel() {
    let tag = ClosedFormTag::LogTrig {
        terms: vec![TrigTerm { freq: 2.0, amp: 1.0, phase: 0.3 }],
    };
    let errors: Vec<f64> = [128, 256, 512]
        .into_iter()
        .map(|n| {
            let g = uniform(E * E, n);
            let f = tag.sample(g.clone()).unwrap();
            let d = caputo_hadamard_deriv(&f, alpha(0.5)).unwrap();
            [n / 4, n / 2, n]
                .into_iter()
                .map(|k| {
                    let exact = closed_form_deriv(&tag, alpha(0.5), 1.0, g.t()[k], Operator::CaputoHadamard).unwrap();
                    (d.values()[k] - exact).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let order = (errors[1] / errors[2]).log2();
    assert!(order >= 1.35, "{errors:?}");
}

#[test]
fn closed_form_catalog() {
    let a = alpha(0.5);
    let v = closed_form_deriv(&ClosedFormTag::LogPower { beta: 2.0 }, a, 1.0, E, Operator::Hadamard).unwrap();
    assert!((v - 1.128_379_167_1).abs() < 1e-10);
    let null = closed_form_deriv(&ClosedFormTag::LogPower { beta: 0.3 }, alpha(0.3), 1.0, 4.0, Operator::Hadamard).unwrap();
    assert_eq!(null, 0.0);
    let c = closed_form_deriv(&ClosedFormTag::Constant { c: 7.0 }, alpha(0.3), 1.0, 2.0, Operator::CaputoHadamard).unwrap();
    assert_eq!(c, 0.0);
    assert!(closed_form_deriv(&ClosedFormTag::LogPower { beta: 0.2 }, alpha(0.5), 1.0, 2.0, Operator::Hadamard).is_err());
    assert!(closed_form_deriv(&ClosedFormTag::Constant { c: 1.0 }, a, 1.0, 1.0, Operator::Integral).is_err());
}
