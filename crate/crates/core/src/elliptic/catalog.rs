//! Named elliptic problems and seeded random problems. `ξ_j = log x_j`.

use super::problem::{BSign, CSign, EllipticProblem, EllipticSource, FieldFn, StateFieldFn};
use crate::diffusion::{Monotonicity, Side};
use crate::error::{Error, Result};
use crate::gamma::gamma_unchecked;
use crate::grid::FracOrder;
use crate::rng::SplitMix64;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct EllipticParams {
    pub alpha: FracOrder,
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
}

pub struct CatalogEntry {
    pub key: &'static str,
    pub summary: &'static str,
}

pub const ELLIPTIC_CATALOG: &[CatalogEntry] = &[
    CatalogEntry { key: "zero", summary: "phi = 0, F = 0, b = -1, c = 0; exact u = 0" },
    CatalogEntry { key: "laplace", summary: "a = b = c = 0, F = 0, phi = sum_j (x_j - 1); exact u = phi" },
    CatalogEntry {
        key: "manufactured",
        summary: "1D, b = -1, c = 0; u = xi^2, F = (2 - 2 xi)/x^2 - G(3)/G(3-a) xi^(2-a)",
    },
    CatalogEntry {
        key: "manufactured_nonlinear",
        summary: "1D, b = -1, c = -2; u = xi^2, F(u, x) = -u + s (nonincreasing)",
    },
    CatalogEntry {
        key: "tanh_sink",
        summary: "b = -1, c = -1.5, F(u, x) = 0.5 - tanh(u), phi = prod_j xi_j / log h_j (nonincreasing)",
    },
    CatalogEntry {
        key: "cubic_sink",
        summary: "b = -1, a = 0.5, c = -4, F(u, x) = 1 - u^3, phi = prod_j xi_j / log h_j (nonincreasing)",
    },
    CatalogEntry {
        key: "sign_positive",
        summary: "b = -1, c = -1, F = 0, phi = 1 + sin(3 sum xi) >= 0",
    },
    CatalogEntry {
        key: "sign_negative",
        summary: "b = -1, c = -1, F = 0, phi = -(1 + sin(3 sum xi)) <= 0",
    },
    CatalogEntry {
        key: "homogeneous",
        summary: "variable a, b < 0, c <= 0, F = 0, phi = 0; exact u = 0",
    },
    CatalogEntry {
        key: "positive_b_probe",
        summary: "1D, b = +4, c = 0, F = -1, phi = 0 (positive fractional coefficient)",
    },
];

pub fn elliptic_keys() -> Vec<&'static str> {
    ELLIPTIC_CATALOG.iter().map(|e| e.key).collect()
}

fn constant(c: f64) -> FieldFn {
    Arc::new(move |_| c)
}

fn xi_sum() -> impl Fn(&[f64]) -> f64 + Clone {
    |x: &[f64]| x.iter().map(|v| v.ln()).sum::<f64>()
}

pub fn elliptic_problem(key: &str, params: &EllipticParams) -> Result<EllipticProblem> {
    let dims = params.extents.len();
    let alpha = params.alpha.value();
    let base = |b: f64, c: f64, source: EllipticSource, boundary: FieldFn| EllipticProblem {
        name: key.to_string(),
        alpha: params.alpha,
        extents: params.extents.clone(),
        cells: params.cells.clone(),
        a: vec![constant(0.0); dims],
        b: vec![constant(b); dims],
        c: constant(c),
        source,
        boundary,
        b_sign: if b < 0.0 {
            BSign::Negative
        } else if b > 0.0 {
            BSign::Positive
        } else {
            BSign::Mixed
        },
        c_sign: if c <= 0.0 { CSign::Nonpositive } else { CSign::General },
        monotonicity: Monotonicity::None,
        exact: None,
    };
    let one_d = || {
        if dims == 1 {
            Ok(())
        } else {
            Err(Error::InvalidProblem(format!("'{key}' is one-dimensional")))
        }
    };
    let normalized_product = {
        let logs: Vec<f64> = params.extents.iter().map(|h| h.ln()).collect();
        Arc::new(move |x: &[f64]| x.iter().zip(&logs).map(|(v, l)| v.ln() / l).product::<f64>()) as FieldFn
    };
    let ratio = gamma_unchecked(3.0) / gamma_unchecked(3.0 - alpha);
    // u = ξ², b = -1: Δu + b D^α u = (2 - 2ξ)/x² - ratio ξ^{2-α}
    let manufactured_lhs = move |x: f64| {
        let xi = x.ln();
        (2.0 - 2.0 * xi) / (x * x) - ratio * xi.powf(2.0 - alpha)
    };
    let square: FieldFn = Arc::new(|x: &[f64]| x[0].ln().powi(2));

    let problem = match key {
        "zero" => EllipticProblem {
            exact: Some(constant(0.0)),
            ..base(-1.0, 0.0, EllipticSource::Linear(constant(0.0)), constant(0.0))
        },
        "laplace" => {
            let affine: FieldFn = Arc::new(|x: &[f64]| x.iter().map(|v| v - 1.0).sum());
            EllipticProblem {
                exact: Some(affine.clone()),
                ..base(0.0, 0.0, EllipticSource::Linear(constant(0.0)), affine)
            }
        }
        "manufactured" => {
            one_d()?;
            EllipticProblem {
                exact: Some(square.clone()),
                ..base(-1.0, 0.0, EllipticSource::Linear(Arc::new(move |x: &[f64]| manufactured_lhs(x[0]))), square)
            }
        }
        "manufactured_nonlinear" => {
            one_d()?;
            // Δu - D^α u - 2u = -u + s  ⇒  s = lhs - u
            let f: StateFieldFn = Arc::new(move |u, x: &[f64]| {
                let exact = x[0].ln().powi(2);
                -u + manufactured_lhs(x[0]) - exact
            });
            let df: StateFieldFn = Arc::new(|_, _| -1.0);
            EllipticProblem {
                exact: Some(square.clone()),
                monotonicity: Monotonicity::NonincreasingInU,
                ..base(-1.0, -2.0, EllipticSource::Nonlinear { f, df_du: df }, square)
            }
        }
        "tanh_sink" => {
            let f: StateFieldFn = Arc::new(|u: f64, _| 0.5 - u.tanh());
            let df: StateFieldFn = Arc::new(|u: f64, _| -1.0 / u.cosh().powi(2));
            EllipticProblem {
                monotonicity: Monotonicity::NonincreasingInU,
                ..base(-1.0, -1.5, EllipticSource::Nonlinear { f, df_du: df }, normalized_product)
            }
        }
        "cubic_sink" => {
            let f: StateFieldFn = Arc::new(|u: f64, _| 1.0 - u * u * u);
            let df: StateFieldFn = Arc::new(|u: f64, _| -3.0 * u * u);
            EllipticProblem {
                monotonicity: Monotonicity::NonincreasingInU,
                a: vec![constant(0.5); dims],
                ..base(-1.0, -4.0, EllipticSource::Nonlinear { f, df_du: df }, normalized_product)
            }
        }
        "sign_positive" | "sign_negative" => {
            let s = if key == "sign_positive" { 1.0 } else { -1.0 };
            let sum = xi_sum();
            base(
                -1.0,
                -1.0,
                EllipticSource::Linear(constant(0.0)),
                Arc::new(move |x: &[f64]| s * (1.0 + (3.0 * sum(x)).sin())),
            )
        }
        "homogeneous" => EllipticProblem {
            a: (0..dims)
                .map(|j| Arc::new(move |x: &[f64]| (x[j] * PI).cos()) as FieldFn)
                .collect(),
            b: (0..dims)
                .map(|j| Arc::new(move |x: &[f64]| -1.0 - 0.5 * x[j].ln()) as FieldFn)
                .collect(),
            c: Arc::new(|x: &[f64]| -(x[0] - 1.0).powi(2)),
            exact: Some(constant(0.0)),
            ..base(-1.0, 0.0, EllipticSource::Linear(constant(0.0)), constant(0.0))
        },
        "positive_b_probe" => {
            one_d()?;
            base(4.0, 0.0, EllipticSource::Linear(constant(-1.0)), constant(0.0))
        }
        _ => {
            return Err(Error::InvalidProblem(format!(
                "unknown elliptic problem '{key}'; available: {}",
                elliptic_keys().join(", ")
            )))
        }
    };
    problem.validate()?;
    Ok(problem)
}

/// Seeded linear problem with `b_j < 0`, `c ≤ 0` and a source of the sign
/// that makes `side` the theorem-backed bound (`F ≥ 0` for the upper side).
///
/// `b_j = -β_j (1 + 0.3 sin(k_j ξ_j))`, `c = -γ sin²(ω·ξ)`, constant `a_j`,
/// `F = σ (e_0 + e_1 sin²(ω'·ξ + θ))` and `φ = p_0 + Σ p_j ξ_j + q sin(κ·ξ + θ')`.
pub fn random_elliptic(seed: u64, index: u64, params: &EllipticParams, side: Side) -> Result<EllipticProblem> {
    let mut rng = SplitMix64::stream(seed, index);
    let dims = params.extents.len();
    let draw = |rng: &mut SplitMix64, lo: f64, hi: f64, n: usize| (0..n).map(|_| rng.uniform(lo, hi)).collect::<Vec<_>>();
    let beta = draw(&mut rng, 0.2, 3.0, dims);
    let kb = draw(&mut rng, 0.0, 4.0, dims);
    let gamma = if rng.next_f64() < 0.25 { 0.0 } else { rng.uniform(0.0, 3.0) };
    let wc = draw(&mut rng, 0.0, 4.0, dims);
    let a = draw(&mut rng, -1.0, 1.0, dims);
    let (e0, e1) = (rng.uniform(0.0, 2.0), rng.uniform(0.0, 4.0));
    let wf = draw(&mut rng, 0.0, 6.0, dims);
    let theta = rng.uniform(0.0, 2.0 * PI);
    let p0 = rng.uniform(-1.0, 1.0);
    let pj = draw(&mut rng, -1.0, 1.0, dims);
    let q = rng.uniform(-1.0, 1.0);
    let kappa = draw(&mut rng, 0.0, 5.0, dims);
    let theta2 = rng.uniform(0.0, 2.0 * PI);
    let sigma = match side {
        Side::Max => 1.0,
        Side::Min => -1.0,
    };
    let dot = |w: &[f64], x: &[f64]| w.iter().zip(x).map(|(w, x)| w * x.ln()).sum::<f64>();

    let b = (0..dims)
        .map(|j| {
            let (bj, kj) = (beta[j], kb[j]);
            Arc::new(move |x: &[f64]| -bj * (1.0 + 0.3 * (kj * x[j].ln()).sin())) as FieldFn
        })
        .collect();
    let problem = EllipticProblem {
        name: format!("random:{seed}:{index}"),
        alpha: params.alpha,
        extents: params.extents.clone(),
        cells: params.cells.clone(),
        a: a.iter().map(|&aj| constant(aj)).collect(),
        b,
        c: Arc::new(move |x: &[f64]| -gamma * dot(&wc, x).sin().powi(2)),
        source: EllipticSource::Linear(Arc::new(move |x: &[f64]| sigma * (e0 + e1 * (dot(&wf, x) + theta).sin().powi(2)))),
        boundary: Arc::new(move |x: &[f64]| {
            p0 + x.iter().zip(&pj).map(|(x, p)| p * x.ln()).sum::<f64>() + q * (dot(&kappa, x) + theta2).sin()
        }),
        b_sign: BSign::Negative,
        c_sign: CSign::Nonpositive,
        monotonicity: Monotonicity::None,
        exact: None,
    };
    problem.validate()?;
    Ok(problem)
}
