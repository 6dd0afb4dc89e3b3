//! Named problems and seeded random problems.
//!
//! `S(x) = Π_d sin(π x_d / L_d)` and `λ = Σ_d (π / L_d)²`, so `Δ S = -λ S`;
//! `ℓ = log(t/a)`.

use super::checks::SourceSign;
use super::problem::{DiffusionProblem, Monotonicity, Source, SpaceFn, SpaceTimeFn, StateFn};
use super::space::SpaceGrid;
use crate::error::{Error, Result};
use crate::gamma::gamma_unchecked;
use crate::grid::{FracOrder, LogGrid};
use crate::rng::SplitMix64;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct CatalogParams {
    pub alpha: FracOrder,
    pub nu: f64,
    pub space: SpaceGrid,
    pub time: Arc<LogGrid>,
}

pub struct CatalogEntry {
    pub key: &'static str,
    pub summary: &'static str,
}

pub const DIFFUSION_CATALOG: &[CatalogEntry] = &[
    CatalogEntry { key: "constant", summary: "phi = psi = 5, F = 0; exact u = 5" },
    CatalogEntry { key: "sine_decay", summary: "phi = S(x), psi = 0, F = 0" },
    CatalogEntry { key: "shifted_sine", summary: "phi = 1 + S(x), psi = 1, F = 0" },
    CatalogEntry {
        key: "manufactured_ch",
        summary: "u = S(x) l^2; F = S [G(3)/G(3-a) l^(2-a) + nu lambda l^2] (Caputo form)",
    },
    CatalogEntry {
        key: "manufactured_ch_cubic",
        summary: "u = S(x) l^2; F = -u^3 + s with s from the exact u (Caputo form, nonincreasing)",
    },
    CatalogEntry {
        key: "manufactured_rh",
        summary: "u = S(x) l; F = S [1/t + nu lambda l^a / G(1+a)] (generalized form)",
    },
    CatalogEntry {
        key: "manufactured_rh_cubic",
        summary: "u = S(x) l; F = -u^3 + s with s from the exact u (generalized form, nonincreasing)",
    },
    CatalogEntry { key: "cubic_decay", summary: "phi = S(x), psi = 0, F = -u^3 (nonincreasing)" },
    CatalogEntry {
        key: "tanh_relax",
        summary: "phi = 1 + S(x), psi = 1, F = 1 - tanh(2u) (nonincreasing)",
    },
    CatalogEntry {
        key: "cubic_forced",
        summary: "phi = 4x(1-x)-type bump, psi = 0, F = 2 - u - u^3 (nonincreasing)",
    },
];

pub fn diffusion_keys() -> Vec<&'static str> {
    DIFFUSION_CATALOG.iter().map(|e| e.key).collect()
}

fn lengths(space: &SpaceGrid) -> Vec<f64> {
    match *space {
        SpaceGrid::Interval { length, .. } => vec![length],
        SpaceGrid::Rectangle { lengths, .. } => lengths.to_vec(),
    }
}

/// `S(x)` and `λ` for the grid's domain.
fn sine_mode(space: &SpaceGrid) -> (SpaceFn, f64) {
    let ls = lengths(space);
    let lambda = ls.iter().map(|l| (PI / l).powi(2)).sum();
    let s: SpaceFn = Arc::new(move |x: &[f64]| x.iter().zip(&ls).map(|(xi, l)| (PI * xi / l).sin()).product());
    (s, lambda)
}

fn constant(c: f64) -> SpaceFn {
    Arc::new(move |_| c)
}

fn constant_t(c: f64) -> SpaceTimeFn {
    Arc::new(move |_, _| c)
}

pub fn diffusion_problem(key: &str, params: &CatalogParams) -> Result<DiffusionProblem> {
    let alpha = params.alpha.value();
    let nu = params.nu;
    let a = params.time.a();
    let (s, lambda) = sine_mode(&params.space);
    let ell = move |t: f64| (t / a).ln();
    let base = |name: &str, initial: SpaceFn, boundary: SpaceTimeFn, source: Source| DiffusionProblem {
        name: name.to_string(),
        alpha: params.alpha,
        nu,
        space: params.space,
        time: params.time.clone(),
        source,
        initial,
        boundary,
        monotonicity: Monotonicity::None,
        exact: None,
    };
    let nonlinear = |f: StateFn, df_du: StateFn| Source::Nonlinear { f, df_du };
    let cubic = |s_term: SpaceTimeFn| {
        let f: StateFn = Arc::new(move |x: &[f64], t, u| -u * u * u + s_term(x, t));
        let df: StateFn = Arc::new(|_, _, u| -3.0 * u * u);
        (f, df)
    };

    let problem = match key {
        "constant" => DiffusionProblem {
            exact: Some(constant_t(5.0)),
            ..base(key, constant(5.0), constant_t(5.0), Source::zero())
        },
        "sine_decay" => base(key, s.clone(), constant_t(0.0), Source::zero()),
        "shifted_sine" => {
            let s = s.clone();
            base(key, Arc::new(move |x| 1.0 + s(x)), constant_t(1.0), Source::zero())
        }
        "manufactured_ch" | "manufactured_ch_cubic" => {
            let ratio = gamma_unchecked(3.0) / gamma_unchecked(3.0 - alpha);
            let (s1, s2) = (s.clone(), s.clone());
            let exact: SpaceTimeFn = Arc::new(move |x, t| s1(x) * ell(t).powi(2));
            let forcing: SpaceTimeFn = Arc::new(move |x, t| {
                let l = ell(t);
                s2(x) * (ratio * l.powf(2.0 - alpha) + nu * lambda * l * l)
            });
            let mut p = if key == "manufactured_ch" {
                base(key, constant(0.0), constant_t(0.0), Source::Linear(forcing))
            } else {
                let e = exact.clone();
                let (f, df) = cubic(Arc::new(move |x, t| forcing(x, t) + e(x, t).powi(3)));
                let mut p = base(key, constant(0.0), constant_t(0.0), nonlinear(f, df));
                p.monotonicity = Monotonicity::NonincreasingInU;
                p
            };
            p.exact = Some(exact);
            p
        }
        "manufactured_rh" | "manufactured_rh_cubic" => {
            let g = gamma_unchecked(1.0 + alpha);
            let (s1, s2) = (s.clone(), s.clone());
            let exact: SpaceTimeFn = Arc::new(move |x, t| s1(x) * ell(t));
            let forcing: SpaceTimeFn = Arc::new(move |x, t| s2(x) * (1.0 / t + nu * lambda * ell(t).powf(alpha) / g));
            let mut p = if key == "manufactured_rh" {
                base(key, constant(0.0), constant_t(0.0), Source::Linear(forcing))
            } else {
                let e = exact.clone();
                let (f, df) = cubic(Arc::new(move |x, t| forcing(x, t) + e(x, t).powi(3)));
                let mut p = base(key, constant(0.0), constant_t(0.0), nonlinear(f, df));
                p.monotonicity = Monotonicity::NonincreasingInU;
                p
            };
            p.exact = Some(exact);
            p
        }
        "cubic_decay" => {
            let (f, df) = cubic(constant_t(0.0));
            DiffusionProblem {
                monotonicity: Monotonicity::NonincreasingInU,
                ..base(key, s.clone(), constant_t(0.0), nonlinear(f, df))
            }
        }
        "tanh_relax" => {
            let s = s.clone();
            let f: StateFn = Arc::new(|_, _, u: f64| 1.0 - (2.0 * u).tanh());
            let df: StateFn = Arc::new(|_, _, u: f64| -2.0 / (2.0 * u).cosh().powi(2));
            DiffusionProblem {
                monotonicity: Monotonicity::NonincreasingInU,
                ..base(key, Arc::new(move |x| 1.0 + s(x)), constant_t(1.0), nonlinear(f, df))
            }
        }
        "cubic_forced" => {
            let ls = lengths(&params.space);
            let bump: SpaceFn = Arc::new(move |x: &[f64]| {
                x.iter().zip(&ls).map(|(xi, l)| 4.0 * xi * (l - xi) / (l * l)).product()
            });
            let f: StateFn = Arc::new(|_, _, u: f64| 2.0 - u - u * u * u);
            let df: StateFn = Arc::new(|_, _, u: f64| -1.0 - 3.0 * u * u);
            DiffusionProblem {
                monotonicity: Monotonicity::NonincreasingInU,
                ..base(key, bump, constant_t(0.0), nonlinear(f, df))
            }
        }
        _ => {
            return Err(Error::InvalidProblem(format!(
                "unknown diffusion problem '{key}'; available: {}",
                diffusion_keys().join(", ")
            )))
        }
    };
    problem.validate()?;
    Ok(problem)
}

/// Seeded linear problem with a source of the requested sign.
///
/// `φ = ℓ(x) + Σ_m A_m Π_d sin(k_{m,d} π x_d / L_d)` with `ℓ` affine,
/// `ψ = ℓ(x) + d sin²(ω log t)` and `F = σ (e_0 + e_1 sin²(ω_x·x + ω_t log t + θ))`.
/// With `nonnegative_data` the bumps are squared and every coefficient is
/// nonnegative, so `φ, ψ ≥ 0`.
pub fn random_problem(
    seed: u64,
    index: u64,
    params: &CatalogParams,
    sign: SourceSign,
    nonnegative_data: bool,
) -> Result<DiffusionProblem> {
    let mut rng = SplitMix64::stream(seed, index);
    let ls = lengths(&params.space);
    let dims = ls.len();
    let lo = if nonnegative_data { 0.0 } else { -1.0 };
    let offset = rng.uniform(lo, 1.0);
    let slopes: Vec<f64> = (0..dims).map(|_| rng.uniform(lo, 1.0)).collect();
    let bumps: Vec<(f64, Vec<f64>)> = (0..rng.int_in(1, 3))
        .map(|_| (rng.uniform(lo, 1.0), (0..dims).map(|_| rng.int_in(1, 3) as f64).collect()))
        .collect();
    let d = rng.uniform(lo, 1.0);
    let omega = rng.uniform(0.5, 4.0);
    let (e0, e1) = (rng.uniform(0.0, 1.0), rng.uniform(0.0, 2.0));
    let wx: Vec<f64> = (0..dims).map(|_| rng.uniform(0.0, 6.0)).collect();
    let (wt, theta) = (rng.uniform(0.0, 6.0), rng.uniform(0.0, 2.0 * PI));
    let sigma = match sign {
        SourceSign::NonNegative => 1.0,
        SourceSign::NonPositive => -1.0,
        SourceSign::Zero => 0.0,
        SourceSign::Indefinite => return Err(Error::Unsupported("random problems need a definite source sign".into())),
    };
    let a = params.time.a();

    let ls1 = ls.clone();
    let affine = move |x: &[f64]| offset + x.iter().zip(&slopes).zip(&ls1).map(|((xi, c), l)| c * xi / l).sum::<f64>();
    let affine = Arc::new(affine);
    let af = affine.clone();
    let initial: SpaceFn = Arc::new(move |x: &[f64]| {
        let bump = bumps
            .iter()
            .map(|(amp, k)| {
                let m: f64 = x.iter().zip(k).zip(&ls).map(|((xi, k), l)| (k * PI * xi / l).sin()).product();
                amp * if nonnegative_data { m * m } else { m }
            })
            .sum::<f64>();
        af(x) + bump
    });
    let boundary: SpaceTimeFn = Arc::new(move |x: &[f64], t: f64| affine(x) + d * (omega * (t / a).ln()).sin().powi(2));
    let source: SpaceTimeFn = Arc::new(move |x: &[f64], t: f64| {
        let phase = x.iter().zip(&wx).map(|(xi, w)| xi * w).sum::<f64>() + wt * (t / a).ln() + theta;
        sigma * (e0 + e1 * phase.sin().powi(2))
    });
    let problem = DiffusionProblem {
        name: format!("random:{seed}:{index}"),
        alpha: params.alpha,
        nu: params.nu,
        space: params.space,
        time: params.time.clone(),
        source: Source::Linear(source),
        initial,
        boundary,
        monotonicity: Monotonicity::None,
        exact: None,
    };
    problem.validate()?;
    Ok(problem)
}
