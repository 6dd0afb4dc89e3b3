//! Discrete Hadamard operators.
//!
//! * [`hadamard_integral`]: product integration, linear interpolation of the
//!   operand in `u`, exact integration of the weakly singular kernel.
//! * [`caputo_hadamard_deriv`]: the L1 scheme in `u`.
//! * [`riemann_hadamard_deriv`]: either the split form (endpoint term plus
//!   the L1 derivative) or `d/du` of the discrete `I^{1-α}` (direct).

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gamma::{gamma_unchecked, recip_gamma};
use crate::grid::{FracOrder, GridFunction, LogGrid};
use crate::sum::CompensatedSum;
use crate::weights::{HatWeights, SlopeWeights};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RiemannMethod {
    Split,
    Direct,
}

/// `I^α f` at every node.
pub fn hadamard_integral(f: &GridFunction, alpha: FracOrder) -> Result<GridFunction> {
    hadamard_integral_with(f, alpha, Exec::default())
}

pub fn hadamard_integral_with(f: &GridFunction, alpha: FracOrder, exec: Exec) -> Result<GridFunction> {
    integral_of_order(f, alpha.value(), exec)
}

/// Fractional integral of order `mu ∈ (0, 1)`.
///
/// A singular operand `g ~ c u^e` is split as `c u^e + r`: the power is
/// integrated in closed form and only the bounded remainder `r` (with
/// `r(u_1) = 0`, `r(0) := 0`) goes through product integration.
fn integral_of_order(f: &GridFunction, mu: f64, exec: Exec) -> Result<GridFunction> {
    let grid = f.grid().as_ref();
    let weights = HatWeights::new(grid, mu);
    let n = grid.len();
    let u = grid.u();
    let Some(e) = f.singular_exponent() else {
        let values = exec.map(n, |k| if k == 0 { 0.0 } else { integral_at(f.values(), mu, k, &weights) });
        return GridFunction::new(f.grid().clone(), values);
    };
    let c = f.values()[1] * u[1].powf(-e);
    let remainder: Vec<f64> = f
        .values()
        .iter()
        .zip(u)
        .enumerate()
        .map(|(k, (v, uk))| if k <= 1 { 0.0 } else { v - c * uk.powf(e) })
        .collect();
    let lift = c * gamma_unchecked(e + 1.0) * recip_gamma(e + 1.0 + mu);
    let exponent = e + mu;
    let mut values = exec.map(n, |k| {
        if k == 0 {
            0.0
        } else {
            lift * u[k].powf(exponent) + integral_at(&remainder, mu, k, &weights)
        }
    });
    if exponent.abs() < 1e-14 {
        values[0] = lift;
        GridFunction::new(f.grid().clone(), values)
    } else if exponent > 0.0 {
        GridFunction::new(f.grid().clone(), values)
    } else {
        values[0] = c.signum() * f64::INFINITY;
        GridFunction::singular(f.grid().clone(), values, exponent)
    }
}

fn integral_at(g: &[f64], mu: f64, k: usize, weights: &HatWeights<'_>) -> f64 {
    let mut acc = CompensatedSum::new();
    for j in 0..k {
        let (left, right) = weights.get(k, j);
        acc.add(left * g[j]);
        acc.add(right * g[j + 1]);
    }
    acc.value() / gamma_unchecked(mu)
}

/// `D_*^α f` at every node; the value at `t_0` is 0.
pub fn caputo_hadamard_deriv(f: &GridFunction, alpha: FracOrder) -> Result<GridFunction> {
    caputo_hadamard_deriv_with(f, alpha, Exec::default())
}

pub fn caputo_hadamard_deriv_with(f: &GridFunction, alpha: FracOrder, exec: Exec) -> Result<GridFunction> {
    if f.is_singular() {
        return Err(Error::SingularInput);
    }
    let grid = f.grid().as_ref();
    let weights = SlopeWeights::new(grid, alpha.value());
    let scale = 1.0 / gamma_unchecked(1.0 - alpha.value());
    let values = exec.map(grid.len(), |k| l1_sum(grid, f.values(), k, &weights) * scale);
    GridFunction::new(f.grid().clone(), values)
}

/// `D_*^α f(t_k)` at a single node.
pub fn caputo_hadamard_at(f: &GridFunction, alpha: FracOrder, k: usize) -> Result<f64> {
    if f.is_singular() {
        return Err(Error::SingularInput);
    }
    let grid = f.grid().as_ref();
    if k >= grid.len() {
        return Err(Error::InvalidGrid(format!("node {k} out of range")));
    }
    let weights = SlopeWeights::untabulated(grid, alpha.value());
    Ok(l1_sum(grid, f.values(), k, &weights) / gamma_unchecked(1.0 - alpha.value()))
}

/// `Σ_j b_{k,j} (g_{j+1} - g_j) / h_j`, the unscaled L1 memory sum.
pub(crate) fn l1_sum(grid: &LogGrid, g: &[f64], k: usize, weights: &SlopeWeights<'_>) -> f64 {
    let mut acc = CompensatedSum::new();
    for j in 0..k {
        let slope = (g[j + 1] - g[j]) / grid.step(j);
        acc.add(weights.get(k, j) * slope);
    }
    acc.value()
}

/// `D^α f` at every node. The value at `t_0` is excluded: it is the
/// limit `±∞` (or 0 when `f(a) = 0`) for the split method and NaN for
/// the direct method, and the result is flagged singular unless finite.
pub fn riemann_hadamard_deriv(f: &GridFunction, alpha: FracOrder, method: RiemannMethod) -> Result<GridFunction> {
    riemann_hadamard_deriv_with(f, alpha, method, Exec::default())
}

pub fn riemann_hadamard_deriv_with(
    f: &GridFunction,
    alpha: FracOrder,
    method: RiemannMethod,
    exec: Exec,
) -> Result<GridFunction> {
    let grid = f.grid().clone();
    if grid.intervals() < 3 {
        return Err(Error::InvalidGrid("Riemann–Hadamard derivative needs n >= 3".into()));
    }
    let a = alpha.value();
    match method {
        RiemannMethod::Split => {
            let caputo = caputo_hadamard_deriv_with(f, alpha, exec)?;
            let fa = f.values()[0];
            let scale = fa / gamma_unchecked(1.0 - a);
            let mut values = caputo.into_values();
            for (v, &u) in values.iter_mut().zip(grid.u()).skip(1) {
                *v += scale * u.powf(-a);
            }
            if fa == 0.0 {
                GridFunction::new(grid, values)
            } else {
                values[0] = fa.signum() * f64::INFINITY;
                GridFunction::singular(grid, values, -a)
            }
        }
        RiemannMethod::Direct => {
            let j = integral_of_order(f, 1.0 - a, exec)?;
            if !j.values().iter().all(|v| v.is_finite()) {
                return Err(Error::Unsupported(
                    "I^(1-alpha) f is unbounded at t = a; direct differencing needs finite values".into(),
                ));
            }
            let mut values = differentiate_in_u(&grid, j.values());
            values[0] = f64::NAN;
            GridFunction::singular(grid, values, -a)
        }
    }
}

/// `D^α f(t_k)` by the split form at a single node `k ≥ 1`.
pub fn riemann_hadamard_at(f: &GridFunction, alpha: FracOrder, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Unsupported("D^alpha at t = a is excluded".into()));
    }
    let caputo = caputo_hadamard_at(f, alpha, k)?;
    let a = alpha.value();
    let u = f.grid().u()[k];
    Ok(f.values()[0] * u.powf(-a) / gamma_unchecked(1.0 - a) + caputo)
}

/// Second-order `d/du` at nodes `1..=n`; node 0 is left as 0.
fn differentiate_in_u(grid: &LogGrid, j: &[f64]) -> Vec<f64> {
    let n = grid.intervals();
    let mut out = vec![0.0; n + 1];
    for k in 1..n {
        let hl = grid.step(k - 1);
        let hr = grid.step(k);
        out[k] = -hr / (hl * (hl + hr)) * j[k - 1] + (hr - hl) / (hl * hr) * j[k] + hl / (hr * (hl + hr)) * j[k + 1];
    }
    let h1 = grid.step(n - 1);
    let h2 = grid.step(n - 2);
    out[n] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * j[n] - (h1 + h2) / (h1 * h2) * j[n - 1] + h1 / (h2 * (h1 + h2)) * j[n - 2];
    out
}

/// Nodewise residual `I^α D^α f - f` for a bounded operand.
///
/// `D^α f` is formed by the split method; its endpoint term
/// `f(a) u^{-α} / Γ(1-α)` is integrated as a singular grid function so the
/// composition stays finite at `t_0`.
pub fn compose_check(f: &GridFunction, alpha: FracOrder) -> Result<GridFunction> {
    compose_check_with(f, alpha, Exec::default())
}

pub fn compose_check_with(f: &GridFunction, alpha: FracOrder, exec: Exec) -> Result<GridFunction> {
    if f.is_singular() {
        return Err(Error::SingularInput);
    }
    let grid = f.grid().clone();
    let a = alpha.value();
    let caputo = caputo_hadamard_deriv_with(f, alpha, exec)?;
    let mut composed = hadamard_integral_with(&caputo, alpha, exec)?.into_values();
    let fa = f.values()[0];
    if fa != 0.0 {
        let endpoint = GridFunction::log_power(grid.clone(), 1.0 / gamma_unchecked(1.0 - a), -a)?;
        let lifted = hadamard_integral_with(&endpoint, alpha, exec)?;
        for (c, l) in composed.iter_mut().zip(lifted.values()) {
            *c += fa * l;
        }
    }
    let residual = composed.iter().zip(f.values()).map(|(c, v)| c - v).collect();
    GridFunction::new(grid, residual)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};
    use std::sync::Arc;

    fn grid(t_end: f64, n: usize) -> Arc<LogGrid> {
        Arc::new(LogGrid::uniform(1.0, t_end, n).unwrap())
    }

    fn alpha(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn integral_of_one() {
        let f = GridFunction::from_fn(grid(E, 64), |_| 1.0).unwrap();
        let i = hadamard_integral(&f, alpha(0.5)).unwrap();
        let last = *i.values().last().unwrap();
        assert!((last - 1.128_379_167_095_512_6).abs() < 1e-13);
        assert_eq!(i.values()[0], 0.0);
    }

    #[test]
    fn zero_maps_to_zero() {
        let f = GridFunction::from_fn(grid(E, 16), |_| 0.0).unwrap();
        for v in hadamard_integral(&f, alpha(0.3)).unwrap().values() {
            assert_eq!(*v, 0.0);
        }
        for v in caputo_hadamard_deriv(&f, alpha(0.3)).unwrap().values() {
            assert_eq!(*v, 0.0);
        }
        for v in compose_check(&f, alpha(0.3)).unwrap().values() {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn caputo_of_constant_is_zero() {
        let f = GridFunction::from_fn(grid(E * E, 32), |_| 7.5).unwrap();
        let d = caputo_hadamard_deriv(&f, alpha(0.3)).unwrap();
        assert!(d.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn caputo_exact_for_log_affine() {
        let f = GridFunction::from_fn(grid(E * E, 40), |t| 3.0 * t.ln() - 1.0).unwrap();
        let d = caputo_hadamard_deriv(&f, alpha(0.5)).unwrap();
        let k = d.grid().nearest(E);
        let exact = 3.0 / gamma_unchecked(1.5);
        assert!((d.values()[k] - exact).abs() < 1e-13);
    }

    #[test]
    fn riemann_of_one_at_e() {
        let f = GridFunction::from_fn(grid(E, 10), |_| 1.0).unwrap();
        let d = riemann_hadamard_deriv(&f, alpha(0.5), RiemannMethod::Split).unwrap();
        assert!((d.values()[10] - 1.0 / PI.sqrt()).abs() < 1e-14);
        assert!(d.values()[0].is_infinite());
    }

    #[test]
    fn riemann_rejects_small_grids_and_singular_split() {
        let g = grid(E, 2);
        let f = GridFunction::from_fn(g, |_| 1.0).unwrap();
        assert!(riemann_hadamard_deriv(&f, alpha(0.5), RiemannMethod::Direct).is_err());
        let s = GridFunction::log_power(grid(E, 8), 1.0, -0.5).unwrap();
        assert_eq!(
            riemann_hadamard_deriv(&s, alpha(0.5), RiemannMethod::Split).unwrap_err(),
            Error::SingularInput
        );
        assert_eq!(caputo_hadamard_deriv(&s, alpha(0.5)).unwrap_err(), Error::SingularInput);
    }

    #[test]
    fn single_node_matches_full_evaluation() {
        let f = GridFunction::from_log_fn(grid(E * E, 50), |u| (2.0 * u).sin() + u * u).unwrap();
        let full = caputo_hadamard_deriv(&f, alpha(0.4)).unwrap();
        for k in [0, 1, 7, 50] {
            assert_eq!(caputo_hadamard_at(&f, alpha(0.4), k).unwrap(), full.values()[k]);
        }
    }
}
