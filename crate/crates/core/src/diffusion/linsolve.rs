//! Dirichlet solves of `d_i x_i - κ Δ_h x_i = r_i` on the interior nodes.

use super::space::SpaceGrid;
use crate::error::{Error, Result};

pub const SOR_TOLERANCE: f64 = 1e-10;
pub const SOR_MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub sweeps: usize,
    pub residual: f64,
}

/// `x` carries the boundary values and the warm start; `diag` and `rhs` are
/// read at interior nodes only.
pub fn solve_dirichlet(grid: &SpaceGrid, diag: &[f64], kappa: f64, rhs: &[f64], x: &mut [f64]) -> Result<SolveStats> {
    match grid.dims() {
        1 => {
            thomas(grid, diag, kappa, rhs, x);
            Ok(SolveStats::default())
        }
        _ => red_black_sor(grid, diag, kappa, rhs, x),
    }
}

fn thomas(grid: &SpaceGrid, diag: &[f64], kappa: f64, rhs: &[f64], x: &mut [f64]) {
    let n = grid.cells()[0];
    let off = -kappa / grid.steps()[0].powi(2);
    let m = n - 1;
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    for k in 0..m {
        let node = k + 1;
        let b = diag[node] - 2.0 * off;
        let mut r = rhs[node];
        if k == 0 {
            r -= off * x[0];
        }
        if k == m - 1 {
            r -= off * x[n];
        }
        if k == 0 {
            c[k] = off / b;
            d[k] = r / b;
        } else {
            let denom = b - off * c[k - 1];
            c[k] = off / denom;
            d[k] = (r - off * d[k - 1]) / denom;
        }
    }
    x[m] = d[m - 1];
    for k in (0..m - 1).rev() {
        x[k + 1] = d[k] - c[k] * x[k + 2];
    }
}

fn red_black_sor(grid: &SpaceGrid, diag: &[f64], kappa: f64, rhs: &[f64], x: &mut [f64]) -> Result<SolveStats> {
    let [nx, ny] = grid.cells();
    let [hx, hy] = grid.steps();
    let (ax, ay) = (kappa / (hx * hx), kappa / (hy * hy));
    let s = nx + 1;
    let interior: Vec<usize> = grid.interior().collect();
    let min_diag = interior.iter().map(|&n| diag[n]).fold(f64::INFINITY, f64::min);
    let rho = (2.0 * ax * (std::f64::consts::PI / nx as f64).cos() + 2.0 * ay * (std::f64::consts::PI / ny as f64).cos())
        / (min_diag + 2.0 * ax + 2.0 * ay);
    let omega = 2.0 / (1.0 + (1.0 - rho * rho).max(0.0).sqrt());

    let residual = |x: &[f64]| {
        interior
            .iter()
            .map(|&n| {
                let ax_x = (diag[n] + 2.0 * ax + 2.0 * ay) * x[n] - ax * (x[n - 1] + x[n + 1]) - ay * (x[n - s] + x[n + s]);
                (rhs[n] - ax_x).abs()
            })
            .fold(0.0, f64::max)
    };
    let scale = interior.iter().map(|&n| rhs[n].abs()).fold(residual(x), f64::max);
    if scale == 0.0 {
        return Ok(SolveStats::default());
    }
    let mut history = Vec::new();
    for sweep in 1..=SOR_MAX_SWEEPS {
        for colour in 0..2 {
            for j in 1..ny {
                let start = 1 + (j + colour + 1) % 2;
                for i in (start..nx).step_by(2) {
                    let n = i + s * j;
                    let gs = (rhs[n] + ax * (x[n - 1] + x[n + 1]) + ay * (x[n - s] + x[n + s])) / (diag[n] + 2.0 * ax + 2.0 * ay);
                    x[n] += omega * (gs - x[n]);
                }
            }
        }
        let r = residual(x) / scale;
        if r <= SOR_TOLERANCE {
            return Ok(SolveStats { sweeps: sweep, residual: r });
        }
        if sweep % 100 == 0 {
            history.push(r);
        }
    }
    Err(Error::NoConvergence {
        method: "red-black SOR",
        iterations: SOR_MAX_SWEEPS,
        last: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}
