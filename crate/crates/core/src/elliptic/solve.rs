use super::assemble::{assemble_with, AssembledSystem};
use super::problem::EllipticProblem;
use crate::diffusion::Monotonicity;
use crate::error::{Error, Result};
use crate::exec::Exec;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest system solved by dense LU on the normal path.
pub const DIRECT_LIMIT: usize = 4096;
/// Largest system the dense fallback will attempt when dominance fails.
pub const FALLBACK_LIMIT: usize = 8192;
pub const GS_TOLERANCE: f64 = 1e-10;
pub const GS_MAX_SWEEPS: usize = 20_000;
pub const PICARD_TOLERANCE: f64 = 1e-10;
pub const PICARD_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearMethod {
    DenseLu,
    GaussSeidel,
}

#[derive(Debug, Clone)]
pub struct EllipticField {
    pub problem: EllipticProblem,
    pub values: Vec<f64>,
    pub method: LinearMethod,
    pub dominance_margin: f64,
    pub picard_iterations: usize,
}

impl EllipticField {
    pub fn max_error(&self) -> Option<f64> {
        let exact = self.problem.exact.as_ref()?;
        let grid = self.problem.grid();
        Some(
            self.values
                .iter()
                .enumerate()
                .map(|(n, v)| (v - exact(&grid.point(n))).abs())
                .fold(0.0, f64::max),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &EllipticField) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// Initial guess for the nonlinear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EllipticGuess {
    Zero,
    /// `φ` evaluated at the interior nodes.
    BoundaryExtension,
}

fn boundary_values(problem: &EllipticProblem, system: &AssembledSystem) -> Vec<f64> {
    (0..system.grid.len())
        .map(|n| if system.grid.is_boundary(n) { (problem.boundary)(&system.grid.point(n)) } else { 0.0 })
        .collect()
}

/// Solve `(L_h + diag(shift)) u = rhs` at the interior, `u = φ` on the boundary.
fn linear_solve(system: &AssembledSystem, shift: &[f64], rhs: &[f64], values: &mut [f64]) -> Result<LinearMethod> {
    let m = system.unknowns.len();
    let mut col = vec![usize::MAX; system.grid.len()];
    for (r, &n) in system.unknowns.iter().enumerate() {
        col[n] = r;
    }
    let mut b: Vec<f64> = rhs.to_vec();
    for (r, row) in system.rows.iter().enumerate() {
        for &(n, c) in row {
            if col[n] == usize::MAX {
                b[r] -= c * values[n];
            }
        }
    }
    let dominant = system.dominance_margin > 0.0;
    if m <= DIRECT_LIMIT || (!dominant && m <= FALLBACK_LIMIT) {
        let mut a = DMatrix::<f64>::zeros(m, m);
        for (r, row) in system.rows.iter().enumerate() {
            for &(n, c) in row {
                if col[n] != usize::MAX {
                    a[(r, col[n])] += c;
                }
            }
            a[(r, r)] += shift[r];
        }
        let x = a.lu().solve(&DVector::from_vec(b)).ok_or(Error::SingularSystem)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        for (r, &n) in system.unknowns.iter().enumerate() {
            values[n] = x[r];
        }
        return Ok(LinearMethod::DenseLu);
    }
    if !dominant {
        return Err(Error::Unsupported(format!(
            "{m} unknowns without diagonal dominance exceeds the dense fallback limit"
        )));
    }
    gauss_seidel(system, shift, &b, &col, values)?;
    Ok(LinearMethod::GaussSeidel)
}

fn gauss_seidel(system: &AssembledSystem, shift: &[f64], b: &[f64], col: &[usize], values: &mut [f64]) -> Result<()> {
    let residual = |values: &[f64]| {
        system
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let ax: f64 = row.iter().filter(|e| col[e.0] != usize::MAX).map(|&(n, c)| c * values[n]).sum::<f64>()
                    + shift[r] * values[system.unknowns[r]];
                (b[r] - ax).abs()
            })
            .fold(0.0, f64::max)
    };
    let scale = b.iter().map(|v| v.abs()).fold(residual(values), f64::max);
    if scale == 0.0 {
        return Ok(());
    }
    let mut history = Vec::new();
    for sweep in 1..=GS_MAX_SWEEPS {
        for (r, row) in system.rows.iter().enumerate() {
            let node = system.unknowns[r];
            let mut diag = shift[r];
            let mut acc = b[r];
            for &(n, c) in row {
                if n == node {
                    diag += c;
                } else if col[n] != usize::MAX {
                    acc -= c * values[n];
                }
            }
            values[node] = acc / diag;
        }
        let res = residual(values) / scale;
        if res <= GS_TOLERANCE {
            return Ok(());
        }
        if sweep % 100 == 0 {
            history.push(res);
        }
    }
    Err(Error::NoConvergence {
        method: "gauss-seidel",
        iterations: GS_MAX_SWEEPS,
        last: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

/// Linear problem: one assembled solve.
pub fn solve_elliptic(problem: &EllipticProblem) -> Result<EllipticField> {
    solve_elliptic_with(problem, Exec::default())
}

pub fn solve_elliptic_with(problem: &EllipticProblem, exec: Exec) -> Result<EllipticField> {
    if !problem.source.is_linear() {
        return Err(Error::InvalidProblem("solve_elliptic needs a linear source".into()));
    }
    let system = assemble_with(problem, exec)?;
    let mut values = boundary_values(problem, &system);
    let shift = vec![0.0; system.unknowns.len()];
    let method = linear_solve(&system, &shift, &system.source, &mut values)?;
    Ok(EllipticField {
        problem: problem.clone(),
        values,
        method,
        dominance_margin: system.dominance_margin,
        picard_iterations: 1,
    })
}

/// `F(u, x)`: Picard on `(L_h - F_u) u = F(u_g) - F_u u_g` about the iterate.
pub fn solve_nonlinear_elliptic(problem: &EllipticProblem, guess: EllipticGuess) -> Result<EllipticField> {
    solve_nonlinear_elliptic_with(problem, guess, Exec::default())
}

pub fn solve_nonlinear_elliptic_with(problem: &EllipticProblem, guess: EllipticGuess, exec: Exec) -> Result<EllipticField> {
    let system = assemble_with(problem, exec)?;
    let grid = &system.grid;
    let points: Vec<Vec<f64>> = (0..grid.len()).map(|n| grid.point(n)).collect();
    let mut values = boundary_values(problem, &system);
    if guess == EllipticGuess::BoundaryExtension {
        for &n in &system.unknowns {
            values[n] = (problem.boundary)(&points[n]);
        }
    }
    let mut history = Vec::new();
    let mut damping = 1.0;
    for it in 1..=PICARD_MAX_ITERATIONS {
        let mut shift = Vec::with_capacity(system.unknowns.len());
        let mut rhs = Vec::with_capacity(system.unknowns.len());
        for &n in &system.unknowns {
            let (f, fu) = (problem.source.eval(values[n], &points[n]), problem.source.du(values[n], &points[n]));
            if problem.monotonicity == Monotonicity::NonincreasingInU && fu > 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "source flagged nonincreasing has dF/du = {fu} at u = {}",
                    values[n]
                )));
            }
            shift.push(-fu);
            rhs.push(f - fu * values[n]);
        }
        let mut next = values.clone();
        let method = linear_solve(&system, &shift, &rhs, &mut next)?;
        let diff = next.iter().zip(&values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if history.last().is_some_and(|&last| diff >= last) {
            damping *= crate::diffusion::solve::PICARD_DAMPING;
        }
        history.push(diff);
        if !diff.is_finite() {
            break;
        }
        for (v, nv) in values.iter_mut().zip(&next) {
            *v += damping * (nv - *v);
        }
        if diff <= PICARD_TOLERANCE {
            return Ok(EllipticField {
                problem: problem.clone(),
                values,
                method,
                dominance_margin: system.dominance_margin,
                picard_iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        method: "picard",
        iterations: history.len(),
        last: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}
