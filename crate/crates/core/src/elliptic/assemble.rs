use super::problem::{EllipticProblem, LogCube};
use crate::error::Result;
use crate::exec::Exec;
use crate::gamma::gamma_unchecked;
use crate::grid::LogGrid;
use crate::weights::SlopeWeights;
use std::collections::BTreeMap;

/// One row per interior node: `Σ coef · u[node] = rhs`, with `coef` keyed by
/// global node (boundary nodes included).
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub grid: LogCube,
    /// Interior nodes in row order.
    pub unknowns: Vec<usize>,
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Source values at the interior nodes (linear problems; zero otherwise).
    pub source: Vec<f64>,
    /// `min_i (|a_ii| - Σ_{j≠i} |a_ij|) / |a_ii|` over unknown columns.
    pub dominance_margin: f64,
}

impl AssembledSystem {
    /// `L_h u - F` at the interior nodes for a full nodal field.
    pub fn residual(&self, values: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.source)
            .map(|(row, f)| row.iter().map(|&(n, c)| c * values[n]).sum::<f64>() - f)
            .collect()
    }

    /// Coefficient of the row's own node.
    pub fn diagonal(&self, row: usize) -> f64 {
        let node = self.unknowns[row];
        self.rows[row].iter().find(|&&(n, _)| n == node).map_or(0.0, |&(_, c)| c)
    }
}

/// Discrete `D^α` along `axis` at `node`: split L1 form from the `x_j = 1` face.
pub(crate) fn fractional_at(grid: &LogCube, weights: &SlopeWeights<'_>, alpha: f64, axis: usize, node: usize, values: &[f64]) -> f64 {
    let coefs = fractional_coefficients(grid, weights, alpha, axis, node);
    coefs.iter().map(|&(n, c)| c * values[n]).sum()
}

fn fractional_coefficients(grid: &LogCube, weights: &SlopeWeights<'_>, alpha: f64, axis: usize, node: usize) -> Vec<(usize, f64)> {
    let i = grid.index_along(node, axis);
    let s = grid.stride(axis);
    let base = node - i * s;
    let h = grid.steps[axis];
    let g = 1.0 / gamma_unchecked(1.0 - alpha);
    let mut out = vec![(base, g * (i as f64 * h).powf(-alpha))];
    for m in 0..i {
        let w = g * weights.get(i, m) / h;
        out.push((base + (m + 1) * s, w));
        out.push((base + m * s, -w));
    }
    out
}

pub fn assemble(problem: &EllipticProblem) -> Result<AssembledSystem> {
    assemble_with(problem, Exec::default())
}

pub fn assemble_with(problem: &EllipticProblem, exec: Exec) -> Result<AssembledSystem> {
    problem.validate()?;
    let grid = problem.grid();
    let alpha = problem.alpha.value();
    let axes: Vec<LogGrid> = problem
        .extents
        .iter()
        .zip(&problem.cells)
        .map(|(&h, &n)| LogGrid::uniform(1.0, h, n))
        .collect::<Result<_>>()?;
    let weights: Vec<SlopeWeights<'_>> = axes.iter().map(|g| SlopeWeights::new(g, alpha)).collect();
    let unknowns: Vec<usize> = grid.interior().collect();

    let rows = exec.map(unknowns.len(), |r| {
        let node = unknowns[r];
        let x = grid.point(node);
        let xi = grid.xi(node);
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        let mut add = |n: usize, c: f64| *row.entry(n).or_insert(0.0) += c;
        for j in 0..grid.dims() {
            let h = grid.steps[j];
            let s = grid.stride(j);
            let e1 = (-xi[j]).exp();
            let e2 = e1 * e1;
            let second = e2 / (h * h);
            let first = (problem.a[j](&x) * e1 - e2) / (2.0 * h);
            add(node + s, second + first);
            add(node - s, second - first);
            add(node, -2.0 * second);
            let b = problem.b[j](&x);
            if b != 0.0 {
                for (n, c) in fractional_coefficients(&grid, &weights[j], alpha, j, node) {
                    add(n, b * c);
                }
            }
        }
        add(node, (problem.c)(&x));
        row.into_iter().collect::<Vec<_>>()
    });
    let source = unknowns.iter().map(|&n| problem.source.eval(0.0, &grid.point(n))).collect();
    let margin = dominance(&grid, &unknowns, &rows);
    Ok(AssembledSystem {
        grid,
        unknowns,
        rows,
        source,
        dominance_margin: margin,
    })
}

fn dominance(grid: &LogCube, unknowns: &[usize], rows: &[Vec<(usize, f64)>]) -> f64 {
    unknowns
        .iter()
        .zip(rows)
        .map(|(&node, row)| {
            let mut diag = 0.0;
            let mut off = 0.0;
            for &(n, c) in row {
                if n == node {
                    diag = c.abs();
                } else if !grid.is_boundary(n) {
                    off += c.abs();
                }
            }
            (diag - off) / diag
        })
        .fold(f64::INFINITY, f64::min)
}
