use crate::diffusion::Monotonicity;
use crate::error::{Error, Result};
use crate::grid::FracOrder;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// `(u, x) -> value`.
pub type StateFieldFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum EllipticSource {
    Linear(FieldFn),
    Nonlinear { f: StateFieldFn, df_du: StateFieldFn },
}

impl EllipticSource {
    pub fn eval(&self, u: f64, x: &[f64]) -> f64 {
        match self {
            EllipticSource::Linear(f) => f(x),
            EllipticSource::Nonlinear { f, .. } => f(u, x),
        }
    }

    pub fn du(&self, u: f64, x: &[f64]) -> f64 {
        match self {
            EllipticSource::Linear(_) => 0.0,
            EllipticSource::Nonlinear { df_du, .. } => df_du(u, x),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, EllipticSource::Linear(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BSign {
    Negative,
    Positive,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CSign {
    Nonpositive,
    General,
}

/// `Δu + Σ a_j ∂_j u + Σ b_j D^α_{x_j} u + c u = F` on `Π (1, h_j)` with
/// `u = φ` on the boundary. `D^α_{x_j}` is the Riemann–Hadamard derivative
/// along axis `j` from the face `x_j = 1`.
#[derive(Clone)]
pub struct EllipticProblem {
    pub name: String,
    pub alpha: FracOrder,
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
    pub a: Vec<FieldFn>,
    pub b: Vec<FieldFn>,
    pub c: FieldFn,
    pub source: EllipticSource,
    pub boundary: FieldFn,
    pub b_sign: BSign,
    pub c_sign: CSign,
    pub monotonicity: Monotonicity,
    pub exact: Option<FieldFn>,
}

impl fmt::Debug for EllipticProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EllipticProblem")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("extents", &self.extents)
            .field("cells", &self.cells)
            .field("b_sign", &self.b_sign)
            .field("c_sign", &self.c_sign)
            .field("monotonicity", &self.monotonicity)
            .finish()
    }
}

/// Node layout of a uniform `ξ = log x` grid, axis 0 fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct LogCube {
    pub cells: Vec<usize>,
    pub steps: Vec<f64>,
    strides: Vec<usize>,
}

impl LogCube {
    pub fn new(extents: &[f64], cells: &[usize]) -> Self {
        let steps = extents.iter().zip(cells).map(|(h, &n)| h.ln() / n as f64).collect();
        let mut strides = Vec::with_capacity(cells.len());
        let mut s = 1;
        for &n in cells {
            strides.push(s);
            s *= n + 1;
        }
        Self {
            cells: cells.to_vec(),
            steps,
            strides,
        }
    }

    pub fn dims(&self) -> usize {
        self.cells.len()
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(|n| n + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn index_along(&self, node: usize, axis: usize) -> usize {
        (node / self.strides[axis]) % (self.cells[axis] + 1)
    }

    pub fn xi(&self, node: usize) -> Vec<f64> {
        (0..self.dims()).map(|j| self.index_along(node, j) as f64 * self.steps[j]).collect()
    }

    /// Physical coordinates `x_j = e^{ξ_j}`.
    pub fn point(&self, node: usize) -> Vec<f64> {
        self.xi(node).into_iter().map(f64::exp).collect()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        (0..self.dims()).any(|j| {
            let i = self.index_along(node, j);
            i == 0 || i == self.cells[j]
        })
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&n| !self.is_boundary(n))
    }

    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&n| self.is_boundary(n))
    }
}

impl EllipticProblem {
    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    pub fn grid(&self) -> LogCube {
        LogCube::new(&self.extents, &self.cells)
    }

    /// Structural checks plus pointwise validation of the sign metadata.
    pub fn validate(&self) -> Result<()> {
        let n = self.dims();
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidProblem(format!("dimension must be 1, 2 or 3, got {n}")));
        }
        if self.cells.len() != n || self.a.len() != n || self.b.len() != n {
            return Err(Error::InvalidProblem("per-axis data must match the dimension".into()));
        }
        if self.extents.iter().any(|&h| !(h > 1.0 && h.is_finite())) {
            return Err(Error::InvalidProblem(format!("extents must exceed 1, got {:?}", self.extents)));
        }
        if self.cells.iter().any(|&c| c < 2) {
            return Err(Error::InvalidGrid("each axis needs at least 2 cells".into()));
        }
        if self.monotonicity == Monotonicity::NonincreasingInU && self.source.is_linear() {
            return Err(Error::InvalidProblem("monotonicity flag set on a linear source".into()));
        }
        let grid = self.grid();
        for node in 0..grid.len() {
            let x = grid.point(node);
            for (j, b) in self.b.iter().enumerate() {
                let v = b(&x);
                let ok = match self.b_sign {
                    BSign::Negative => v < 0.0,
                    BSign::Positive => v > 0.0,
                    BSign::Mixed => v.is_finite(),
                };
                if !ok {
                    return Err(Error::InvalidProblem(format!(
                        "b_{j} = {v} at {x:?} contradicts sign metadata {:?}",
                        self.b_sign
                    )));
                }
            }
            let c = (self.c)(&x);
            if !c.is_finite() || (self.c_sign == CSign::Nonpositive && c > 0.0) {
                return Err(Error::InvalidProblem(format!("c = {c} at {x:?} contradicts sign metadata {:?}", self.c_sign)));
            }
        }
        Ok(())
    }
}
