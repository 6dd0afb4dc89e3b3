//! Fractional orders, logarithmic grids and sampled functions.
//!
//! All Hadamard operators are evaluated in the coordinate `u = log(t/a)`,
//! where they reduce to the Riemann–Liouville / Caputo operators. A
//! [`LogGrid`] stores both coordinates.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Fractional order `alpha`, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The order `1 - alpha`.
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FracOrder> for f64 {
    fn from(a: FracOrder) -> f64 {
        a.0
    }
}

/// Nodes `a = t_0 < … < t_n = T` with `log(t_i/a) = (i/n)^r log(T/a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    a: f64,
    t_end: f64,
    grading: f64,
    u: Vec<f64>,
    t: Vec<f64>,
}

impl LogGrid {
    pub fn uniform(a: f64, t_end: f64, n: usize) -> Result<Self> {
        Self::graded(a, t_end, n, 1.0)
    }

    pub fn graded(a: f64, t_end: f64, n: usize, grading: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidGrid(format!("left endpoint must be positive, got {a}")));
        }
        if !(t_end > a && t_end.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "right endpoint {t_end} must exceed left endpoint {a}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 intervals, got {n}")));
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return Err(Error::InvalidGrid(format!("grading must be >= 1, got {grading}")));
        }
        let span = (t_end / a).ln();
        let nf = n as f64;
        let mut u: Vec<f64> = (0..=n)
            .map(|i| {
                if grading == 1.0 {
                    i as f64 * span / nf
                } else {
                    (i as f64 / nf).powf(grading) * span
                }
            })
            .collect();
        u[n] = span;
        let mut t: Vec<f64> = u.iter().map(|&ui| a * ui.exp()).collect();
        t[0] = a;
        t[n] = t_end;
        if u.windows(2).any(|w| w[1] <= w[0]) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("nodes are not strictly increasing".into()));
        }
        Ok(Self {
            a,
            t_end,
            grading,
            u,
            t,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Number of intervals `n`.
    pub fn intervals(&self) -> usize {
        self.u.len() - 1
    }

    /// Number of nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// Log coordinates `u_i = log(t_i / a)`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `log(T/a)`.
    pub fn span(&self) -> f64 {
        self.u[self.u.len() - 1]
    }

    pub fn is_uniform(&self) -> bool {
        self.grading == 1.0
    }

    /// Width of interval `j` in u.
    #[inline]
    pub fn step(&self, j: usize) -> f64 {
        if self.is_uniform() {
            self.span() / self.intervals() as f64
        } else {
            self.u[j + 1] - self.u[j]
        }
    }

    /// `u_k - u_j`, computed so that uniform grids give exact multiples of the step.
    #[inline]
    pub(crate) fn gap(&self, k: usize, j: usize) -> f64 {
        if self.is_uniform() {
            (k - j) as f64 * self.step(0)
        } else {
            self.u[k] - self.u[j]
        }
    }

    pub fn max_step(&self) -> f64 {
        (0..self.intervals()).map(|j| self.step(j)).fold(0.0, f64::max)
    }

    /// Index of the node closest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let u = (t / self.a).ln();
        let mut best = 0;
        for (i, &ui) in self.u.iter().enumerate() {
            if (ui - u).abs() < (self.u[best] - u).abs() {
                best = i;
            }
        }
        best
    }
}

/// Values sampled on a [`LogGrid`].
///
/// A function may be flagged singular at `t = a`, where it behaves like
/// `c·u^e` with `e > -1`; only its value at `t_0` may then be non-finite.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<LogGrid>,
    values: Vec<f64>,
    singular_exponent: Option<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<LogGrid>, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, &values)?;
        check_finite(&values, 0)?;
        Ok(Self {
            grid,
            values,
            singular_exponent: None,
        })
    }

    /// A function behaving like `c·(log t/a)^exponent` near `a`.
    pub fn singular(grid: Arc<LogGrid>, values: Vec<f64>, exponent: f64) -> Result<Self> {
        check_len(&grid, &values)?;
        if !(exponent > -1.0 && exponent.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "singular exponent must exceed -1, got {exponent}"
            )));
        }
        check_finite(&values, 1)?;
        Ok(Self {
            grid,
            values,
            singular_exponent: Some(exponent),
        })
    }

    pub fn from_fn(grid: Arc<LogGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.t().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    /// Sample `g(u)` with `u = log(t/a)`.
    pub fn from_log_fn(grid: Arc<LogGrid>, g: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.u().iter().map(|&u| g(u)).collect();
        Self::new(grid, values)
    }

    /// Sample `c·u^exponent`, flagged singular when `exponent < 0`.
    pub fn log_power(grid: Arc<LogGrid>, coeff: f64, exponent: f64) -> Result<Self> {
        let values: Vec<f64> = grid.u().iter().map(|&u| coeff * u.powf(exponent)).collect();
        if exponent < 0.0 {
            Self::singular(grid, values, exponent)
        } else {
            Self::new(grid, values)
        }
    }

    pub fn grid(&self) -> &Arc<LogGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_singular(&self) -> bool {
        self.singular_exponent.is_some()
    }

    pub fn singular_exponent(&self) -> Option<f64> {
        self.singular_exponent
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// `ca·self + cb·other` on a shared grid.
    pub fn combine(&self, ca: f64, other: &GridFunction, cb: f64) -> Result<GridFunction> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| ca * x + cb * y)
            .collect();
        match (self.singular_exponent, other.singular_exponent) {
            (None, None) => GridFunction::new(self.grid.clone(), values),
            (Some(e), None) | (None, Some(e)) => GridFunction::singular(self.grid.clone(), values, e),
            (Some(e1), Some(e2)) => GridFunction::singular(self.grid.clone(), values, e1.min(e2)),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().skip(usize::from(self.is_singular())).fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_len(grid: &LogGrid, values: &[f64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "expected {} values, got {}",
            grid.len(),
            values.len()
        )));
    }
    Ok(())
}

fn check_finite(values: &[f64], from: usize) -> Result<()> {
    match values.iter().enumerate().skip(from).find(|(_, v)| !v.is_finite()) {
        Some((node, &value)) => Err(Error::NonFinite { node, value }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_bounds() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert_eq!(FracOrder::new(0.3).unwrap().complement().value(), 0.7);
        let parsed: std::result::Result<FracOrder, _> = serde_json::from_str("1.5");
        assert!(parsed.is_err());
    }

    #[test]
    fn endpoints_are_exact() {
        let g = LogGrid::graded(1.0, std::f64::consts::E.powi(2), 37, 2.0).unwrap();
        assert_eq!(g.t()[0], 1.0);
        assert_eq!(g.t()[37], std::f64::consts::E.powi(2));
        assert_eq!(g.len(), 38);
        assert!(g.t().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn uniform_in_log() {
        let g = LogGrid::uniform(2.0, 2.0 * 3f64.exp(), 6).unwrap();
        for (i, &u) in g.u().iter().enumerate() {
            assert!((u - 0.5 * i as f64).abs() < 1e-15);
        }
        assert!((g.step(3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(LogGrid::uniform(1.0, 2.0, 1).is_err());
        assert!(LogGrid::uniform(0.0, 2.0, 4).is_err());
        assert!(LogGrid::uniform(2.0, 1.0, 4).is_err());
        assert!(LogGrid::graded(1.0, 2.0, 4, 0.5).is_err());
    }

    #[test]
    fn singular_flag_only_allows_first_node() {
        let g = Arc::new(LogGrid::uniform(1.0, 3.0, 4).unwrap());
        let f = GridFunction::log_power(g.clone(), 1.0, -0.5).unwrap();
        assert!(f.is_singular());
        assert!(f.values()[0].is_infinite());
        let mut bad = f.values().to_vec();
        bad[2] = f64::NAN;
        assert!(GridFunction::singular(g.clone(), bad.clone(), -0.5).is_err());
        bad[2] = 1.0;
        assert!(GridFunction::new(g, bad).is_err());
    }
}
