use super::space::SpaceGrid;
use crate::error::{Error, Result};
use crate::grid::{FracOrder, LogGrid};
use std::fmt;
use std::sync::Arc;

pub type SpaceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;
/// `(x, t, u) -> value`.
pub type StateFn = Arc<dyn Fn(&[f64], f64, f64) -> f64 + Send + Sync>;

/// Corner mismatch allowed between `φ` and `ψ(·, a)` on the boundary.
pub const COMPATIBILITY_TOL: f64 = 1e-12;

#[derive(Clone)]
pub enum Source {
    Linear(SpaceTimeFn),
    /// `F(x, t, u)` with its partial derivative in `u`.
    Nonlinear { f: StateFn, df_du: StateFn },
}

impl Source {
    pub fn zero() -> Self {
        Source::Linear(Arc::new(|_, _| 0.0))
    }

    pub fn eval(&self, x: &[f64], t: f64, u: f64) -> f64 {
        match self {
            Source::Linear(f) => f(x, t),
            Source::Nonlinear { f, .. } => f(x, t, u),
        }
    }

    pub fn du(&self, x: &[f64], t: f64, u: f64) -> f64 {
        match self {
            Source::Linear(_) => 0.0,
            Source::Nonlinear { df_du, .. } => df_du(x, t, u),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Source::Linear(_))
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_linear() { "Source::Linear" } else { "Source::Nonlinear" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    None,
    NonincreasingInU,
}

/// Initial guess for the per-layer Picard iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PicardGuess {
    PreviousLayer,
    Constant(f64),
}

/// `D_*^α u = ν Δu + F` (or the generalized form) on `G × (a, T]` with
/// `u(x, a) = φ(x)` and `u = ψ` on `∂G`.
#[derive(Clone)]
pub struct DiffusionProblem {
    pub name: String,
    pub alpha: FracOrder,
    pub nu: f64,
    pub space: SpaceGrid,
    pub time: Arc<LogGrid>,
    pub source: Source,
    pub initial: SpaceFn,
    pub boundary: SpaceTimeFn,
    pub monotonicity: Monotonicity,
    /// Manufactured solution, when known.
    pub exact: Option<SpaceTimeFn>,
}

impl fmt::Debug for DiffusionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffusionProblem")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("nu", &self.nu)
            .field("space", &self.space)
            .field("time_intervals", &self.time.intervals())
            .field("source", &self.source)
            .field("monotonicity", &self.monotonicity)
            .finish()
    }
}

impl DiffusionProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidProblem(format!("nu must be positive, got {}", self.nu)));
        }
        self.space.validate()?;
        if self.monotonicity == Monotonicity::NonincreasingInU && self.source.is_linear() {
            return Err(Error::InvalidProblem("monotonicity flag set on a linear source".into()));
        }
        let a = self.time.a();
        let mut worst: f64 = 0.0;
        for n in self.space.boundary() {
            let x = self.space.point(n);
            let (phi, psi) = ((self.initial)(&x), (self.boundary)(&x, a));
            if !phi.is_finite() || !psi.is_finite() {
                return Err(Error::NonFinite { node: n, value: phi + psi });
            }
            worst = worst.max((phi - psi).abs());
        }
        if worst > COMPATIBILITY_TOL {
            return Err(Error::Incompatible(format!(
                "initial and boundary data differ by {worst:e} on the boundary at t = a"
            )));
        }
        Ok(())
    }

    /// `φ` inside, `ψ(·, a)` on the boundary.
    pub fn initial_layer(&self) -> Vec<f64> {
        let a = self.time.a();
        (0..self.space.len())
            .map(|n| {
                let x = self.space.point(n);
                if self.space.is_boundary(n) {
                    (self.boundary)(&x, a)
                } else {
                    (self.initial)(&x)
                }
            })
            .collect()
    }

    pub fn with_time(&self, time: Arc<LogGrid>) -> Self {
        Self { time, ..self.clone() }
    }

    pub fn with_space(&self, space: SpaceGrid) -> Self {
        Self { space, ..self.clone() }
    }

    pub fn with_initial(&self, initial: SpaceFn) -> Self {
        Self {
            initial,
            exact: None,
            ..self.clone()
        }
    }
}
