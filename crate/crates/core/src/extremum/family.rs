use crate::closed_form::TrigTerm;
use crate::error::Result;
use crate::grid::{GridFunction, LogGrid};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    LogPolynomial,
    LogTrig,
    Mixed,
}

/// Seeded family of smooth test functions of `u = log(t/a)`.
///
/// Polynomials are `Σ c_k (u/U)^k` with `U = log(T/a)`, trigonometric
/// parts `Σ a_m sin(ω_m u + φ_m)`; all are C^∞ in `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFamily {
    pub seed: u64,
    pub kind: FamilyKind,
    pub max_degree: usize,
    pub max_terms: usize,
    pub max_freq: f64,
    pub c_max: f64,
}

impl SampledFamily {
    pub fn new(seed: u64, kind: FamilyKind) -> Self {
        Self {
            seed,
            kind,
            max_degree: 6,
            max_terms: 4,
            max_freq: 6.0,
            c_max: 1.0,
        }
    }

    /// Member `index` of the family; identical inputs give identical bits.
    pub fn member(&self, index: u64) -> SampledFunction {
        let mut rng = SplitMix64::stream(self.seed, index);
        let mut poly = Vec::new();
        let mut trig = Vec::new();
        if matches!(self.kind, FamilyKind::LogPolynomial | FamilyKind::Mixed) {
            let degree = rng.int_in(1, self.max_degree.max(1));
            poly = (0..=degree).map(|_| rng.uniform(-self.c_max, self.c_max)).collect();
        }
        if matches!(self.kind, FamilyKind::LogTrig | FamilyKind::Mixed) {
            let terms = rng.int_in(1, self.max_terms.max(1));
            trig = (0..terms)
                .map(|_| TrigTerm {
                    freq: rng.uniform(0.25, self.max_freq),
                    amp: rng.uniform(-self.c_max, self.c_max),
                    phase: rng.uniform(0.0, 2.0 * PI),
                })
                .collect();
        }
        SampledFunction { index, poly, trig }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub index: u64,
    /// Coefficients in the normalised variable `u/U`.
    pub poly: Vec<f64>,
    pub trig: Vec<TrigTerm>,
}

impl SampledFunction {
    pub fn eval(&self, u: f64, span: f64) -> f64 {
        let x = u / span;
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
        p + self.trig.iter().map(|t| t.amp * (t.freq * u + t.phase).sin()).sum::<f64>()
    }

    pub fn sample(&self, grid: Arc<LogGrid>) -> Result<GridFunction> {
        let span = grid.span();
        GridFunction::from_log_fn(grid, |u| self.eval(u, span))
    }
}
