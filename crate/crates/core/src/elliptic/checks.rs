use super::assemble::fractional_at;
use super::problem::{BSign, CSign, LogCube};
use super::solve::EllipticField;
use crate::diffusion::Side;
use crate::grid::LogGrid;
use crate::weights::SlopeWeights;
use serde::{Deserialize, Serialize};

pub const TOLERANCE_CONSTANT: f64 = 10.0;

/// `C (h^{2-α} + h²) · max(1, |φ|, |F|)` with `h` the largest `ξ`-step.
pub fn scheme_tolerance(field: &EllipticField) -> f64 {
    let p = &field.problem;
    let grid = p.grid();
    let h = grid.steps.iter().copied().fold(0.0, f64::max);
    let alpha = p.alpha.value();
    let mut s: f64 = 1.0;
    for n in 0..grid.len() {
        let x = grid.point(n);
        if grid.is_boundary(n) {
            s = s.max(field.values[n].abs());
        } else {
            s = s.max(p.source.eval(field.values[n], &x).abs());
        }
    }
    TOLERANCE_CONSTANT * (h.powf(2.0 - alpha) + h * h) * s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakSide {
    pub side: Side,
    /// Whether the sign hypotheses for this side hold (`b < 0`, `c ≤ 0` and
    /// `F ≥ 0` for the upper side, `F ≤ 0` for the lower side).
    pub hypotheses_met: bool,
    /// `max(max_∂ u, 0)` or `min(min_∂ u, 0)`.
    pub bound: f64,
    pub extreme: f64,
    pub node: usize,
    /// Distance past the bound; negative means slack.
    pub violation: f64,
    /// The extreme is strictly past zero (beyond tol) at an interior node.
    pub interior_extremum: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakReport {
    pub tol: f64,
    pub upper: Option<WeakSide>,
    pub lower: Option<WeakSide>,
}

impl WeakReport {
    pub fn passed(&self) -> bool {
        self.upper.is_none_or(|s| s.passed) && self.lower.is_none_or(|s| s.passed)
    }
}

fn source_range(field: &EllipticField) -> (f64, f64) {
    let grid = field.problem.grid();
    grid.interior()
        .map(|n| field.problem.source.eval(field.values[n], &grid.point(n)))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| (lo.min(f), hi.max(f)))
}

/// One side of the weak principle, checked whatever the hypotheses.
pub fn check_weak_side(field: &EllipticField, side: Side, tol: f64) -> WeakSide {
    let p = &field.problem;
    let grid = p.grid();
    let (f_lo, f_hi) = source_range(field);
    let structural = p.b_sign == BSign::Negative && p.c_sign == CSign::Nonpositive;
    let hypotheses_met = structural
        && match side {
            Side::Max => f_lo >= 0.0,
            Side::Min => f_hi <= 0.0,
        };
    let sgn = match side {
        Side::Max => 1.0,
        Side::Min => -1.0,
    };
    let mut bound: f64 = 0.0;
    for n in grid.boundary() {
        bound = bound.max(sgn * field.values[n]);
    }
    let (mut extreme, mut node) = (f64::NEG_INFINITY, 0);
    for (n, &v) in field.values.iter().enumerate() {
        if sgn * v > extreme {
            extreme = sgn * v;
            node = n;
        }
    }
    let violation = extreme - bound;
    WeakSide {
        side,
        hypotheses_met,
        bound: sgn * bound,
        extreme: sgn * extreme,
        node,
        violation,
        interior_extremum: !grid.is_boundary(node) && extreme > tol && violation > tol,
        passed: violation <= tol,
    }
}

/// Upper (`F ≥ 0`) and lower (`F ≤ 0`) weak bounds for the sides whose
/// hypotheses hold.
pub fn check_weak_principles(field: &EllipticField) -> WeakReport {
    let tol = scheme_tolerance(field);
    let side = |s| Some(check_weak_side(field, s, tol)).filter(|r| r.hypotheses_met);
    WeakReport {
        tol,
        upper: side(Side::Max),
        lower: side(Side::Min),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongReport {
    pub homogeneous: bool,
    pub max_inside: bool,
    pub min_inside: bool,
    pub sup_norm: f64,
    pub tol: f64,
    /// Vacuous (true) unless the equation is homogeneous and both extrema
    /// are attained inside, in which case `|u| ≤ tol` is required.
    pub passed: bool,
}

/// A homogeneous solution with interior max and min must vanish.
pub fn check_strong_principle(field: &EllipticField) -> StrongReport {
    let tol = scheme_tolerance(field);
    let grid = field.problem.grid();
    let (f_lo, f_hi) = source_range(field);
    let homogeneous = f_lo == 0.0 && f_hi == 0.0 && field.problem.c_sign == CSign::Nonpositive;
    let max = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = field.values.iter().copied().fold(f64::INFINITY, f64::min);
    let attained = |target: f64| {
        let slack = 1e-12 * target.abs().max(1.0);
        grid.interior().any(|n| (field.values[n] - target).abs() <= slack)
    };
    let (max_inside, min_inside) = (attained(max), attained(min));
    let sup_norm = field.max_abs();
    StrongReport {
        homogeneous,
        max_inside,
        min_inside,
        sup_norm,
        tol,
        passed: !(homogeneous && max_inside && min_inside) || sup_norm <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgmaxReport {
    pub node: Option<usize>,
    pub value: f64,
    /// Discrete `D^α` along each axis at the maximizer.
    pub fractional: Vec<f64>,
    /// The lower bound `(log x_j)^{-α} u / Γ(1-α)` per axis.
    pub bounds: Vec<f64>,
    pub tol: f64,
    pub passed: bool,
}

/// At an interior maximizer with a positive value every axis-wise discrete
/// `D^α` is at least `(log x_j)^{-α} u / Γ(1-α)` (hence positive).
pub fn check_argmax_fractional(field: &EllipticField) -> ArgmaxReport {
    let p = &field.problem;
    let grid: LogCube = p.grid();
    let alpha = p.alpha.value();
    let tol = scheme_tolerance(field);
    let interior_max = grid
        .interior()
        .fold(None::<usize>, |best, n| match best {
            Some(b) if field.values[b] >= field.values[n] => Some(b),
            _ => Some(n),
        })
        .filter(|&n| {
            let v = field.values[n];
            v > 0.0 && field.values.iter().all(|&w| w <= v)
        });
    let Some(node) = interior_max else {
        return ArgmaxReport {
            node: None,
            value: f64::NAN,
            fractional: vec![],
            bounds: vec![],
            tol,
            passed: true,
        };
    };
    let value = field.values[node];
    let xi = grid.xi(node);
    let g = crate::gamma::gamma_unchecked(1.0 - alpha);
    let mut fractional = Vec::new();
    let mut bounds = Vec::new();
    for (j, &x) in xi.iter().enumerate() {
        let axis = LogGrid::uniform(1.0, p.extents[j], p.cells[j]).expect("validated extents");
        let weights = SlopeWeights::new(&axis, alpha);
        fractional.push(fractional_at(&grid, &weights, alpha, j, node, &field.values));
        bounds.push(x.powf(-alpha) * value / g);
    }
    let passed = fractional.iter().zip(&bounds).all(|(d, b)| d - b >= -tol);
    ArgmaxReport {
        node: Some(node),
        value,
        fractional,
        bounds,
        tol,
        passed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub side: Side,
    /// `min u` for the nonnegative side, `max u` for the nonpositive side.
    pub extreme: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Boundary data of one sign (with `F = 0`, `c ≤ 0`) give a field of that sign.
pub fn check_sign(field: &EllipticField, side: Side) -> SignReport {
    let tol = scheme_tolerance(field);
    let (extreme, passed) = match side {
        Side::Min => {
            let m = field.values.iter().copied().fold(f64::INFINITY, f64::min);
            (m, m >= -tol)
        }
        Side::Max => {
            let m = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (m, m <= tol)
        }
    };
    SignReport { side, extreme, tol, passed }
}
