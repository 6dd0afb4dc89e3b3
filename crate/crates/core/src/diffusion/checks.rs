use super::problem::{DiffusionProblem, PicardGuess};
use super::solve::{solve, EquationForm, SolveOptions, SpaceTimeField};
use crate::error::{Error, Result};
use crate::gamma::gamma_unchecked;
use crate::grid::{FracOrder, GridFunction};
use crate::ops::{riemann_hadamard_deriv_with, RiemannMethod};
use crate::exec::Exec;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Multiplier in the maximum-principle tolerance.
pub const TOLERANCE_CONSTANT: f64 = 10.0;
/// Agreement required between Picard runs from different starts.
pub const UNIQUENESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSign {
    Zero,
    NonNegative,
    NonPositive,
    Indefinite,
}

impl SourceSign {
    pub fn allows(self, side: Side) -> bool {
        matches!(
            (self, side),
            (SourceSign::Zero, _) | (SourceSign::NonNegative, Side::Min) | (SourceSign::NonPositive, Side::Max)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideCheck {
    pub side: Side,
    /// Extreme of the data over the parabolic boundary.
    pub bound: f64,
    /// Extreme of the field over all nodes.
    pub extreme: f64,
    /// How far the field goes past the bound; negative means slack.
    pub violation: f64,
    pub node: usize,
    pub layer: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPrincipleReport {
    pub source_sign: SourceSign,
    pub tol: f64,
    pub min: Option<SideCheck>,
    pub max: Option<SideCheck>,
}

impl MaxPrincipleReport {
    pub fn passed(&self) -> bool {
        self.min.is_none_or(|c| c.passed) && self.max.is_none_or(|c| c.passed)
    }

    pub fn checked_sides(&self) -> usize {
        self.min.is_some() as usize + self.max.is_some() as usize
    }
}

/// Sign of `F` over the interior nodes of layers `k ≥ 1`, at the field values.
pub fn source_sign(field: &SpaceTimeField) -> SourceSign {
    let p = &field.problem;
    let (mut pos, mut neg) = (false, false);
    for (k, layer) in field.layers().iter().enumerate().skip(1) {
        let t = field.time().t()[k];
        for n in p.space.interior() {
            let f = p.source.eval(&p.space.point(n), t, layer[n]);
            pos |= f > 0.0;
            neg |= f < 0.0;
        }
    }
    match (pos, neg) {
        (false, false) => SourceSign::Zero,
        (true, false) => SourceSign::NonNegative,
        (false, true) => SourceSign::NonPositive,
        (true, true) => SourceSign::Indefinite,
    }
}

/// `max(1, |φ|, |Δ_h φ|, |F|)` over the grid.
pub fn data_seminorm(field: &SpaceTimeField) -> f64 {
    let p = &field.problem;
    let first = field.layer(0);
    let mut s: f64 = 1.0;
    for n in 0..p.space.len() {
        s = s.max(first[n].abs());
        if !p.space.is_boundary(n) {
            s = s.max(p.space.laplacian_at(first, n).abs());
        }
    }
    for (k, layer) in field.layers().iter().enumerate().skip(1) {
        let t = field.time().t()[k];
        for n in p.space.interior() {
            s = s.max(p.source.eval(&p.space.point(n), t, layer[n]).abs());
        }
    }
    s
}

/// `C (τ + h_x²) · seminorm`, with `τ = h_u^{2-α}` for the Caputo form and
/// the largest step in `t` for the first-order generalized scheme.
pub fn scheme_tolerance(field: &SpaceTimeField) -> f64 {
    let time = field.time();
    let alpha = field.problem.alpha.value();
    let tau = match field.form {
        EquationForm::Caputo => time.max_step().powf(2.0 - alpha),
        EquationForm::Generalized(_) => time.t().windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max),
    };
    let hx = field.space().max_step();
    TOLERANCE_CONSTANT * (tau + hx * hx) * data_seminorm(field)
}

/// Min/max bounds by the data on the parabolic boundary, for whichever
/// sides the sign of `F` supports.
pub fn check_max_principle(field: &SpaceTimeField) -> MaxPrincipleReport {
    let sign = source_sign(field);
    let tol = scheme_tolerance(field);
    let side = |s| sign.allows(s).then(|| check_side(field, s, tol));
    MaxPrincipleReport {
        source_sign: sign,
        tol,
        min: side(Side::Min),
        max: side(Side::Max),
    }
}

/// One side of the bound, regardless of the sign of `F`.
pub fn check_side(field: &SpaceTimeField, side: Side, tol: f64) -> SideCheck {
    let space = field.space();
    let better = |a: f64, b: f64| match side {
        Side::Min => a < b,
        Side::Max => a > b,
    };
    let mut bound = field.layer(0)[0];
    let mut extreme = bound;
    let (mut node, mut layer) = (0, 0);
    for (k, values) in field.layers().iter().enumerate() {
        for (n, &v) in values.iter().enumerate() {
            if (k == 0 || space.is_boundary(n)) && better(v, bound) {
                bound = v;
            }
            if better(v, extreme) {
                extreme = v;
                node = n;
                layer = k;
            }
        }
    }
    let violation = match side {
        Side::Min => bound - extreme,
        Side::Max => extreme - bound,
    };
    SideCheck {
        side,
        bound,
        extreme,
        violation,
        node,
        layer,
        passed: violation <= tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    /// `max |φ₁ - φ₂|`.
    pub delta: f64,
    /// `max |u₁ - u₂|` over all nodes.
    pub diff: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Solve both problems and check `|u₁ - u₂| ≤ δ + tol`.
pub fn check_continuous_dependence(
    p1: &DiffusionProblem,
    p2: &DiffusionProblem,
    form: EquationForm,
    opts: &SolveOptions,
) -> Result<DependenceReport> {
    same_structure(p1, p2)?;
    let f1 = solve(p1, form, opts)?;
    let f2 = solve(p2, form, opts)?;
    dependence_from_fields(&f1, &f2)
}

pub fn dependence_from_fields(f1: &SpaceTimeField, f2: &SpaceTimeField) -> Result<DependenceReport> {
    let delta = f1
        .layer(0)
        .iter()
        .zip(f2.layer(0))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let diff = f1.max_diff(f2)?;
    let tol = scheme_tolerance(f1).max(scheme_tolerance(f2));
    Ok(DependenceReport {
        delta,
        diff,
        tol,
        passed: diff <= delta + tol,
    })
}

fn same_structure(p1: &DiffusionProblem, p2: &DiffusionProblem) -> Result<()> {
    let mismatch = |what: &str| Err(Error::InvalidProblem(format!("problems differ in {what}")));
    if p1.alpha != p2.alpha || p1.nu != p2.nu {
        return mismatch("coefficients");
    }
    if p1.space != p2.space {
        return mismatch("space grid");
    }
    if p1.time.t() != p2.time.t() {
        return mismatch("time grid");
    }
    let space = &p1.space;
    for (k, &t) in p1.time.t().iter().enumerate() {
        for n in 0..space.len() {
            let x = space.point(n);
            if space.is_boundary(n) && (p1.boundary)(&x, t) != (p2.boundary)(&x, t) {
                return mismatch("boundary data");
            }
            if k > 0 && !space.is_boundary(n) {
                for u in [-1.0, 0.0, 1.0] {
                    if p1.source.eval(&x, t, u) != p2.source.eval(&x, t, u) {
                        return mismatch("source");
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub max_diff: f64,
    pub picard_a: usize,
    pub picard_b: usize,
    pub passed: bool,
}

/// Converge Picard from two starting guesses and compare the fields.
pub fn check_picard_uniqueness(
    problem: &DiffusionProblem,
    form: EquationForm,
    guesses: [PicardGuess; 2],
    opts: &SolveOptions,
) -> Result<UniquenessReport> {
    let a = solve(problem, form, &SolveOptions { guess: guesses[0], ..*opts })?;
    let b = solve(problem, form, &SolveOptions { guess: guesses[1], ..*opts })?;
    let max_diff = a.max_diff(&b)?;
    Ok(UniquenessReport {
        max_diff,
        picard_a: a.stats.total_picard,
        picard_b: b.stats.total_picard,
        passed: max_diff <= UNIQUENESS_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub mu: f64,
    /// Largest `|discrete shift - exact shift|` over checked nodes.
    pub max_abs_error: f64,
    /// Same, relative to the exact shift.
    pub max_rel_error: f64,
    pub checked_nodes: usize,
}

/// Adding `μ (log t/a)^α` to every time series must shift the discrete
/// `D^{1-α}` by `μ Γ(α+1)/Γ(2α) (log t/a)^{2α-1}`. Nodes with `t < t_min`
/// are skipped.
pub fn check_shift_identity(field: &SpaceTimeField, mu: f64, t_min: f64) -> Result<ShiftReport> {
    let time = Arc::new(field.time().clone());
    let alpha = field.problem.alpha.value();
    let order = FracOrder::new(1.0 - alpha)?;
    let scale = mu * gamma_unchecked(alpha + 1.0) / gamma_unchecked(2.0 * alpha);
    let space = field.space();
    let (mut abs_err, mut rel_err, mut count): (f64, f64, usize) = (0.0, 0.0, 0);
    for n in space.interior() {
        let series: Vec<f64> = field.layers().iter().map(|l| l[n]).collect();
        let shifted: Vec<f64> = series.iter().zip(time.u()).map(|(v, u)| v + mu * u.powf(alpha)).collect();
        let d0 = riemann_hadamard_deriv_with(&GridFunction::new(time.clone(), series)?, order, RiemannMethod::Split, Exec::Serial)?;
        let d1 = riemann_hadamard_deriv_with(&GridFunction::new(time.clone(), shifted)?, order, RiemannMethod::Split, Exec::Serial)?;
        for k in 1..time.len() {
            if time.t()[k] < t_min {
                continue;
            }
            let exact = scale * time.u()[k].powf(2.0 * alpha - 1.0);
            let err = (d1.values()[k] - d0.values()[k] - exact).abs();
            abs_err = abs_err.max(err);
            rel_err = rel_err.max(err / exact.abs());
            count += 1;
        }
    }
    Ok(ShiftReport {
        mu,
        max_abs_error: abs_err,
        max_rel_error: rel_err,
        checked_nodes: count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    /// Largest `|I^α u(x, t_1)|` over the space nodes.
    pub first_value: f64,
    /// `‖u‖_∞ h_u^α / Γ(α+1)`.
    pub bound: f64,
    pub passed: bool,
}

/// The discrete Hadamard integral of every time series at `t_1` is at most
/// `‖u‖ h^α / Γ(α+1)`.
pub fn check_vanishing_history(field: &SpaceTimeField) -> Result<VanishingReport> {
    let alpha = field.problem.alpha;
    let time = field.time();
    let a = alpha.value();
    // product integration of the linear interpolant over the first interval
    let h = time.u()[1];
    let scale = h.powf(a) / gamma_unchecked(a + 2.0);
    let first = (0..field.space().len())
        .map(|n| (scale * (a * field.layer(0)[n] + field.layer(1)[n])).abs())
        .fold(0.0, f64::max);
    let bound = field.max_abs() * h.powf(a) / gamma_unchecked(a + 1.0);
    Ok(VanishingReport {
        first_value: first,
        bound,
        passed: first <= bound * (1.0 + 1e-12),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialSignReport {
    /// Smallest discrete `D^{1-α} u` at `t_1` over interior nodes.
    pub min_value: f64,
    pub tol: f64,
    pub passed: bool,
}

/// With `φ ≥ 0`, the discrete `D^{1-α} u(x, t_1)` is nonnegative up to tol.
/// Returns `None` when `φ` takes negative values.
pub fn check_initial_fractional_sign(field: &SpaceTimeField) -> Result<Option<InitialSignReport>> {
    if field.layer(0).iter().any(|&v| v < 0.0) {
        return Ok(None);
    }
    let time = field.time();
    let alpha = field.problem.alpha.value();
    let order = 1.0 - alpha;
    let (u1, h) = (time.u()[1], time.step(0));
    let newest = crate::weights::slope_weight(0.0, h, order) / (gamma_unchecked(alpha) * h);
    let head = u1.powf(-order) / gamma_unchecked(alpha);
    let min_value = field
        .space()
        .interior()
        .map(|n| {
            let (v0, v1) = (field.layer(0)[n], field.layer(1)[n]);
            v0 * head + newest * (v1 - v0)
        })
        .fold(f64::INFINITY, f64::min);
    let tol = scheme_tolerance(field);
    Ok(Some(InitialSignReport {
        min_value,
        tol,
        passed: min_value >= -tol,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedReport {
    pub max_principle: MaxPrincipleReport,
    pub vanishing_history: VanishingReport,
    pub initial_sign: Option<InitialSignReport>,
}

impl GeneralizedReport {
    pub fn passed(&self) -> bool {
        self.max_principle.passed() && self.vanishing_history.passed && self.initial_sign.is_none_or(|r| r.passed)
    }
}

pub fn check_generalized_principles(field: &SpaceTimeField) -> Result<GeneralizedReport> {
    Ok(GeneralizedReport {
        max_principle: check_max_principle(field),
        vanishing_history: check_vanishing_history(field)?,
        initial_sign: check_initial_fractional_sign(field)?,
    })
}
