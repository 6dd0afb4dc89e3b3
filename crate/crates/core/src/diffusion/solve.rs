use super::linsolve::solve_dirichlet;
use super::problem::{DiffusionProblem, Monotonicity, PicardGuess};
use super::space::SpaceGrid;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gamma::gamma_unchecked;
use crate::grid::LogGrid;
use crate::sum::CompensatedSum;
use crate::weights::SlopeWeights;
use serde::{Deserialize, Serialize};

pub const PICARD_TOLERANCE: f64 = 1e-10;
pub const PICARD_MAX_ITERATIONS: usize = 200;
pub const PICARD_DAMPING: f64 = 0.8;

/// Where the fractional operator sits in the generalized equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `ν D^{1-α}(Δu)`: the scheme stores the discrete Laplacian history.
    LaplacianOfHistory,
    /// `ν Δ(D^{1-α} u)`: the scheme stores the field history.
    FractionalOfField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", content = "placement", rename_all = "snake_case")]
pub enum EquationForm {
    /// `D_*^α u = ν Δu + F`.
    Caputo,
    /// `u_t = ν D^{1-α} Δu + F`.
    Generalized(Placement),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub exec: Exec,
    pub guess: PicardGuess,
    pub picard_tol: f64,
    pub picard_max: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            exec: Exec::default(),
            guess: PicardGuess::PreviousLayer,
            picard_tol: PICARD_TOLERANCE,
            picard_max: PICARD_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverStats {
    pub max_sweeps: usize,
    pub max_picard: usize,
    pub total_picard: usize,
}

/// Nodal values per time layer; layer 0 is the initial data.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    pub problem: DiffusionProblem,
    pub form: EquationForm,
    pub stats: SolverStats,
    layers: Vec<Vec<f64>>,
}

impl SpaceTimeField {
    pub fn layers(&self) -> &[Vec<f64>] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &[f64] {
        &self.layers[k]
    }

    pub fn space(&self) -> &SpaceGrid {
        &self.problem.space
    }

    pub fn time(&self) -> &LogGrid {
        &self.problem.time
    }

    pub fn max_abs(&self) -> f64 {
        self.values().map(f64::abs).fold(0.0, f64::max)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().flatten().copied()
    }

    /// Max-norm distance to another field on the same grids.
    pub fn max_diff(&self, other: &SpaceTimeField) -> Result<f64> {
        if self.layers.len() != other.layers.len() || self.layers[0].len() != other.layers[0].len() {
            return Err(Error::GridMismatch);
        }
        Ok(self.values().zip(other.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Max-norm error against the manufactured solution, if the problem has one.
    pub fn max_error(&self) -> Option<f64> {
        let exact = self.problem.exact.as_ref()?;
        let space = self.space();
        let mut err: f64 = 0.0;
        for (k, layer) in self.layers.iter().enumerate() {
            let t = self.time().t()[k];
            for (n, v) in layer.iter().enumerate() {
                err = err.max((v - exact(&space.point(n), t)).abs());
            }
        }
        Some(err)
    }
}

/// Caputo–Hadamard equation with a source independent of `u`.
pub fn solve_linear(problem: &DiffusionProblem) -> Result<SpaceTimeField> {
    solve_linear_with(problem, &SolveOptions::default())
}

pub fn solve_linear_with(problem: &DiffusionProblem, opts: &SolveOptions) -> Result<SpaceTimeField> {
    if !problem.source.is_linear() || problem.monotonicity != Monotonicity::None {
        return Err(Error::InvalidProblem("solve_linear needs a linear source".into()));
    }
    march(problem, EquationForm::Caputo, opts)
}

/// Caputo–Hadamard equation with `F(x, t, u)`, Picard per layer.
pub fn solve_nonlinear(problem: &DiffusionProblem) -> Result<SpaceTimeField> {
    solve_nonlinear_with(problem, &SolveOptions::default())
}

pub fn solve_nonlinear_with(problem: &DiffusionProblem, opts: &SolveOptions) -> Result<SpaceTimeField> {
    march(problem, EquationForm::Caputo, opts)
}

/// Generalized equation `u_t = ν D^{1-α} Δu + F`, linear or nonlinear source.
pub fn solve_generalized(problem: &DiffusionProblem, placement: Placement) -> Result<SpaceTimeField> {
    solve_generalized_with(problem, placement, &SolveOptions::default())
}

pub fn solve_generalized_with(problem: &DiffusionProblem, placement: Placement, opts: &SolveOptions) -> Result<SpaceTimeField> {
    march(problem, EquationForm::Generalized(placement), opts)
}

/// Dispatch on the equation form.
pub fn solve(problem: &DiffusionProblem, form: EquationForm, opts: &SolveOptions) -> Result<SpaceTimeField> {
    march(problem, form, opts)
}

/// Newest-layer system `d U - κ Δ_h U = r` (before the source is added).
struct LayerSystem {
    diag: f64,
    kappa: f64,
    rhs: Vec<f64>,
}

/// `Σ_{j<k-1} w(k, j) s_j[node]`, the memory beyond the newest slope.
fn memory(weights: &SlopeWeights<'_>, slopes: &[Vec<f64>], k: usize, node: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for (j, s) in slopes.iter().enumerate().take(k - 1) {
        acc.add(weights.get(k, j) * s[node]);
    }
    acc.value()
}

fn march(problem: &DiffusionProblem, form: EquationForm, opts: &SolveOptions) -> Result<SpaceTimeField> {
    problem.validate()?;
    let time = problem.time.clone();
    let space = problem.space;
    let alpha = problem.alpha.value();
    let nu = problem.nu;
    let exec = opts.exec;
    let u0 = problem.initial_layer();
    let nodes = space.len();

    let order = match form {
        EquationForm::Caputo => alpha,
        EquationForm::Generalized(_) => 1.0 - alpha,
    };
    let weights = SlopeWeights::new(&time, order);
    let inv_gamma = 1.0 / gamma_unchecked(1.0 - order);

    // slopes of the operand of the fractional operator
    let mut slopes: Vec<Vec<f64>> = Vec::with_capacity(time.intervals());
    // Laplacian history for LaplacianOfHistory
    let mut lap_prev = space.laplacian(&u0);
    let lap0 = lap_prev.clone();

    let mut layers = vec![u0];
    let mut stats = SolverStats::default();
    for k in 1..=time.intervals() {
        let h = time.step(k - 1);
        let uk = time.u()[k];
        let prev = &layers[k - 1];
        let newest = weights.get(k, k - 1) * inv_gamma / h;
        let system = match form {
            EquationForm::Caputo => {
                let rhs = exec.map(nodes, |n| {
                    if space.is_boundary(n) {
                        0.0
                    } else {
                        newest * prev[n] - inv_gamma * memory(&weights, &slopes, k, n)
                    }
                });
                LayerSystem { diag: newest, kappa: nu, rhs }
            }
            EquationForm::Generalized(placement) => {
                let dt = time.t()[k] - time.t()[k - 1];
                let head = uk.powf(-order) * inv_gamma;
                let explicit = match placement {
                    Placement::LaplacianOfHistory => exec.map(nodes, |n| {
                        if space.is_boundary(n) {
                            0.0
                        } else {
                            lap0[n] * head + inv_gamma * memory(&weights, &slopes, k, n) - newest * lap_prev[n]
                        }
                    }),
                    Placement::FractionalOfField => {
                        let first = &layers[0];
                        let e = exec.map(nodes, |n| {
                            first[n] * head + inv_gamma * memory(&weights, &slopes, k, n) - newest * prev[n]
                        });
                        space.laplacian(&e)
                    }
                };
                let rhs = (0..nodes).map(|n| prev[n] / dt + nu * explicit[n]).collect();
                LayerSystem {
                    diag: 1.0 / dt,
                    kappa: nu * newest,
                    rhs,
                }
            }
        };
        let (next, sweeps, picard) = solve_layer(problem, k, prev, &system, opts)?;
        stats.max_sweeps = stats.max_sweeps.max(sweeps);
        stats.max_picard = stats.max_picard.max(picard);
        stats.total_picard += picard;

        match form {
            EquationForm::Generalized(Placement::LaplacianOfHistory) => {
                let lap = space.laplacian(&next);
                slopes.push(lap.iter().zip(&lap_prev).map(|(a, b)| (a - b) / h).collect());
                lap_prev = lap;
            }
            _ => slopes.push(next.iter().zip(prev).map(|(a, b)| (a - b) / h).collect()),
        }
        layers.push(next);
    }
    Ok(SpaceTimeField {
        problem: problem.clone(),
        form,
        stats,
        layers,
    })
}

/// Returns the new layer, the worst inner sweep count and the Picard count.
fn solve_layer(
    problem: &DiffusionProblem,
    k: usize,
    prev: &[f64],
    system: &LayerSystem,
    opts: &SolveOptions,
) -> Result<(Vec<f64>, usize, usize)> {
    let space = &problem.space;
    let t = problem.time.t()[k];
    let points: Vec<Vec<f64>> = (0..space.len()).map(|n| space.point(n)).collect();
    let mut x: Vec<f64> = (0..space.len())
        .map(|n| {
            if space.is_boundary(n) {
                (problem.boundary)(&points[n], t)
            } else {
                match opts.guess {
                    PicardGuess::PreviousLayer => prev[n],
                    PicardGuess::Constant(c) => c,
                }
            }
        })
        .collect();
    let source = &problem.source;
    let mut sweeps = 0;
    if source.is_linear() {
        let diag = vec![system.diag; space.len()];
        let rhs: Vec<f64> = (0..space.len()).map(|n| system.rhs[n] + source.eval(&points[n], t, 0.0)).collect();
        sweeps = solve_dirichlet(space, &diag, system.kappa, &rhs, &mut x)?.sweeps;
        finite(&x)?;
        return Ok((x, sweeps, 1));
    }

    let mut history = Vec::new();
    let mut damping = 1.0;
    for it in 1..=opts.picard_max {
        let mut diag = vec![system.diag; space.len()];
        let mut rhs = system.rhs.clone();
        for n in space.interior() {
            let (f, fu) = (source.eval(&points[n], t, x[n]), source.du(&points[n], t, x[n]));
            if problem.monotonicity == Monotonicity::NonincreasingInU && fu > 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "source flagged nonincreasing has dF/du = {fu} at u = {}",
                    x[n]
                )));
            }
            diag[n] -= fu;
            rhs[n] += f - fu * x[n];
        }
        let mut next = x.clone();
        sweeps = sweeps.max(solve_dirichlet(space, &diag, system.kappa, &rhs, &mut next)?.sweeps);
        let diff = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if history.last().is_some_and(|&last| diff >= last) {
            damping *= PICARD_DAMPING;
        }
        history.push(diff);
        if !diff.is_finite() {
            break;
        }
        for (xi, ni) in x.iter_mut().zip(&next) {
            *xi += damping * (ni - *xi);
        }
        if diff <= opts.picard_tol {
            finite(&x)?;
            return Ok((x, sweeps, it));
        }
    }
    Err(Error::NoConvergence {
        method: "picard",
        iterations: history.len(),
        last: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

fn finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::NonFinite { node, value: x[node] }),
        None => Ok(()),
    }
}
