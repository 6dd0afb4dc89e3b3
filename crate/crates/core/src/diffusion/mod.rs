//! Time-fractional diffusion on an interval or rectangle.
//!
//! Two equations share the machinery:
//!
//! * Caputo–Hadamard form `D_*^α u = ν Δu + F`, discretized with the L1
//!   weights in `u = log(t/a)` and implicit in the newest layer;
//! * generalized form `u_t = ν D^{1-α} Δu + F`, with a backward difference
//!   in `t` and split-form L1 weights of order `1-α` on the Laplacian history.
//!
//! Space uses the 3-point / 5-point Laplacian with Dirichlet data. Each
//! layer is a Thomas solve in 1D and a red-black SOR solve in 2D.

pub mod catalog;
pub mod checks;
pub mod linsolve;
pub mod problem;
pub mod solve;
pub mod space;

pub use checks::{
    check_continuous_dependence, check_generalized_principles, check_max_principle, check_picard_uniqueness,
    check_shift_identity, check_vanishing_history, MaxPrincipleReport, Side, SourceSign,
};
pub use problem::{DiffusionProblem, Monotonicity, PicardGuess, Source};
pub use solve::{
    solve, solve_generalized, solve_generalized_with, solve_linear, solve_linear_with, solve_nonlinear, solve_nonlinear_with,
    EquationForm, Placement, SolveOptions, SpaceTimeField,
};
pub use space::SpaceGrid;
