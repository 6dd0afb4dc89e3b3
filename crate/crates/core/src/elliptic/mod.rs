//! Elliptic equations with axis-wise Hadamard derivatives on `Π (1, h_j)`.
//!
//! Everything is assembled in `ξ_j = log x_j` on a uniform grid:
//! `∂²/∂x² = e^{-2ξ}(∂²/∂ξ² - ∂/∂ξ)`, `∂/∂x = e^{-ξ} ∂/∂ξ`, and `D^α_{x_j}`
//! becomes a Riemann–Liouville derivative in `ξ_j` discretized with the
//! split L1 weights along each grid line. Rows are lower-triangular along
//! lines in the fractional part.

pub mod assemble;
pub mod catalog;
pub mod checks;
pub mod problem;
pub mod solve;

pub use assemble::{assemble, assemble_with, AssembledSystem};
pub use checks::{check_argmax_fractional, check_sign, check_strong_principle, check_weak_principles, WeakReport};
pub use problem::{BSign, CSign, EllipticProblem, EllipticSource};
pub use solve::{
    solve_elliptic, solve_elliptic_with, solve_nonlinear_elliptic, solve_nonlinear_elliptic_with, EllipticField, EllipticGuess,
    LinearMethod,
};
