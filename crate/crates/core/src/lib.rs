pub mod closed_form;
pub mod diffusion;
pub mod elliptic;
pub mod error;
pub mod exec;
pub mod extremum;
pub mod gamma;
pub mod grid;
pub mod ops;
pub mod quadrature;
pub mod rng;
pub mod sum;
pub mod weights;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gamma::gamma;
pub use grid::{FracOrder, GridFunction, LogGrid};
