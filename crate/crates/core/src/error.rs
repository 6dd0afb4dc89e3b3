use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("fractional order must satisfy 0 < alpha < 1, got {0}")]
    InvalidOrder(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("non-finite value {value} at node {node}")]
    NonFinite { node: usize, value: f64 },

    #[error("operation does not accept a singular-at-endpoint grid function")]
    SingularInput,

    #[error("argument {value} outside domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("incompatible data: {0}")]
    Incompatible(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("{method} did not converge after {iterations} iterations (last residual {last:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("singular linear system")]
    SingularSystem,
}
