use thiserror::Error;

/// Errors produced by parameter validation, domain checks and the numerical
/// kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("ordering parameters must satisfy alpha + beta + gamma_order = -1, got sum {0}")]
    Ordering(f64),

    #[error("eigensolver did not converge for index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("linear system is singular at pivot {0}")]
    SingularSystem(usize),

    #[error("propagation diverged: norm reached {0}")]
    Diverged(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
