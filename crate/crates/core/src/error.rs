use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point {value} outside the domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("Newton iteration did not converge at Re = {reynolds} after {iterations} iterations (residual {residual:.3e})")]
    Continuation {
        reynolds: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("time step at t = {time} failed to converge (residual {residual:.3e}); try reducing dt")]
    TimeStep { time: f64, residual: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
