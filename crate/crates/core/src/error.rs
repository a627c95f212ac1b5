use thiserror::Error;

/// Errors raised by the capacity library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model or scenario parameter violates an admissibility inequality.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A demand level lies outside the state space of the model.
    #[error("demand level {value} is outside the state space {space}")]
    Domain { value: f64, space: &'static str },

    /// A special-function value does not fit in a double.
    #[error("overflow evaluating {what} (log magnitude {log_magnitude:.3e})")]
    Overflow {
        what: &'static str,
        log_magnitude: f64,
    },

    /// An iterative or adaptive numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerics(String),

    /// Simulation grid incompatible with the time-to-build.
    #[error("grid error: {0}")]
    Grid(String),

    /// The analytic tail beyond the truncation horizon is too large.
    #[error("truncation error: tail bound {tail_bound:.4e} exceeds {max_fraction} of the estimate {mean:.4e}")]
    Truncation {
        tail_bound: f64,
        mean: f64,
        max_fraction: f64,
    },

    /// A finite-difference perturbation left the admissible parameter set.
    #[error("step error: {0}")]
    Step(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
