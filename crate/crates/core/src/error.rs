use thiserror::Error;

use crate::coeffs::Condition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("coefficients are not multi-symplectic; violated: {}", join(violated))]
    Structure { violated: Vec<Condition> },

    #[error("degenerate traveling-wave system: bd c_s^2 - a^2 = {dfrak:e}")]
    Degenerate { dfrak: f64 },

    #[error("no solitary-wave bifurcation for c_s = {c_s} (requires c_s > 1)")]
    NoBifurcation { c_s: f64 },

    #[error("wrong solver: spectrum is {found}, this solver handles {expected}")]
    WrongSolver {
        expected: &'static str,
        found: &'static str,
    },

    /// Sum of the nonlinear coefficients must be positive for the normal form.
    #[error("nonlinearity sum sigma = {sigma} is not positive")]
    NonlinearitySign { sigma: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("Newton iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        /// Last iterate, kept for inspection.
        last: Option<Vec<f64>>,
    },

    #[error("singular linear system")]
    Singular,

    #[error("non-finite values at t = {t}")]
    BlowUp {
        t: f64,
        last_eta: Vec<f64>,
        last_u: Vec<f64>,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn join(conds: &[Condition]) -> String {
    conds
        .iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}
