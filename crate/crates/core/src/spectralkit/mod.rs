//! Numerical substrate: periodic grids, spectral calculus, dense solves and
//! a Newton driver.

mod grid;
pub mod linalg;
pub mod newton;

pub use grid::{PeriodicGrid, MEAN_TOL};
pub use newton::{newton, Continuation, NewtonOptions, NewtonOutcome, NewtonProblem, NewtonStep};
