//! Boussinesq-type systems with multi-symplectic structure.
//!
//! - [`coeffs`]: parameter space and algebraic classification.
//! - [`msform`]: explicit multi-symplectic formulation, lifting and conservation densities.
//! - [`travel`]: traveling-wave linearization, spectrum, normal form and solitary-wave solvers.
//! - [`sim`]: pseudo-spectral time integration and conserved quantities.
//! - [`spectralkit`]: periodic grids, spectral calculus, dense solves, Newton.
//! - [`cli`]: command implementations behind the `bms` binary.

pub mod cli;
pub mod coeffs;
pub mod error;
pub mod msform;
pub mod sim;
pub mod spectralkit;
pub mod travel;

pub use error::{Error, Result};
