//! Pseudo-spectral time integration of the family on a periodic domain and
//! the functionals it conserves.

mod integrate;
mod state;

pub use integrate::{integrate, run, GridSpec, IntegrateOptions, RunConfig, RunOutput};
pub use state::{diagnostics, rhs, write_diagnostics_csv, ConservedDiagnostics, FieldState};
