//! Traveling waves: the reduced four-dimensional system, its spectrum and
//! normal form, and solvers for solitary and generalized solitary waves.

mod setup;
mod solve;

pub use setup::{
    build_linearization, eigen_classify, leading_decay_rate, nonlinear_term, normal_form_constants, reversor,
    squared_eigenvalues, table1_prediction, vector_field, EigenReport, NormalFormConstants, Table1Label,
    TravelingWaveSetup, WaveClass, DFRAK_TOL,
};
pub use solve::{
    default_grid, default_half_length, generalized_grid, leading_order_guess, measure_tail_wavenumber,
    off_resonant_half_length, profile_residual, profile_residual_norm, solve_classical, solve_classical_with,
    solve_generalized, solve_generalized_with, speed_amplitude_curve, tail_wavenumber, write_curve_csv, CurveRow,
    ProfilePair, SolveOptions,
};
