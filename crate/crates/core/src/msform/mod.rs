//! Explicit multi-symplectic formulation `K z_t + M z_x = grad S(z)` for the
//! general Boussinesq family (dimension 10) and the KdV–BBM equation
//! (dimension 5), with lifting of physical fields and the energy/momentum
//! conservation laws.

mod field;
mod system;

pub use field::{
    conservation_densities, conservation_residuals, lift_kdvbbm, lift_state, lift_state_with,
    ms_residual, Densities, LiftOptions, MsResidual, PhaseField,
};
pub(crate) use field::fmt17;
pub use system::{
    asymmetry, boussinesq_vector_field, build_boussinesq_ms, build_boussinesq_ms_with_tol,
    build_kdvbbm_ms, fd_jacobian, idx, MSSystem, MsSource, PhaseVector, BOUSSINESQ_COMPONENTS,
    KDVBBM_COMPONENTS,
};
