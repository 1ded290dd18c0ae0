//! The five-dimensional formulation of the KdV-BBM equation
//! `u_t + u u_x + alpha u_xxx - beta u_xxt = 0`.

use boussinesq_ms::msform::{build_kdvbbm_ms, lift_kdvbbm, ms_residual, LiftOptions};
use boussinesq_ms::spectralkit::PeriodicGrid;

fn main() -> boussinesq_ms::Result<()> {
    let (alpha, beta) = (0.5, 1.0);
    let ms = build_kdvbbm_ms(alpha, beta);
    println!("components: {:?}", ms.component_names());
    println!("K = {}", ms.k());
    println!("M = {}", ms.m());

    // a small-amplitude linear wave e^{i(kx - wt)} with w = -alpha k^3 / (1 + beta k^2)
    let grid = PeriodicGrid::new(std::f64::consts::PI, 64)?;
    let k: f64 = 2.0;
    let w = -alpha * k.powi(3) / (1.0 + beta * k * k);
    let eps = 1e-6;
    let u = grid.sample(|x| eps * (k * x).cos());
    let u_t = grid.sample(|x| eps * w * (k * x).sin());
    let pf = lift_kdvbbm(alpha, beta, &grid, &u, &u_t, &LiftOptions::default())?;
    println!("residual of the lifted linear wave: {:.2e}", ms_residual(&ms, &pf)?.max_norm);
    Ok(())
}
