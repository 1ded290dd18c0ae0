//! Lifting a traveling wave to the phase space of the multi-symplectic form
//! and watching the residual `K z_t + M z_x - grad S(z)` vanish as the grid
//! is refined.
//!
//! The profile is solved once on a fine grid and sampled onto coarser ones;
//! re-solving at each size would only show the Newton tolerance.

use boussinesq_ms::cli::preset;
use boussinesq_ms::msform::{build_boussinesq_ms, conservation_residuals, lift_state_with, ms_residual, LiftOptions};
use boussinesq_ms::sim::{rhs, FieldState};
use boussinesq_ms::spectralkit::PeriodicGrid;
use boussinesq_ms::travel::{default_grid, solve_classical, TravelingWaveSetup};

fn main() -> boussinesq_ms::Result<()> {
    let s = preset("figure2").unwrap();
    let ms = build_boussinesq_ms(&s)?;
    let c_s = 1.1;
    let setup = TravelingWaveSetup::new(s, c_s)?;
    let fine = solve_classical(&setup, &default_grid(c_s, 2048)?, None)?;
    // the profiles have nonzero mean, so keep only the periodic part of the potentials
    let opts = LiftOptions { strict_mean: false };

    for factor in [8, 4, 2] {
        let p = fine.subsample(factor)?;
        let g = &p.grid;
        let eta_t: Vec<f64> = g.diff(&p.zeta, 1).iter().map(|v| -c_s * v).collect();
        let u_t: Vec<f64> = g.diff(&p.u, 1).iter().map(|v| -c_s * v).collect();
        let pf = lift_state_with(&s, g, &p.zeta, &p.u, &eta_t, &u_t, &opts)?;
        println!("N = {:5}: max residual {:.3e}", g.len(), ms_residual(&ms, &pf)?.max_norm);
    }

    // energy and momentum balances for a zero-mean state of the ms-modified system
    let s = preset("ms-modified").unwrap();
    let ms = build_boussinesq_ms(&s)?;
    for n in [64, 128, 256] {
        let g = PeriodicGrid::new(20.0, n)?;
        let eta = g.sample(|x| 0.2 * x * (-x * x / 4.0).exp());
        let u = g.sample(|x| 0.2 * (1.0 - x * x / 2.0) * (-x * x / 4.0).exp());
        let (eta_t, u_t) = rhs(&s, &FieldState::new(g.clone(), eta.clone(), u.clone(), 0.0)?)?;
        let pf = lift_state_with(&s, &g, &eta, &u, &eta_t, &u_t, &LiftOptions::default())?;
        let (e, m) = conservation_residuals(&ms, &pf)?;
        let max = |v: &[f64]| v.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        println!(
            "N = {n:4}: |E_t + F_x| {:.2e}, |I_t + G_x| {:.2e}, MS residual {:.2e}",
            max(&e),
            max(&m),
            ms_residual(&ms, &pf)?.max_norm
        );
    }
    Ok(())
}
