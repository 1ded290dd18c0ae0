//! A computed solitary wave fed to the time integrator should simply
//! translate at its speed.

use boussinesq_ms::cli::preset;
use boussinesq_ms::sim::{integrate, FieldState, IntegrateOptions};
use boussinesq_ms::travel::{default_grid, solve_classical, TravelingWaveSetup};

fn main() -> boussinesq_ms::Result<()> {
    let s = preset("figure2").unwrap();
    let c_s = 1.1;
    let grid = default_grid(c_s, 1024)?;
    let p = solve_classical(&TravelingWaveSetup::new(s, c_s)?, &grid, None)?;
    let t_end = 10.0;
    let expected = grid.translate(&p.zeta, c_s * t_end);
    for dt in [0.1, 0.05, 1e-3] {
        let state = FieldState::new(grid.clone(), p.zeta.clone(), p.u.clone(), 0.0)?;
        let opts = IntegrateOptions {
            dt,
            observe_every: usize::MAX,
        };
        let end = integrate(&s, state, t_end, &opts, |_, _| {})?;
        let err = end
            .eta()
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("dt = {dt:<6}: max |eta - translate| = {err:.3e}");
    }
    Ok(())
}
