//! A generalized solitary wave of the KdV-KdV type system at `c_s = 1.5`:
//! a pulse riding on a periodic ripple whose wavenumber is the modulus of the
//! imaginary eigenvalue pair.

use boussinesq_ms::cli::preset;
use boussinesq_ms::travel::{
    eigen_classify, generalized_grid, measure_tail_wavenumber, solve_generalized, tail_wavenumber,
    TravelingWaveSetup,
};

fn main() -> boussinesq_ms::Result<()> {
    let setup = TravelingWaveSetup::new(preset("kdvkdv").unwrap(), 1.5)?;
    println!("spectrum: {:?}", eigen_classify(&setup)?.eigenvalues);
    let grid = generalized_grid(&setup, 40.0, 1024)?;
    let p = solve_generalized(&setup, &grid, None)?;
    let k = tail_wavenumber(&setup)?;
    println!("L = {:.4}, amplitude {:.6}, residual {:.2e}", grid.half_length(), p.amplitude_zeta(), p.residual_norm);
    println!(
        "ripple amplitude {:.4}, wavenumber {:.5} (eigenvalue {:.5})",
        p.tail_amplitude.unwrap(),
        measure_tail_wavenumber(&p).unwrap(),
        k
    );
    Ok(())
}
