//! Classical solitary waves of the Figure-2 system: a profile CSV and the
//! speed-amplitude curve.
//!
//! Usage: `cargo run --release --example solitary_wave [out_dir]`

use std::fs::File;
use std::path::PathBuf;

use boussinesq_ms::cli::preset;
use boussinesq_ms::travel::{
    default_grid, solve_classical, speed_amplitude_curve, write_curve_csv, TravelingWaveSetup,
};

fn main() -> boussinesq_ms::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/solitary".into()));
    std::fs::create_dir_all(&out)?;
    let s = preset("figure2").unwrap();

    let setup = TravelingWaveSetup::new(s, 1.1)?;
    let p = solve_classical(&setup, &default_grid(1.1, 1024)?, None)?;
    println!(
        "c_s = 1.1: amplitude {:.6}, residual {:.2e}, {} Newton iterations, evenness defect {:.1e}",
        p.amplitude_zeta(),
        p.residual_norm,
        p.iterations,
        p.evenness_defect()
    );
    p.write_csv(File::create(out.join("profile_cs1p1.csv"))?)?;

    let speeds: Vec<f64> = (0..10).map(|i| 1.02 + 0.02 * i as f64).collect();
    let rows = speed_amplitude_curve(&setup, &speeds, &default_grid(1.02, 1024)?);
    for r in &rows {
        println!("{:.2}  {:.6}  {:.6}  {}", r.c_s, r.amp_zeta, r.amp_zeta / (r.c_s - 1.0), r.status);
    }
    write_curve_csv(&rows, File::create(out.join("curve.csv"))?)?;
    println!("wrote {}", out.display());
    Ok(())
}
