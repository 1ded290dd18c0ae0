//! Conserved quantities under time integration: the L2 norm of the symmetric
//! system, the Hamiltonian and impulse of a `b = d` system, and a control
//! system where the Hamiltonian drifts.

use boussinesq_ms::cli::preset;
use boussinesq_ms::coeffs::SystemCoefficients;
use boussinesq_ms::sim::{integrate, ConservedDiagnostics, FieldState, IntegrateOptions};
use boussinesq_ms::spectralkit::PeriodicGrid;

fn drift(s: &SystemCoefficients, label: &str) -> boussinesq_ms::Result<()> {
    let g = PeriodicGrid::new(40.0, 256)?;
    let eta = g.sample(|x| 0.3 * (-x * x / 9.0).exp());
    let u = g.sample(|x| 0.2 * (-(x - 2.0) * (x - 2.0) / 9.0).exp());
    let state = FieldState::new(g, eta, u, 0.0)?;
    let mut hist: Vec<ConservedDiagnostics> = Vec::new();
    let opts = IntegrateOptions {
        dt: 1e-2,
        observe_every: 100,
    };
    integrate(s, state, 10.0, &opts, |_, d| hist.push(*d))?;
    let (a, b) = (hist[0], *hist.last().unwrap());
    let rel = |x: f64, y: f64| ((y - x) / x).abs();
    let opt = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => format!("{:.2e}", rel(x, y)),
        _ => "-".into(),
    };
    println!(
        "{label:<14} mass {:.2e}  l2 {:.2e}  H {}  impulse {}",
        rel(a.mass_eta, b.mass_eta),
        rel(a.l2, b.l2),
        opt(a.hamiltonian, b.hamiltonian),
        opt(a.impulse, b.impulse)
    );
    Ok(())
}

fn main() -> boussinesq_ms::Result<()> {
    println!("relative drift over T = 10");
    drift(&preset("symmetric").unwrap(), "symmetric")?;
    drift(&preset("ms-modified").unwrap(), "ms-modified")?;
    drift(&preset("abcd-classic").unwrap(), "abcd-classic")?;
    drift(&preset("figure2").unwrap(), "figure2")?;
    Ok(())
}
