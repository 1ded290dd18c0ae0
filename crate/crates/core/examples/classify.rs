//! Structure and well-posedness classification of the built-in presets and
//! of a `(theta, nu, mu)` family member.

use boussinesq_ms::cli::{preset, PRESET_NAMES};
use boussinesq_ms::coeffs::{
    abcd_from_theta, classify_structure, classify_wellposedness, NonlinearCoefficients, SystemCoefficients,
    ThetaNuMu, DEFAULT_TOL,
};

fn main() -> boussinesq_ms::Result<()> {
    println!("{:<14} {:>5} {:>5}  violated", "preset", "MS", "sympl");
    for name in PRESET_NAMES {
        let s = preset(name).unwrap();
        let r = classify_structure(&s, DEFAULT_TOL)?;
        let violated: Vec<_> = r.violated_conditions.iter().map(|c| c.as_str()).collect();
        println!(
            "{name:<14} {:>5} {:>5}  {}",
            r.is_multisymplectic,
            r.is_symplectic,
            violated.join(" ")
        );
    }

    // theta = 1 with nu = 0, mu = 1: a = 0, b = 1/3, c = 0, d = 0
    let disp = abcd_from_theta(&ThetaNuMu::new(1.0, 0.0, 1.0)?)?;
    let s = SystemCoefficients::new(
        disp,
        NonlinearCoefficients {
            alpha12: 1.0,
            beta22: 0.5,
            ..Default::default()
        },
    );
    println!("\ntheta=1, nu=0, mu=1 -> {disp:?}");
    println!("{:?}", classify_wellposedness(&s, DEFAULT_TOL));
    println!("{:?}", classify_wellposedness(&preset("kdvkdv").unwrap(), DEFAULT_TOL));
    Ok(())
}
