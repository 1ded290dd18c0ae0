//! Normal-form constants near `c_s = 1` and the leading-order solitary wave
//! they predict, compared with a converged profile.

use boussinesq_ms::cli::preset;
use boussinesq_ms::travel::{
    default_grid, leading_decay_rate, normal_form_constants, solve_classical, TravelingWaveSetup,
};

fn main() -> boussinesq_ms::Result<()> {
    let kdv = preset("kdvkdv").unwrap();
    let nf = normal_form_constants(&kdv, kdv.disp.a);
    println!("kdvkdv: sigma = {}, c10 = {}, c20 = {}", nf.sigma, nf.c10()?, nf.c20()?);

    let s = preset("figure2").unwrap();
    let nf = normal_form_constants(&s, s.disp.a);
    println!("figure2: sigma = {}, c10 defined: {}", nf.sigma, nf.c10.is_some());
    for c_s in [1.08, 1.04, 1.02] {
        let setup = TravelingWaveSetup::new(s, c_s)?;
        let p = solve_classical(&setup, &default_grid(c_s, 2048)?, None)?;
        println!(
            "c_s = {c_s}: amplitude {:.6} (leading order {:.6}), decay rate {:.4}",
            p.amplitude_zeta(),
            nf.leading_amplitude(c_s)?,
            leading_decay_rate(&setup).unwrap()
        );
    }
    Ok(())
}
