//! Spectrum of the linearized traveling-wave system and the Table 1 pattern
//! of classical versus generalized solitary waves just above `c_s = 1`.

use boussinesq_ms::coeffs::{DispersionCoefficients, NonlinearCoefficients, SystemCoefficients, DEFAULT_TOL};
use boussinesq_ms::travel::{eigen_classify, squared_eigenvalues, table1_prediction, TravelingWaveSetup};

fn system(a: f64, b: f64, d: f64) -> SystemCoefficients {
    SystemCoefficients::new(DispersionCoefficients::new(a, b, a, d), NonlinearCoefficients::default())
}

fn main() -> boussinesq_ms::Result<()> {
    // a = c = 0, b = d = 1/6 at c_s = 1.2: four real eigenvalues +-1, +-sqrt(11)
    let setup = TravelingWaveSetup::new(system(0.0, 1.0 / 6.0, 1.0 / 6.0), 1.2)?;
    let rep = eigen_classify(&setup)?;
    println!("BBM-type, c_s = 1.2: {:?}", rep.classification);
    for l in &rep.eigenvalues {
        println!("  {:+.15} {:+.15}i", l.re, l.im);
    }
    println!("  lambda^2 = {:?}", squared_eigenvalues(&setup)?);

    let sets = [
        (1.0 / 6.0, 0.0, 0.0),
        (-0.1, 0.0, 1.0 / 6.0),
        (1.0 / 6.0, 1.0 / 6.0, 0.0),
        (-0.1, 1.0 / 6.0, 1.0 / 6.0),
        (-0.2, 0.1, 0.1),
        (0.1, 1.0 / 6.0, 1.0 / 6.0),
        (1.0, 0.5, 0.5),
        (0.2, -0.1, -0.1),
        (0.0, 1.0 / 6.0, 1.0 / 6.0),
    ];
    println!("\n{:>8} {:>8} {:>8}  numeric  table", "a", "b", "d");
    for (a, b, d) in sets {
        let s = system(a, b, d);
        let rep = eigen_classify(&TravelingWaveSetup::new(s, 1.01)?)?;
        println!(
            "{a:>8.4} {b:>8.4} {d:>8.4}  {:<7}  {:?}",
            rep.classification.as_str(),
            table1_prediction(&s, DEFAULT_TOL)
        );
    }
    Ok(())
}
