//! The 10-dimensional formulation `K z_t + M z_x = grad S(z)`: the matrices,
//! a symmetry check of the gradient Jacobian, and what goes wrong when the
//! coefficient conditions fail.

use boussinesq_ms::cli::preset;
use boussinesq_ms::coeffs::SystemCoefficients;
use boussinesq_ms::msform::{asymmetry, boussinesq_vector_field, build_boussinesq_ms, fd_jacobian};

fn main() -> boussinesq_ms::Result<()> {
    let s = preset("figure2").unwrap();
    let ms = build_boussinesq_ms(&s)?;
    println!("components: {:?}", ms.component_names());
    println!("K = {}", ms.k());
    println!("M = {}", ms.m());

    let z: Vec<f64> = (0..10).map(|j| 0.3 * (j as f64 + 1.0).sin()).collect();
    let jac = fd_jacobian(|v| ms.gradient(v), &z, 1e-6);
    println!("Jacobian asymmetry of grad S: {:.2e}", asymmetry(&jac));

    // break alpha12 = 2 beta11: the right-hand side is no longer a gradient
    let mut bad: SystemCoefficients = s;
    bad.nl.alpha12 += 0.1;
    println!("building with alpha12 perturbed: {}", build_boussinesq_ms(&bad).unwrap_err());
    let zf: [f64; 10] = z.clone().try_into().unwrap();
    let jac = fd_jacobian(|v| boussinesq_vector_field(&bad, &v.try_into().unwrap()).to_vec(), &zf, 1e-6);
    println!("Jacobian asymmetry of the vector field: {:.2e}", asymmetry(&jac));
    Ok(())
}
