use std::io::Write;

use crate::coeffs::SystemCoefficients;
use crate::error::{Error, Result};
use crate::spectralkit::{PeriodicGrid, MEAN_TOL};

use super::system::{idx, MSSystem, MsSource, PhaseVector};

/// Sampled phase field with its space and time derivatives.
///
/// Storage is component-major: `z[c][j]` is component `c` at node `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    grid: PeriodicGrid,
    z: Vec<Vec<f64>>,
    z_t: Vec<Vec<f64>>,
    z_x: Vec<Vec<f64>>,
}

impl PhaseField {
    pub fn new(
        grid: PeriodicGrid,
        z: Vec<Vec<f64>>,
        z_t: Vec<Vec<f64>>,
        z_x: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let dim = z.len();
        for block in [&z_t, &z_x] {
            if block.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: block.len(),
                });
            }
        }
        for comp in z.iter().chain(&z_t).chain(&z_x) {
            if comp.len() != grid.len() {
                return Err(Error::DimensionMismatch {
                    expected: grid.len(),
                    found: comp.len(),
                });
            }
        }
        Ok(Self { grid, z, z_t, z_x })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self, component: usize) -> &[f64] {
        &self.z[component]
    }

    pub fn z_t(&self, component: usize) -> &[f64] {
        &self.z_t[component]
    }

    pub fn z_x(&self, component: usize) -> &[f64] {
        &self.z_x[component]
    }

    fn column(block: &[Vec<f64>], j: usize) -> Vec<f64> {
        block.iter().map(|c| c[j]).collect()
    }

    /// `(z, z_t, z_x)` at node `j`.
    pub fn node_vectors(&self, j: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (
            Self::column(&self.z, j),
            Self::column(&self.z_t, j),
            Self::column(&self.z_x, j),
        )
    }

    /// The phase vector at node `j` (10-dimensional fields only).
    pub fn phase_vector(&self, j: usize) -> Option<PhaseVector> {
        let z = Self::column(&self.z, j);
        <[f64; 10]>::try_from(z).ok().map(PhaseVector::from_array)
    }

    /// CSV with columns `x`, the components, then `<name>_t` and `<name>_x` blocks.
    pub fn write_csv<W: Write>(&self, names: &[&str], out: W) -> Result<()> {
        if names.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: names.len(),
            });
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x".to_string()];
        header.extend(names.iter().map(|n| n.to_string()));
        header.extend(names.iter().map(|n| format!("{n}_t")));
        header.extend(names.iter().map(|n| format!("{n}_x")));
        w.write_record(&header)?;
        for j in 0..self.grid.len() {
            let mut row = vec![fmt17(self.grid.node(j))];
            for block in [&self.z, &self.z_t, &self.z_x] {
                row.extend(block.iter().map(|c| fmt17(c[j])));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// 17 significant digits, enough for a lossless `f64` round-trip.
pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// How the lift treats fields with nonzero mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOptions {
    /// Reject fields whose mean exceeds [`MEAN_TOL`] (relative to the max-norm).
    /// When false, the potentials store the periodic part of the antiderivative
    /// while their `x`-derivatives keep the full field, so the residual of the
    /// first-order system is unaffected.
    pub strict_mean: bool,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self { strict_mean: true }
    }
}

fn check_len(grid: &PeriodicGrid, fields: &[&[f64]]) -> Result<()> {
    for f in fields {
        if f.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: f.len(),
            });
        }
    }
    Ok(())
}

fn potential_of(grid: &PeriodicGrid, f: &[f64], opts: &LiftOptions) -> Result<Vec<f64>> {
    if opts.strict_mean {
        grid.antideriv_with_tol(f, MEAN_TOL)
    } else {
        Ok(grid.antideriv_unchecked(f))
    }
}

/// Solves `(1 - beta d_xx) g = -d_x q` spectrally.
fn invert_bbm(grid: &PeriodicGrid, q: &[f64], beta: f64) -> Result<Vec<f64>> {
    let mut spec = grid.forward(q);
    for (j, c) in spec.iter_mut().enumerate() {
        let k = grid.wavenumbers()[j];
        let denom = 1.0 + beta * k * k;
        if denom.abs() < 1e-14 {
            return Err(Error::Unsupported(format!(
                "1 + b k^2 vanishes at resolved wavenumber k = {k}"
            )));
        }
        *c *= -grid.derivative_multiplier(j, 1) / denom;
    }
    Ok(grid.inverse(spec))
}

fn add(terms: &[&[f64]], weights: &[f64]) -> Vec<f64> {
    let n = terms[0].len();
    (0..n)
        .map(|j| terms.iter().zip(weights).map(|(t, w)| w * t[j]).sum())
        .collect()
}

/// Lifts `(eta, u)` and their time derivatives to the 10-dimensional phase field.
pub fn lift_state(
    s: &SystemCoefficients,
    grid: &PeriodicGrid,
    eta: &[f64],
    u: &[f64],
    eta_t: &[f64],
    u_t: &[f64],
) -> Result<PhaseField> {
    lift_state_with(s, grid, eta, u, eta_t, u_t, &LiftOptions::default())
}

pub fn lift_state_with(
    s: &SystemCoefficients,
    grid: &PeriodicGrid,
    eta: &[f64],
    u: &[f64],
    eta_t: &[f64],
    u_t: &[f64],
    opts: &LiftOptions,
) -> Result<PhaseField> {
    check_len(grid, &[eta, u, eta_t, u_t])?;
    let (d, nl) = (&s.disp, &s.nl);
    let n = grid.len();

    let phi1 = potential_of(grid, eta, opts)?;
    let phi2 = potential_of(grid, u, opts)?;
    // divergence form makes the time derivatives mean-free for genuine solutions
    let phi1_t = grid.antideriv_unchecked(eta_t);
    let phi2_t = grid.antideriv_unchecked(u_t);

    let eta_x = grid.diff(eta, 1);
    let u_x = grid.diff(u, 1);
    let eta_xx = grid.diff(eta, 2);
    let u_xx = grid.diff(u, 2);
    let eta_xt = grid.diff(eta_t, 1);
    let u_xt = grid.diff(u_t, 1);
    let eta_xxt = grid.diff(eta_t, 2);
    let u_xxt = grid.diff(u_t, 2);

    let quad_a: Vec<f64> = (0..n).map(|j| nl.quad_a(eta[j], u[j])).collect();
    let quad_b: Vec<f64> = (0..n).map(|j| nl.quad_b(eta[j], u[j])).collect();
    let a_t: Vec<f64> = (0..n)
        .map(|j| {
            let (ae, au) = nl.grad_a(eta[j], u[j]);
            ae * eta_t[j] + au * u_t[j]
        })
        .collect();
    let b_t: Vec<f64> = (0..n)
        .map(|j| {
            let (be, bu) = nl.grad_b(eta[j], u[j]);
            be * eta_t[j] + bu * u_t[j]
        })
        .collect();

    // second time derivatives from the time-differentiated equations
    let eta_tt = invert_bbm(grid, &add(&[u_t, &a_t, &u_xxt], &[1.0, 1.0, d.a]), d.b)?;
    let u_tt = invert_bbm(grid, &add(&[eta_t, &b_t, &eta_xxt], &[1.0, 1.0, d.c]), d.d)?;
    let eta_xtt = grid.diff(&eta_tt, 1);
    let u_xtt = grid.diff(&u_tt, 1);

    // p1 = u + A + phi1_t / 2 + a v2_x - b v1_t / 2 - b w1_x / 2
    let p1 = add(&[u, &quad_a, &phi1_t, &u_xx, &eta_xt], &[1.0, 1.0, 0.5, d.a, -d.b]);
    let p2 = add(&[eta, &quad_b, &phi2_t, &eta_xx, &u_xt], &[1.0, 1.0, 0.5, d.c, -d.d]);
    let p1_t = add(
        &[u_t, &a_t, &grid.antideriv_unchecked(&eta_tt), &u_xxt, &eta_xtt],
        &[1.0, 1.0, 0.5, d.a, -d.b],
    );
    let p2_t = add(
        &[eta_t, &b_t, &grid.antideriv_unchecked(&u_tt), &eta_xxt, &u_xtt],
        &[1.0, 1.0, 0.5, d.c, -d.d],
    );

    let mut z = vec![Vec::new(); 10];
    let mut z_t = vec![Vec::new(); 10];
    z[idx::ETA] = eta.to_vec();
    z[idx::PHI1] = phi1;
    z[idx::V1] = eta_x.clone();
    z[idx::W1] = eta_t.to_vec();
    z[idx::P1] = p1;
    z[idx::U] = u.to_vec();
    z[idx::PHI2] = phi2;
    z[idx::V2] = u_x.clone();
    z[idx::W2] = u_t.to_vec();
    z[idx::P2] = p2;

    z_t[idx::ETA] = eta_t.to_vec();
    z_t[idx::PHI1] = phi1_t;
    z_t[idx::V1] = eta_xt;
    z_t[idx::W1] = eta_tt;
    z_t[idx::P1] = p1_t;
    z_t[idx::U] = u_t.to_vec();
    z_t[idx::PHI2] = phi2_t;
    z_t[idx::V2] = u_xt;
    z_t[idx::W2] = u_tt;
    z_t[idx::P2] = p2_t;

    let mut z_x: Vec<Vec<f64>> = z.iter().map(|c| grid.diff(c, 1)).collect();
    // exact derivatives of the potentials, including any mean
    z_x[idx::PHI1] = eta.to_vec();
    z_x[idx::PHI2] = u.to_vec();

    PhaseField::new(grid.clone(), z, z_t, z_x)
}

/// Lifts a KdV–BBM state `u` with time derivative `u_t` to `(u, phi, v, w, p)`.
pub fn lift_kdvbbm(
    alpha_kb: f64,
    beta_kb: f64,
    grid: &PeriodicGrid,
    u: &[f64],
    u_t: &[f64],
    opts: &LiftOptions,
) -> Result<PhaseField> {
    check_len(grid, &[u, u_t])?;
    let n = grid.len();
    let phi = potential_of(grid, u, opts)?;
    let phi_t = grid.antideriv_unchecked(u_t);
    let u_x = grid.diff(u, 1);
    let u_xx = grid.diff(u, 2);
    let u_xt = grid.diff(u_t, 1);
    let u_xxt = grid.diff(u_t, 2);
    let half_u2: Vec<f64> = u.iter().map(|v| 0.5 * v * v).collect();
    let uu_t: Vec<f64> = (0..n).map(|j| u[j] * u_t[j]).collect();
    let u_tt = invert_bbm(grid, &add(&[&uu_t, &u_xxt], &[1.0, alpha_kb]), beta_kb)?;
    let u_xtt = grid.diff(&u_tt, 1);

    let p = add(&[&half_u2, &phi_t, &u_xx, &u_xt], &[1.0, 0.5, alpha_kb, -beta_kb]);
    let p_t = add(
        &[&uu_t, &grid.antideriv_unchecked(&u_tt), &u_xxt, &u_xtt],
        &[1.0, 0.5, alpha_kb, -beta_kb],
    );

    let z = vec![u.to_vec(), phi, u_x, u_t.to_vec(), p];
    let z_t = vec![u_t.to_vec(), phi_t, u_xt, u_tt, p_t];
    let mut z_x: Vec<Vec<f64>> = z.iter().map(|c| grid.diff(c, 1)).collect();
    z_x[1] = u.to_vec();
    PhaseField::new(grid.clone(), z, z_t, z_x)
}

fn check_dim(ms: &MSSystem, pf: &PhaseField) -> Result<()> {
    if ms.dim() != pf.dim() {
        return Err(Error::DimensionMismatch {
            expected: ms.dim(),
            found: pf.dim(),
        });
    }
    Ok(())
}

fn mat_vec(m: &nalgebra::DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per-node residual `K z_t + M z_x - grad S(z)`, component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MsResidual {
    pub components: Vec<Vec<f64>>,
    pub max_norm: f64,
}

pub fn ms_residual(ms: &MSSystem, pf: &PhaseField) -> Result<MsResidual> {
    check_dim(ms, pf)?;
    let dim = ms.dim();
    let mut components = vec![vec![0.0; pf.grid.len()]; dim];
    let mut max_norm = 0.0_f64;
    for j in 0..pf.grid.len() {
        let (z, z_t, z_x) = pf.node_vectors(j);
        let kzt = mat_vec(ms.k(), &z_t);
        let mzx = mat_vec(ms.m(), &z_x);
        let grad = ms.gradient(&z);
        for c in 0..dim {
            let r = kzt[c] + mzx[c] - grad[c];
            components[c][j] = r;
            max_norm = max_norm.max(r.abs());
        }
    }
    Ok(MsResidual {
        components,
        max_norm,
    })
}

/// Generalized energy and momentum densities with their fluxes.
#[derive(Debug, Clone, PartialEq)]
pub struct Densities {
    pub energy: Vec<f64>,
    pub energy_flux: Vec<f64>,
    pub momentum: Vec<f64>,
    pub momentum_flux: Vec<f64>,
}

pub fn conservation_densities(ms: &MSSystem, pf: &PhaseField) -> Result<Densities> {
    check_dim(ms, pf)?;
    let n = pf.grid.len();
    let mut out = Densities {
        energy: vec![0.0; n],
        energy_flux: vec![0.0; n],
        momentum: vec![0.0; n],
        momentum_flux: vec![0.0; n],
    };
    for j in 0..n {
        let (z, z_t, z_x) = pf.node_vectors(j);
        let s = ms.potential(&z);
        out.energy[j] = s - 0.5 * dot(&z, &mat_vec(ms.m(), &z_x));
        out.momentum[j] = 0.5 * dot(&z, &mat_vec(ms.k(), &z_x));
        out.energy_flux[j] = 0.5 * dot(&z, &mat_vec(ms.m(), &z_t));
        out.momentum_flux[j] = s - 0.5 * dot(&z, &mat_vec(ms.k(), &z_t));
    }
    Ok(out)
}

/// Pointwise balances `E_t + F_x` and `I_t + M_x`.
///
/// Time derivatives of the densities come from the chain rule with the
/// supplied `z_t` (and `d_x z_t` computed spectrally); fluxes are
/// differentiated spectrally, so the lift must be periodic (zero-mean gauge).
pub fn conservation_residuals(ms: &MSSystem, pf: &PhaseField) -> Result<(Vec<f64>, Vec<f64>)> {
    let dens = conservation_densities(ms, pf)?;
    let grid = &pf.grid;
    let z_xt: Vec<Vec<f64>> = pf.z_t.iter().map(|c| grid.diff(c, 1)).collect();
    let n = grid.len();
    let f_x = grid.diff(&dens.energy_flux, 1);
    let m_x = grid.diff(&dens.momentum_flux, 1);
    let mut energy = vec![0.0; n];
    let mut momentum = vec![0.0; n];
    for j in 0..n {
        let (z, z_t, z_x) = pf.node_vectors(j);
        let zxt: Vec<f64> = z_xt.iter().map(|c| c[j]).collect();
        let grad = ms.gradient(&z);
        let e_t = dot(&grad, &z_t)
            - 0.5 * dot(&z_t, &mat_vec(ms.m(), &z_x))
            - 0.5 * dot(&z, &mat_vec(ms.m(), &zxt));
        let i_t = 0.5 * dot(&z_t, &mat_vec(ms.k(), &z_x)) + 0.5 * dot(&z, &mat_vec(ms.k(), &zxt));
        energy[j] = e_t + f_x[j];
        momentum[j] = i_t + m_x[j];
    }
    Ok((energy, momentum))
}

impl MSSystem {
    /// Lifts `(eta, u)` with this system's coefficients.
    pub fn lift(
        &self,
        grid: &PeriodicGrid,
        eta: &[f64],
        u: &[f64],
        eta_t: &[f64],
        u_t: &[f64],
        opts: &LiftOptions,
    ) -> Result<PhaseField> {
        match self.source() {
            MsSource::Boussinesq(s) => lift_state_with(s, grid, eta, u, eta_t, u_t, opts),
            MsSource::KdvBbm { .. } => Err(Error::Unsupported(
                "KdV-BBM systems lift a single field; use lift_kdvbbm".into(),
            )),
        }
    }
}
