use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::{SystemCoefficients, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::msform::fmt17;
use crate::spectralkit::PeriodicGrid;

/// Surface excursion `eta` and velocity `u` on a periodic grid at time `t`.
#[derive(Debug, Clone)]
pub struct FieldState {
    grid: PeriodicGrid,
    eta: Vec<f64>,
    u: Vec<f64>,
    t: f64,
}

impl FieldState {
    pub fn new(grid: PeriodicGrid, eta: Vec<f64>, u: Vec<f64>, t: f64) -> Result<Self> {
        for f in [&eta, &u] {
            if f.len() != grid.len() {
                return Err(Error::DimensionMismatch {
                    expected: grid.len(),
                    found: f.len(),
                });
            }
        }
        if !(t.is_finite() && eta.iter().chain(&u).all(|v| v.is_finite())) {
            return Err(Error::Domain("field state must be finite".into()));
        }
        Ok(Self { grid, eta, u, t })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn into_fields(self) -> (Vec<f64>, Vec<f64>) {
        (self.eta, self.u)
    }

    /// Snapshot as CSV with columns `x, eta, u`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "eta", "u"])?;
        for j in 0..self.grid.len() {
            w.write_record([fmt17(self.grid.node(j)), fmt17(self.eta[j]), fmt17(self.u[j])])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Quantities conserved by some members of the family.
///
/// `hamiltonian` and `impulse` are only defined when `b = d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedDiagnostics {
    pub t: f64,
    pub mass_eta: f64,
    pub mass_u: f64,
    pub l2: f64,
    pub hamiltonian: Option<f64>,
    pub impulse: Option<f64>,
}

pub fn diagnostics(s: &SystemCoefficients, state: &FieldState) -> ConservedDiagnostics {
    let g = &state.grid;
    let (eta, u) = (&state.eta, &state.u);
    let l2_density: Vec<f64> = eta.iter().zip(u).map(|(e, v)| e * e + v * v).collect();
    let mut out = ConservedDiagnostics {
        t: state.t,
        mass_eta: g.integrate(eta),
        mass_u: g.integrate(u),
        l2: g.integrate(&l2_density),
        hamiltonian: None,
        impulse: None,
    };
    let d = &s.disp;
    if (d.b - d.d).abs() <= DEFAULT_TOL {
        let eta_x = g.diff(eta, 1);
        let u_x = g.diff(u, 1);
        let h: Vec<f64> = (0..g.len())
            .map(|j| {
                l2_density[j] - d.c * eta_x[j] * eta_x[j] - d.a * u_x[j] * u_x[j]
                    + 2.0 * s.nl.potential_g(eta[j], u[j])
            })
            .collect();
        let imp: Vec<f64> = (0..g.len())
            .map(|j| eta[j] * u[j] + d.b * eta_x[j] * u_x[j])
            .collect();
        out.hamiltonian = Some(0.5 * g.integrate(&h));
        out.impulse = Some(g.integrate(&imp));
    }
    out
}

/// Diagnostics time series as CSV (`t, mass_eta, mass_u, l2, hamiltonian, impulse`);
/// undefined entries are left empty.
pub fn write_diagnostics_csv<W: Write>(rows: &[ConservedDiagnostics], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "mass_eta", "mass_u", "l2", "hamiltonian", "impulse"])?;
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    for r in rows {
        w.write_record([
            fmt17(r.t),
            fmt17(r.mass_eta),
            fmt17(r.mass_u),
            fmt17(r.l2),
            opt(r.hamiltonian),
            opt(r.impulse),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Spectral form of the right-hand side with the symbols precomputed.
pub(crate) struct Tendency {
    grid: PeriodicGrid,
    s: SystemCoefficients,
    // -ik / (1 + b k^2), -ik / (1 + d k^2), Nyquist zeroed
    eta_symbol: Vec<Complex64>,
    u_symbol: Vec<Complex64>,
    k2: Vec<f64>,
}

impl Tendency {
    pub(crate) fn new(s: &SystemCoefficients, grid: &PeriodicGrid) -> Result<Self> {
        s.validate()?;
        if s.disp.b < 0.0 || s.disp.d < 0.0 {
            return Err(Error::Unsupported(format!(
                "time integration needs b >= 0 and d >= 0 (got b = {}, d = {})",
                s.disp.b, s.disp.d
            )));
        }
        let n = grid.len();
        let mut eta_symbol = Vec::with_capacity(n);
        let mut u_symbol = Vec::with_capacity(n);
        let mut k2 = Vec::with_capacity(n);
        for (j, &k) in grid.wavenumbers().iter().enumerate() {
            let ik = grid.derivative_multiplier(j, 1);
            eta_symbol.push(-ik / (1.0 + s.disp.b * k * k));
            u_symbol.push(-ik / (1.0 + s.disp.d * k * k));
            k2.push(k * k);
        }
        Ok(Self {
            grid: grid.clone(),
            s: *s,
            eta_symbol,
            u_symbol,
            k2,
        })
    }

    pub(crate) fn eval(&self, eta: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let mut eta_hat = g.forward(eta);
        let mut u_hat = g.forward(u);
        let (lin_eta, lin_u) = (eta_hat.clone(), u_hat.clone());
        g.truncate(&mut eta_hat);
        g.truncate(&mut u_hat);
        let eta_l = g.inverse(eta_hat);
        let u_l = g.inverse(u_hat);
        let nl = &self.s.nl;
        let quad_a: Vec<f64> = eta_l.iter().zip(&u_l).map(|(&e, &v)| nl.quad_a(e, v)).collect();
        let quad_b: Vec<f64> = eta_l.iter().zip(&u_l).map(|(&e, &v)| nl.quad_b(e, v)).collect();
        let mut qa = g.forward(&quad_a);
        let mut qb = g.forward(&quad_b);
        g.truncate(&mut qa);
        g.truncate(&mut qb);
        let (a, c) = (self.s.disp.a, self.s.disp.c);
        let mut eta_t = Vec::with_capacity(g.len());
        let mut u_t = Vec::with_capacity(g.len());
        for j in 0..g.len() {
            let flux_eta = lin_u[j] + qa[j] - a * self.k2[j] * lin_u[j];
            let flux_u = lin_eta[j] + qb[j] - c * self.k2[j] * lin_eta[j];
            eta_t.push(self.eta_symbol[j] * flux_eta);
            u_t.push(self.u_symbol[j] * flux_u);
        }
        (g.inverse(eta_t), g.inverse(u_t))
    }
}

/// Time derivatives `(eta_t, u_t)` of the system at `state`, with the
/// quadratic products dealiased by the 2/3 rule.
pub fn rhs(s: &SystemCoefficients, state: &FieldState) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(Tendency::new(s, &state.grid)?.eval(&state.eta, &state.u))
}
