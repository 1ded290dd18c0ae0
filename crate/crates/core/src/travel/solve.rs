use std::f64::consts::PI;
use std::io::Write;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::msform::fmt17;
use crate::spectralkit::linalg::solve_dense;
use crate::spectralkit::newton::max_norm;
use crate::spectralkit::{newton, Continuation, NewtonOptions, NewtonProblem, PeriodicGrid};

use super::setup::{
    eigen_classify, leading_decay_rate, normal_form_constants, TravelingWaveSetup, WaveClass,
};

/// Traveling-wave profiles `(zeta_s, u_s)` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePair {
    pub grid: PeriodicGrid,
    pub zeta: Vec<f64>,
    pub u: Vec<f64>,
    pub c_s: f64,
    /// Max-norm of the discrete profile-equation residual.
    pub residual_norm: f64,
    /// Max `|zeta|` over `|x| >= 0.9 L`; generalized waves only.
    pub tail_amplitude: Option<f64>,
    pub iterations: usize,
}

impl ProfilePair {
    pub fn amplitude_zeta(&self) -> f64 {
        self.zeta.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }

    pub fn amplitude_u(&self) -> f64 {
        self.u.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }

    /// `max |f(x) - f(-x)|` over both profiles.
    pub fn evenness_defect(&self) -> f64 {
        let n = self.grid.len();
        (0..n)
            .map(|j| {
                let m = (n - j) % n;
                (self.zeta[j] - self.zeta[m]).abs().max((self.u[j] - self.u[m]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Largest value at the domain ends `x = -L`.
    pub fn end_value(&self) -> f64 {
        self.zeta[0].abs().max(self.u[0].abs())
    }

    /// CSV with columns `x, zeta, u`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "zeta", "u"])?;
        for j in 0..self.grid.len() {
            w.write_record([
                fmt17(self.grid.node(j)),
                fmt17(self.zeta[j]),
                fmt17(self.u[j]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Samples the profiles on the coarser grid obtained by keeping every
    /// `factor`-th node (same domain).
    pub fn subsample(&self, factor: usize) -> Result<ProfilePair> {
        let n = self.grid.len();
        if factor == 0 || n % factor != 0 {
            return Err(Error::Input(format!("cannot subsample {n} nodes by {factor}")));
        }
        let grid = PeriodicGrid::new(self.grid.half_length(), n / factor)?;
        let pick = |f: &[f64]| f.iter().step_by(factor).copied().collect::<Vec<_>>();
        let zeta = pick(&self.zeta);
        let u = pick(&self.u);
        Ok(ProfilePair {
            grid,
            zeta,
            u,
            c_s: self.c_s,
            residual_norm: f64::NAN,
            tail_amplitude: self.tail_amplitude,
            iterations: self.iterations,
        })
    }
}

fn profile_residual_parts(grid: &PeriodicGrid, zeta: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (grid.diff(zeta, 2), grid.diff(u, 2))
}

/// Pointwise residuals of the integrated profile equations
/// `-c zeta + u + A + a u'' + b c zeta'' = 0` and
/// `-c u + zeta + B + a zeta'' + d c u'' = 0`.
pub fn profile_residual(
    setup: &TravelingWaveSetup,
    grid: &PeriodicGrid,
    zeta: &[f64],
    u: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let (d, nl) = (&setup.coeffs.disp, &setup.coeffs.nl);
    let c = setup.c_s;
    let (zeta_xx, u_xx) = profile_residual_parts(grid, zeta, u);
    let n = grid.len();
    let mut r1 = vec![0.0; n];
    let mut r2 = vec![0.0; n];
    for j in 0..n {
        let (z, v) = (zeta[j], u[j]);
        r1[j] = -c * z + v + nl.quad_a(z, v) + d.a * u_xx[j] + d.b * c * zeta_xx[j];
        r2[j] = -c * v + z + nl.quad_b(z, v) + d.a * zeta_xx[j] + d.d * c * u_xx[j];
    }
    (r1, r2)
}

pub fn profile_residual_norm(setup: &TravelingWaveSetup, grid: &PeriodicGrid, zeta: &[f64], u: &[f64]) -> f64 {
    let (r1, r2) = profile_residual(setup, grid, zeta, u);
    max_norm(&r1).max(max_norm(&r2))
}

/// Even-symmetric collocation problem; unknowns are nodes `0..=n/2` of each field.
struct EvenProfileProblem<'a> {
    setup: TravelingWaveSetup,
    grid: &'a PeriodicGrid,
    stencil: Vec<f64>,
}

impl<'a> EvenProfileProblem<'a> {
    fn new(setup: TravelingWaveSetup, grid: &'a PeriodicGrid) -> Self {
        Self {
            setup,
            grid,
            stencil: grid.derivative_stencil(2),
        }
    }

    fn half(&self) -> usize {
        self.grid.len() / 2 + 1
    }

    fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let n = self.grid.len();
        (0..n).map(|j| reduced[j.min(n - j)]).collect()
    }

    fn reduce(&self, full: &[f64]) -> Vec<f64> {
        full[..self.half()].to_vec()
    }

    fn split(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.half();
        (self.expand(&x[..m]), self.expand(&x[m..]))
    }

    fn pack(&self, zeta: &[f64], u: &[f64]) -> Vec<f64> {
        let mut x = self.reduce(zeta);
        x.extend(self.reduce(u));
        x
    }

    /// Reduced second-derivative matrix entry: row node `i`, unknown `m`.
    fn d2(&self, i: usize, m: usize) -> f64 {
        let n = self.grid.len();
        let st = &self.stencil;
        let direct = st[(i + n - m) % n];
        if m == 0 || m == n / 2 {
            direct
        } else {
            direct + st[(i + m) % n]
        }
    }
}

impl NewtonProblem for EvenProfileProblem<'_> {
    fn residual(&mut self, x: &[f64]) -> Vec<f64> {
        let (zeta, u) = self.split(x);
        let (r1, r2) = profile_residual(&self.setup, self.grid, &zeta, &u);
        self.pack(&r1, &r2)
    }

    fn solve_linearized(&mut self, x: &[f64], r: &[f64]) -> Result<Vec<f64>> {
        let (d, nl) = (&self.setup.coeffs.disp, &self.setup.coeffs.nl);
        let c = self.setup.c_s;
        let m = self.half();
        let (zeta, u) = self.split(x);
        let grads: Vec<((f64, f64), (f64, f64))> = (0..m)
            .map(|i| (nl.grad_a(zeta[i], u[i]), nl.grad_b(zeta[i], u[i])))
            .collect();
        // coefficient of D2 in each block
        let dcoef = [[d.b * c, d.a], [d.a, d.d * c]];
        let jac = Mat::<f64>::from_fn(2 * m, 2 * m, |row, col| {
            let (rb, i) = (row / m, row % m);
            let (cb, k) = (col / m, col % m);
            let mut v = dcoef[rb][cb] * self.d2(i, k);
            if i == k {
                let ((a_z, a_u), (b_z, b_u)) = grads[i];
                v += match (rb, cb) {
                    (0, 0) => -c + a_z,
                    (0, 1) => 1.0 + a_u,
                    (1, 0) => 1.0 + b_z,
                    _ => -c + b_u,
                };
            }
            v
        });
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        solve_dense(&jac, &rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub newton: NewtonOptions,
    /// Accepted residual max-norm.
    pub residual_tol: f64,
    /// Accepted profile magnitude at the domain ends (classical waves).
    pub decay_tol: f64,
    /// Continuation steps used when the direct solve fails.
    pub continuation_steps: usize,
    pub max_halvings: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            newton: NewtonOptions::default(),
            residual_tol: 1e-10,
            decay_tol: 1e-8,
            continuation_steps: 4,
            max_halvings: 5,
        }
    }
}

/// Default half-length `50 / sqrt(c_s - 1)`.
pub fn default_half_length(c_s: f64) -> f64 {
    50.0 / (c_s - 1.0).sqrt()
}

pub fn default_grid(c_s: f64, n: usize) -> Result<PeriodicGrid> {
    if c_s <= 1.0 {
        return Err(Error::NoBifurcation { c_s });
    }
    PeriodicGrid::new(default_half_length(c_s), n)
}

/// `A sech^2(kappa x / 2)` in both fields.
pub fn leading_order_guess(setup: &TravelingWaveSetup, grid: &PeriodicGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let nf = normal_form_constants(&setup.coeffs, setup.coeffs.disp.a);
    let amp = nf.leading_amplitude(setup.c_s)?;
    let kappa = leading_decay_rate(setup)
        .ok_or_else(|| Error::Unsupported("leading-order decay rate undefined".into()))?;
    let f = grid.sample(|x| amp / (0.5 * kappa * x).cosh().powi(2));
    Ok((f.clone(), f))
}

fn check_regime(setup: &TravelingWaveSetup, expected: WaveClass) -> Result<()> {
    if setup.c_s <= 1.0 {
        return Err(Error::NoBifurcation { c_s: setup.c_s });
    }
    let found = eigen_classify(setup)?.classification;
    if found != expected {
        return Err(Error::WrongSolver {
            expected: expected.as_str(),
            found: found.as_str(),
        });
    }
    Ok(())
}

fn newton_profile(
    setup: &TravelingWaveSetup,
    grid: &PeriodicGrid,
    zeta: &[f64],
    u: &[f64],
    opts: &SolveOptions,
) -> Result<ProfilePair> {
    let mut problem = EvenProfileProblem::new(*setup, grid);
    let x0 = problem.pack(zeta, u);
    let out = newton(&mut problem, x0, &opts.newton)?;
    let (zeta, u) = problem.split(&out.solution);
    let residual_norm = profile_residual_norm(setup, grid, &zeta, &u);
    Ok(ProfilePair {
        grid: grid.clone(),
        zeta,
        u,
        c_s: setup.c_s,
        residual_norm,
        tail_amplitude: None,
        iterations: out.iterations,
    })
}

fn accept_classical(p: ProfilePair, opts: &SolveOptions) -> Result<ProfilePair> {
    if p.residual_norm > opts.residual_tol {
        return Err(Error::Convergence {
            iterations: p.iterations,
            residual: p.residual_norm,
            last: None,
        });
    }
    if p.amplitude_zeta() <= 1e3 * opts.decay_tol {
        return Err(Error::Convergence {
            iterations: p.iterations,
            residual: p.residual_norm,
            last: Some(p.zeta),
        });
    }
    if p.end_value() > opts.decay_tol {
        return Err(Error::Domain(format!(
            "profile does not decay at the domain ends ({:e}); enlarge L",
            p.end_value()
        )));
    }
    Ok(p)
}

/// Classical solitary wave, homoclinic to zero.
pub fn solve_classical(
    setup: &TravelingWaveSetup,
    grid: &PeriodicGrid,
    init: Option<&ProfilePair>,
) -> Result<ProfilePair> {
    solve_classical_with(setup, grid, init, &SolveOptions::default())
}

pub fn solve_classical_with(
    setup: &TravelingWaveSetup,
    grid: &PeriodicGrid,
    init: Option<&ProfilePair>,
    opts: &SolveOptions,
) -> Result<ProfilePair> {
    check_regime(setup, WaveClass::Class)?;
    let sigma = setup.coeffs.nl.sigma();
    if sigma <= 0.0 {
        return Err(Error::NonlinearitySign { sigma });
    }
    let (zeta0, u0) = match init {
        Some(p) if p.grid == *grid => (p.zeta.clone(), p.u.clone()),
        Some(_) => return Err(Error::Input("initial profile lives on a different grid".into())),
        None => leading_order_guess(setup, grid)?,
    };
    let direct = newton_profile(setup, grid, &zeta0, &u0, opts).and_then(|p| accept_classical(p, opts));
    match direct {
        Ok(p) => Ok(p),
        Err(first_err) => {
            // continue in c_s from a speed closer to the bifurcation point
            let start = 1.0 + 0.25 * setup.mu_speed();
            let start_setup = setup.with_speed(start)?;
            let (z, u) = leading_order_guess(&start_setup, grid)?;
            let Ok(first) = newton_profile(&start_setup, grid, &z, &u, opts) else {
                return Err(first_err);
            };
            let cont = Continuation {
                start,
                target: setup.c_s,
                steps: opts.continuation_steps,
                max_halvings: opts.max_halvings,
            };
            let p = cont.run(first, |c, prev| {
                newton_profile(&setup.with_speed(c)?, grid, &prev.zeta, &prev.u, opts)
            })?;
            accept_classical(p, opts)
        }
    }
}

/// Half-length near `approx` placing the tail wavenumber `k_tail` midway
/// between two resolved even modes, which keeps the collocation Jacobian
/// away from the resonance.
pub fn off_resonant_half_length(approx: f64, k_tail: f64) -> f64 {
    let m = (approx * k_tail / PI - 0.5).round().max(0.0);
    (m + 0.5) * PI / k_tail
}

/// Modulus of the purely imaginary eigenvalue pair of the linearization.
pub fn tail_wavenumber(setup: &TravelingWaveSetup) -> Result<f64> {
    let rep = eigen_classify(setup)?;
    rep.eigenvalues
        .iter()
        .find(|l| l.re.abs() <= 1e-9 * (1.0 + l.norm()) && l.im.abs() > 0.0)
        .map(|l| l.im.abs())
        .ok_or_else(|| Error::WrongSolver {
            expected: WaveClass::Gen.as_str(),
            found: rep.classification.as_str(),
        })
}

/// Grid for a generalized wave with half-length near `approx_half_length`.
pub fn generalized_grid(setup: &TravelingWaveSetup, approx_half_length: f64, n: usize) -> Result<PeriodicGrid> {
    let k = tail_wavenumber(setup)?;
    PeriodicGrid::new(off_resonant_half_length(approx_half_length, k), n)
}

fn tail_amplitude(grid: &PeriodicGrid, zeta: &[f64]) -> f64 {
    let l = grid.half_length();
    (0..grid.len())
        .filter(|&j| grid.node(j).abs() >= 0.9 * l)
        .map(|j| zeta[j].abs())
        .fold(0.0, f64::max)
}

/// Wavenumber of the oscillatory tail, from the zero crossings of
/// `zeta - mean` over `0.4 L <= x < L`.
pub fn measure_tail_wavenumber(p: &ProfilePair) -> Option<f64> {
    let grid = &p.grid;
    let h = grid.spacing();
    let l = grid.half_length();
    let vals: Vec<f64> = (0..grid.len())
        .filter(|&j| grid.node(j) >= 0.4 * l)
        .map(|j| p.zeta[j])
        .collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let mut crossings = Vec::new();
    for s in 0..vals.len() - 1 {
        let (f0, f1) = (vals[s] - mean, vals[s + 1] - mean);
        if f0 == 0.0 || f0 * f1 < 0.0 {
            crossings.push(s as f64 * h + h * f0 / (f0 - f1));
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(PI * (crossings.len() - 1) as f64 / span)
}

/// Generalized solitary wave, homoclinic to a periodic ripple. Best effort:
/// on failure the error carries the last iterate.
pub fn solve_generalized(
    setup: &TravelingWaveSetup,
    grid: &PeriodicGrid,
    init: Option<&ProfilePair>,
) -> Result<ProfilePair> {
    solve_generalized_with(setup, grid, init, &SolveOptions {
        residual_tol: 1e-8,
        ..Default::default()
    })
}

pub fn solve_generalized_with(
    setup: &TravelingWaveSetup,
    grid: &PeriodicGrid,
    init: Option<&ProfilePair>,
    opts: &SolveOptions,
) -> Result<ProfilePair> {
    check_regime(setup, WaveClass::Gen)?;
    let (zeta0, u0) = match init {
        Some(p) if p.grid == *grid => (p.zeta.clone(), p.u.clone()),
        Some(_) => return Err(Error::Input("initial profile lives on a different grid".into())),
        None => leading_order_guess(setup, grid)?,
    };
    let mut p = newton_profile(setup, grid, &zeta0, &u0, opts)?;
    if p.residual_norm > opts.residual_tol || p.amplitude_zeta() <= 1e-6 {
        return Err(Error::Convergence {
            iterations: p.iterations,
            residual: p.residual_norm,
            last: Some(p.zeta),
        });
    }
    p.tail_amplitude = Some(tail_amplitude(grid, &p.zeta));
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub c_s: f64,
    pub amp_zeta: f64,
    pub amp_u: f64,
    pub residual: f64,
    /// `ok` or the error message.
    pub status: String,
}

impl CurveRow {
    pub fn converged(&self) -> bool {
        self.status == "ok"
    }
}

/// One classical solve per speed on a shared grid, each continued from the
/// previous converged profile. Failed speeds yield marked rows.
pub fn speed_amplitude_curve(
    setup: &TravelingWaveSetup,
    speeds: &[f64],
    grid: &PeriodicGrid,
) -> Vec<CurveRow> {
    let mut prev: Option<ProfilePair> = None;
    speeds
        .iter()
        .map(|&c_s| {
            let result = setup.with_speed(c_s).and_then(|st| {
                match prev.as_ref() {
                    Some(p) => solve_classical(&st, grid, Some(p)).or_else(|_| solve_classical(&st, grid, None)),
                    None => solve_classical(&st, grid, None),
                }
            });
            match result {
                Ok(p) => {
                    let row = CurveRow {
                        c_s,
                        amp_zeta: p.amplitude_zeta(),
                        amp_u: p.amplitude_u(),
                        residual: p.residual_norm,
                        status: "ok".into(),
                    };
                    prev = Some(p);
                    row
                }
                Err(e) => CurveRow {
                    c_s,
                    amp_zeta: f64::NAN,
                    amp_u: f64::NAN,
                    residual: match e {
                        Error::Convergence { residual, .. } => residual,
                        _ => f64::NAN,
                    },
                    status: e.to_string(),
                },
            }
        })
        .collect()
}

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["c_s", "amp_zeta", "amp_u", "residual", "status"])?;
    for r in rows {
        w.write_record([
            fmt17(r.c_s),
            fmt17(r.amp_zeta),
            fmt17(r.amp_u),
            fmt17(r.residual),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
