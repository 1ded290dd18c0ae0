use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::{SystemCoefficients, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Smallest `|D|` accepted before the first-order reformulation is declared degenerate.
pub const DFRAK_TOL: f64 = 1e-12;

/// Traveling-wave problem for speed `c_s` with coefficients satisfying `a = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelingWaveSetup {
    pub coeffs: SystemCoefficients,
    pub c_s: f64,
}

impl TravelingWaveSetup {
    pub fn new(coeffs: SystemCoefficients, c_s: f64) -> Result<Self> {
        coeffs.validate()?;
        if !(c_s.is_finite() && c_s > 0.0) {
            return Err(Error::Domain(format!("speed must be positive, got {c_s}")));
        }
        if (coeffs.disp.a - coeffs.disp.c).abs() > DEFAULT_TOL {
            return Err(Error::Domain(format!(
                "traveling-wave analysis requires a = c, got a = {}, c = {}",
                coeffs.disp.a, coeffs.disp.c
            )));
        }
        Ok(Self { coeffs, c_s })
    }

    pub fn with_speed(&self, c_s: f64) -> Result<Self> {
        Self::new(self.coeffs, c_s)
    }

    /// `c_s - 1`.
    pub fn mu_speed(&self) -> f64 {
        self.c_s - 1.0
    }

    /// `b d c_s^2 - a^2`.
    pub fn dfrak(&self) -> f64 {
        let d = &self.coeffs.disp;
        d.b * d.d * self.c_s * self.c_s - d.a * d.a
    }

    fn checked_dfrak(&self) -> Result<f64> {
        let dfrak = self.dfrak();
        if dfrak.abs() <= DFRAK_TOL {
            Err(Error::Degenerate { dfrak })
        } else {
            Ok(dfrak)
        }
    }
}

/// Linear part of `U' = L U + R(U)` for `U = (zeta, zeta', u, u')`.
pub fn build_linearization(setup: &TravelingWaveSetup) -> Result<Matrix4<f64>> {
    let dfrak = setup.checked_dfrak()?;
    let d = &setup.coeffs.disp;
    let c = setup.c_s;
    #[rustfmt::skip]
    let l = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        (d.d * c * c + d.a) / dfrak, 0.0, -c * (d.a + d.d) / dfrak, 0.0,
        0.0, 0.0, 0.0, 1.0,
        -c * (d.a + d.b) / dfrak, 0.0, (d.b * c * c + d.a) / dfrak, 0.0,
    );
    Ok(l)
}

/// Quadratic part `R(U)`; only components 2 and 4 are nonzero.
pub fn nonlinear_term(setup: &TravelingWaveSetup, u: &Vector4<f64>) -> Result<Vector4<f64>> {
    let dfrak = setup.checked_dfrak()?;
    let (d, nl) = (&setup.coeffs.disp, &setup.coeffs.nl);
    let c = setup.c_s;
    let qa = nl.quad_a(u[0], u[2]);
    let qb = nl.quad_b(u[0], u[2]);
    Ok(Vector4::new(
        0.0,
        (-d.d * c * qa + d.a * qb) / dfrak,
        0.0,
        (-d.b * c * qb + d.a * qa) / dfrak,
    ))
}

/// Full vector field `T(U) = L U + R(U)`.
pub fn vector_field(setup: &TravelingWaveSetup, u: &Vector4<f64>) -> Result<Vector4<f64>> {
    Ok(build_linearization(setup)? * u + nonlinear_term(setup, u)?)
}

/// Reversor `diag(1, -1, 1, -1)`.
pub fn reversor() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, -1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveClass {
    /// Four distinct nonzero real eigenvalues.
    Class,
    /// One real pair and one purely imaginary pair.
    Gen,
    Degenerate,
    /// Purely imaginary spectrum: no hyperbolic direction for a pulse to decay along.
    NoWave,
}

impl WaveClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            WaveClass::Class => "Class",
            WaveClass::Gen => "Gen",
            WaveClass::Degenerate => "Degenerate",
            WaveClass::NoWave => "NoWave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Table1Label {
    Class,
    Gen,
    Unlisted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub classification: WaveClass,
    pub table1_prediction: Table1Label,
    /// `max_i min_j |lambda_i + lambda_j|`; zero for an exact `+-` pairing.
    pub pairing_defect: f64,
}

fn threshold(l: &Complex64) -> f64 {
    1e-9 * (1.0 + l.norm())
}

fn is_real(l: &Complex64) -> bool {
    l.im.abs() <= threshold(l)
}

fn is_imaginary(l: &Complex64) -> bool {
    l.re.abs() <= threshold(l)
}

fn is_zero(l: &Complex64) -> bool {
    l.norm() <= threshold(l)
}

fn classify_spectrum(eigs: &[Complex64]) -> WaveClass {
    if eigs.iter().any(is_zero) {
        return WaveClass::Degenerate;
    }
    let real = eigs.iter().filter(|l| is_real(l)).count();
    let imag = eigs.iter().filter(|l| is_imaginary(l)).count();
    let distinct = (0..eigs.len()).all(|i| {
        (i + 1..eigs.len()).all(|j| (eigs[i] - eigs[j]).norm() > threshold(&eigs[i]))
    });
    match (real, imag) {
        (4, 0) if distinct => WaveClass::Class,
        (2, 2) => WaveClass::Gen,
        (0, 4) => WaveClass::NoWave,
        _ => WaveClass::Degenerate,
    }
}

/// Symbolic prediction from the sign pattern of `(a, b, d, bd - a^2)`.
pub fn table1_prediction(s: &SystemCoefficients, tol: f64) -> Table1Label {
    let d = &s.disp;
    let (a, b, dd) = (d.a, d.b, d.d);
    let disc = b * dd - a * a;
    let pos = |x: f64| x > tol;
    let neg = |x: f64| x < -tol;
    let zero = |x: f64| x.abs() <= tol;
    if (a - d.c).abs() > tol {
        return Table1Label::Unlisted;
    }
    let rows: [(bool, Table1Label); 9] = [
        (pos(a) && zero(b) && zero(dd), Table1Label::Gen),
        (neg(a) && zero(b) && pos(dd), Table1Label::Gen),
        (pos(a) && zero(dd) && pos(b), Table1Label::Gen),
        (neg(a) && pos(b) && pos(dd) && pos(disc), Table1Label::Class),
        (neg(a) && pos(b) && pos(dd) && neg(disc), Table1Label::Gen),
        (pos(a) && pos(b) && pos(dd) && pos(disc), Table1Label::Class),
        (pos(a) && pos(b) && pos(dd) && neg(disc), Table1Label::Gen),
        (pos(a) && (b - dd).abs() <= tol && neg(b), Table1Label::Gen),
        (zero(a) && pos(b) && pos(dd), Table1Label::Class),
    ];
    rows.iter()
        .find(|(hit, _)| *hit)
        .map(|(_, label)| *label)
        .unwrap_or(Table1Label::Unlisted)
}

pub fn eigen_classify(setup: &TravelingWaveSetup) -> Result<EigenReport> {
    let l = build_linearization(setup)?;
    // nalgebra's unbounded Schur loop can cycle on these sparse matrices
    let m = faer::Mat::from_fn(4, 4, |i, j| l[(i, j)]);
    let mut eigenvalues: Vec<Complex64> = m
        .eigenvalues()
        .map_err(|_| Error::Unsupported("eigenvalue iteration did not converge".into()))?
        .into_iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    eigenvalues.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let pairing_defect = eigenvalues
        .iter()
        .map(|x| {
            eigenvalues
                .iter()
                .map(|y| (x + y).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(EigenReport {
        classification: classify_spectrum(&eigenvalues),
        table1_prediction: table1_prediction(&setup.coeffs, DEFAULT_TOL),
        eigenvalues,
        pairing_defect,
    })
}

/// Squared eigenvalues from the `2 x 2` block acting on `(zeta, u)`: the
/// linearization only couples positions to second derivatives.
pub fn squared_eigenvalues(setup: &TravelingWaveSetup) -> Result<[Complex64; 2]> {
    let l = build_linearization(setup)?;
    let b = Matrix2::new(l[(1, 0)], l[(1, 2)], l[(3, 0)], l[(3, 2)]);
    let ev = b.complex_eigenvalues();
    Ok([ev[0], ev[1]])
}

/// Quantities of the normal-form reduction near `c_s = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormConstants {
    /// Sum of the six nonlinear coefficients.
    pub sigma: f64,
    /// `1/a`, defined for `a > 0`.
    pub c10: Option<f64>,
    /// `-sigma / (2a)`, defined for `a > 0`.
    pub c20: Option<f64>,
}

pub fn normal_form_constants(s: &SystemCoefficients, a: f64) -> NormalFormConstants {
    let sigma = s.nl.sigma();
    let (c10, c20) = if a > 0.0 {
        (Some(1.0 / a), Some(-sigma / (2.0 * a)))
    } else {
        (None, None)
    };
    NormalFormConstants { sigma, c10, c20 }
}

impl NormalFormConstants {
    pub fn c10(&self) -> Result<f64> {
        self.c10
            .ok_or_else(|| Error::Domain("c10 requires a > 0".into()))
    }

    pub fn c20(&self) -> Result<f64> {
        self.c20
            .ok_or_else(|| Error::Domain("c20 requires a > 0".into()))
    }

    /// Leading-order solitary-wave amplitude `3 (c_s - 1) / sigma`.
    ///
    /// Projecting the profile equations on the kernel direction `(1, 1)` at
    /// `c_s = 1` gives `v'' = (2 mu v - sigma v^2) / (2a + (b + d) c_s)`, whose
    /// homoclinic orbit `v = (3 mu / sigma) sech^2(kappa x / 2)` has this maximum.
    pub fn leading_amplitude(&self, c_s: f64) -> Result<f64> {
        if self.sigma <= 0.0 {
            return Err(Error::NonlinearitySign { sigma: self.sigma });
        }
        Ok(3.0 * (c_s - 1.0) / self.sigma)
    }
}

/// Decay rate `kappa = sqrt(2 mu / (2a + (b + d) c_s))` of the leading-order pulse.
pub fn leading_decay_rate(setup: &TravelingWaveSetup) -> Option<f64> {
    let d = &setup.coeffs.disp;
    let denom = 2.0 * d.a + (d.b + d.d) * setup.c_s;
    let ratio = 2.0 * setup.mu_speed() / denom;
    (ratio > 0.0).then(|| ratio.sqrt())
}
