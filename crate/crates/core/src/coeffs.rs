//! Parameter space of the Boussinesq family
//!
//! ```text
//! eta_t + [u   + A(eta,u) + a u_xx   - b eta_xt]_x = 0
//! u_t   + [eta + B(eta,u) + c eta_xx - d u_xt  ]_x = 0
//! ```
//!
//! with homogeneous quadratic `A = a11 eta^2 + a12 eta u + a22 u^2` and
//! `B = b11 eta^2 + b12 eta u + b22 u^2`, plus the algebraic classification of
//! its multi-symplectic, symplectic and well-posedness structure.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for equality of real coefficients.
pub const DEFAULT_TOL: f64 = 1e-12;

/// The `(theta, nu, mu)` parametrization of `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaNuMu {
    pub theta: f64,
    pub nu: f64,
    #[serde(rename = "mu")]
    pub mu_disp: f64,
}

impl ThetaNuMu {
    pub fn new(theta: f64, nu: f64, mu_disp: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Domain(format!("theta must lie in [0, 1], got {theta}")));
        }
        if !(nu.is_finite() && mu_disp.is_finite()) {
            return Err(Error::Domain("nu and mu must be finite".into()));
        }
        Ok(Self { theta, nu, mu_disp })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl DispersionCoefficients {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite())
    }

    /// `(1 - a k^2) / (1 + b k^2)`.
    pub fn omega1(&self, k: f64) -> f64 {
        (1.0 - self.a * k * k) / (1.0 + self.b * k * k)
    }

    /// `(1 - c k^2) / (1 + d k^2)`.
    pub fn omega2(&self, k: f64) -> f64 {
        (1.0 - self.c * k * k) / (1.0 + self.d * k * k)
    }

    /// Linear dispersion relation `Omega(k)^2 = k^2 omega1 omega2`.
    pub fn frequency_squared(&self, k: f64) -> f64 {
        k * k * self.omega1(k) * self.omega2(k)
    }
}

/// Coefficients of the quadratic nonlinearities `A(eta, u)` and `B(eta, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NonlinearCoefficients {
    pub alpha11: f64,
    pub alpha12: f64,
    pub alpha22: f64,
    pub beta11: f64,
    pub beta12: f64,
    pub beta22: f64,
}

impl NonlinearCoefficients {
    fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.alpha11,
            self.alpha12,
            self.alpha22,
            self.beta11,
            self.beta12,
            self.beta22,
        ]
    }

    pub fn quad_a(&self, eta: f64, u: f64) -> f64 {
        self.alpha11 * eta * eta + self.alpha12 * eta * u + self.alpha22 * u * u
    }

    pub fn quad_b(&self, eta: f64, u: f64) -> f64 {
        self.beta11 * eta * eta + self.beta12 * eta * u + self.beta22 * u * u
    }

    /// `(dA/deta, dA/du)`.
    pub fn grad_a(&self, eta: f64, u: f64) -> (f64, f64) {
        (
            2.0 * self.alpha11 * eta + self.alpha12 * u,
            self.alpha12 * eta + 2.0 * self.alpha22 * u,
        )
    }

    /// `(dB/deta, dB/du)`.
    pub fn grad_b(&self, eta: f64, u: f64) -> (f64, f64) {
        (
            2.0 * self.beta11 * eta + self.beta12 * u,
            self.beta12 * eta + 2.0 * self.beta22 * u,
        )
    }

    /// Cubic potential `G` with `dG/du = A` and `dG/deta = B` when the
    /// symplectic identities hold.
    pub fn potential_g(&self, eta: f64, u: f64) -> f64 {
        self.beta11 / 3.0 * eta.powi(3)
            + 0.5 * self.beta12 * eta * eta * u
            + self.beta22 * eta * u * u
            + self.alpha22 / 3.0 * u.powi(3)
    }

    /// Sum of all six coefficients.
    pub fn sigma(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

/// One member of the family: dispersion plus nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemCoefficients {
    #[serde(flatten)]
    pub disp: DispersionCoefficients,
    #[serde(flatten)]
    pub nl: NonlinearCoefficients,
}

impl SystemCoefficients {
    pub fn new(disp: DispersionCoefficients, nl: NonlinearCoefficients) -> Self {
        Self { disp, nl }
    }

    pub fn validate(&self) -> Result<()> {
        if self.disp.is_finite() && self.nl.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain("coefficients must be finite".into()))
        }
    }
}

/// `a = (theta^2 - 1/3) nu / 2`, `b = (theta^2 - 1/3)(1 - nu) / 2`,
/// `c = (1 - theta^2) mu / 2`, `d = (1 - theta^2)(1 - mu) / 2`.
pub fn abcd_from_theta(p: &ThetaNuMu) -> Result<DispersionCoefficients> {
    let p = ThetaNuMu::new(p.theta, p.nu, p.mu_disp)?;
    let t2 = p.theta * p.theta;
    let upper = 0.5 * (t2 - 1.0 / 3.0);
    let lower = 0.5 * (1.0 - t2);
    Ok(DispersionCoefficients {
        a: upper * p.nu,
        b: upper * (1.0 - p.nu),
        c: lower * p.mu_disp,
        d: lower * (1.0 - p.mu_disp),
    })
}

/// Named algebraic conditions on the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "a=c")]
    AEqualsC,
    #[serde(rename = "alpha12=2*beta11")]
    Alpha12TwiceBeta11,
    #[serde(rename = "beta12=2*alpha22")]
    Beta12TwiceAlpha22,
    #[serde(rename = "b=d")]
    BEqualsD,
    #[serde(rename = "beta12=2*alpha11")]
    Beta12TwiceAlpha11,
    #[serde(rename = "alpha12=2*beta22")]
    Alpha12TwiceBeta22,
}

impl Condition {
    /// Conditions for a multi-symplectic formulation.
    pub const MULTISYMPLECTIC: [Condition; 3] = [
        Condition::AEqualsC,
        Condition::Alpha12TwiceBeta11,
        Condition::Beta12TwiceAlpha22,
    ];

    /// Conditions for the Hamiltonian formulation with the nonlocal operator.
    pub const SYMPLECTIC: [Condition; 3] = [
        Condition::BEqualsD,
        Condition::Beta12TwiceAlpha11,
        Condition::Alpha12TwiceBeta22,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::AEqualsC => "a=c",
            Condition::Alpha12TwiceBeta11 => "alpha12=2*beta11",
            Condition::Beta12TwiceAlpha22 => "beta12=2*alpha22",
            Condition::BEqualsD => "b=d",
            Condition::Beta12TwiceAlpha11 => "beta12=2*alpha11",
            Condition::Alpha12TwiceBeta22 => "alpha12=2*beta22",
        }
    }

    /// Signed defect `lhs - rhs` of the condition for `s`.
    pub fn defect(&self, s: &SystemCoefficients) -> f64 {
        let (d, n) = (&s.disp, &s.nl);
        match self {
            Condition::AEqualsC => d.a - d.c,
            Condition::Alpha12TwiceBeta11 => n.alpha12 - 2.0 * n.beta11,
            Condition::Beta12TwiceAlpha22 => n.beta12 - 2.0 * n.alpha22,
            Condition::BEqualsD => d.b - d.d,
            Condition::Beta12TwiceAlpha11 => n.beta12 - 2.0 * n.alpha11,
            Condition::Alpha12TwiceBeta22 => n.alpha12 - 2.0 * n.beta22,
        }
    }

    pub fn holds(&self, s: &SystemCoefficients, tol: f64) -> bool {
        self.defect(s).abs() <= tol
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub is_multisymplectic: bool,
    pub is_symplectic: bool,
    pub is_both: bool,
    pub violated_conditions: Vec<Condition>,
    pub tolerance_used: f64,
}

pub fn classify_structure(s: &SystemCoefficients, tol: f64) -> Result<StructureReport> {
    s.validate()?;
    if !(tol >= 0.0) {
        return Err(Error::Domain(format!("tolerance must be non-negative, got {tol}")));
    }
    let failing = |conds: &[Condition]| -> Vec<Condition> {
        conds.iter().copied().filter(|c| !c.holds(s, tol)).collect()
    };
    let ms_violated = failing(&Condition::MULTISYMPLECTIC);
    let sym_violated = failing(&Condition::SYMPLECTIC);
    let is_multisymplectic = ms_violated.is_empty();
    let is_symplectic = sym_violated.is_empty();
    Ok(StructureReport {
        is_multisymplectic,
        is_symplectic,
        is_both: is_multisymplectic && is_symplectic,
        violated_conditions: ms_violated.into_iter().chain(sym_violated).collect(),
        tolerance_used: tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearCase {
    L1,
    L2,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonlinearCase {
    N1,
    N2,
    N3,
    N4,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellPosednessReport {
    pub linear_case: LinearCase,
    pub symbol_order_ell: Option<i32>,
    pub sobolev_shifts: Option<(u32, u32)>,
    pub nonlinear_case: NonlinearCase,
}

/// Linear and local nonlinear well-posedness cases of the multi-symplectic
/// (`a = c`) family. Systems with `a != c` get `None` / `Unknown`.
pub fn classify_wellposedness(s: &SystemCoefficients, tol: f64) -> WellPosednessReport {
    let d = &s.disp;
    let eq = |x: f64, y: f64| (x - y).abs() <= tol;
    let pos = |x: f64| x > tol;
    let neg = |x: f64| x < -tol;
    let nonneg = |x: f64| x >= -tol;
    let zero = |x: f64| x.abs() <= tol;

    if !eq(d.a, d.c) || s.validate().is_err() {
        return WellPosednessReport {
            linear_case: LinearCase::None,
            symbol_order_ell: None,
            sobolev_shifts: None,
            nonlinear_case: NonlinearCase::Unknown,
        };
    }

    let linear_case = if nonneg(d.b) && nonneg(d.d) {
        LinearCase::L1
    } else if eq(d.b, d.d) && neg(d.b) && pos(d.a) {
        LinearCase::L2
    } else {
        LinearCase::None
    };

    // with a = c the factor (1 - a k^2) cancels: g(k) = sqrt((1 + d k^2) / (1 + b k^2))
    let (symbol_order_ell, sobolev_shifts) = if linear_case == LinearCase::None {
        (None, None)
    } else {
        let degree = |x: f64| if zero(x) { 0 } else { 1 };
        let ell = degree(d.d) - degree(d.b);
        (Some(ell), Some(((-ell).max(0) as u32, ell.max(0) as u32)))
    };

    let nonlinear_case = if pos(d.a) && zero(d.b) && zero(d.d) {
        NonlinearCase::N2
    } else if pos(d.b) && pos(d.d) {
        NonlinearCase::N1
    } else if zero(d.b) && pos(d.d) {
        NonlinearCase::N3
    } else if nonneg(d.a) && pos(d.b) && zero(d.d) {
        NonlinearCase::N4
    } else {
        NonlinearCase::Unknown
    };

    WellPosednessReport {
        linear_case,
        symbol_order_ell,
        sobolev_shifts,
        nonlinear_case,
    }
}
