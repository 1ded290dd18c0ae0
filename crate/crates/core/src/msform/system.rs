use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coeffs::{classify_structure, SystemCoefficients, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Component names of the 10-dimensional Boussinesq phase vector, in order.
pub const BOUSSINESQ_COMPONENTS: [&str; 10] =
    ["eta", "phi1", "v1", "w1", "p1", "u", "phi2", "v2", "w2", "p2"];

/// Component names of the 5-dimensional KdV–BBM phase vector, in order.
pub const KDVBBM_COMPONENTS: [&str; 5] = ["u", "phi", "v", "w", "p"];

/// Indices into the 10-dimensional phase vector.
pub mod idx {
    pub const ETA: usize = 0;
    pub const PHI1: usize = 1;
    pub const V1: usize = 2;
    pub const W1: usize = 3;
    pub const P1: usize = 4;
    pub const U: usize = 5;
    pub const PHI2: usize = 6;
    pub const V2: usize = 7;
    pub const W2: usize = 8;
    pub const P2: usize = 9;
}

/// `z = (eta, phi1, v1, w1, p1, u, phi2, v2, w2, p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseVector {
    pub eta: f64,
    pub phi1: f64,
    pub v1: f64,
    pub w1: f64,
    pub p1: f64,
    pub u: f64,
    pub phi2: f64,
    pub v2: f64,
    pub w2: f64,
    pub p2: f64,
}

impl PhaseVector {
    pub fn to_array(&self) -> [f64; 10] {
        [
            self.eta, self.phi1, self.v1, self.w1, self.p1, self.u, self.phi2, self.v2, self.w2,
            self.p2,
        ]
    }

    pub fn from_array(z: [f64; 10]) -> Self {
        Self {
            eta: z[0],
            phi1: z[1],
            v1: z[2],
            w1: z[3],
            p1: z[4],
            u: z[5],
            phi2: z[6],
            v2: z[7],
            w2: z[8],
            p2: z[9],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MsSource {
    Boussinesq(SystemCoefficients),
    KdvBbm { alpha_kb: f64, beta_kb: f64 },
}

/// `K z_t + M z_x = grad S(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MSSystem {
    k: DMatrix<f64>,
    m: DMatrix<f64>,
    source: MsSource,
}

/// Sets `mat[i][j] = v` and `mat[j][i] = -v` from 1-based indices.
fn skew(mat: &mut DMatrix<f64>, i: usize, j: usize, v: f64) {
    mat[(i - 1, j - 1)] = v;
    mat[(j - 1, i - 1)] = -v;
}

pub fn build_boussinesq_ms(s: &SystemCoefficients) -> Result<MSSystem> {
    build_boussinesq_ms_with_tol(s, DEFAULT_TOL)
}

pub fn build_boussinesq_ms_with_tol(s: &SystemCoefficients, tol: f64) -> Result<MSSystem> {
    let report = classify_structure(s, tol)?;
    if !report.is_multisymplectic {
        let violated = report
            .violated_conditions
            .into_iter()
            .filter(|c| crate::coeffs::Condition::MULTISYMPLECTIC.contains(c))
            .collect();
        return Err(Error::Structure { violated });
    }
    let d = &s.disp;
    let mut k = DMatrix::zeros(10, 10);
    skew(&mut k, 1, 2, 0.5);
    skew(&mut k, 1, 3, -0.5 * d.b);
    skew(&mut k, 6, 7, 0.5);
    skew(&mut k, 6, 8, -0.5 * d.d);

    let mut m = DMatrix::zeros(10, 10);
    skew(&mut m, 1, 4, -0.5 * d.b);
    skew(&mut m, 1, 8, d.a);
    skew(&mut m, 2, 5, -1.0);
    skew(&mut m, 3, 6, -d.c);
    skew(&mut m, 6, 9, -0.5 * d.d);
    skew(&mut m, 7, 10, -1.0);

    Ok(MSSystem {
        k,
        m,
        source: MsSource::Boussinesq(*s),
    })
}

pub fn build_kdvbbm_ms(alpha_kb: f64, beta_kb: f64) -> MSSystem {
    let mut k = DMatrix::zeros(5, 5);
    skew(&mut k, 1, 2, 0.5);
    skew(&mut k, 1, 3, -0.5 * beta_kb);

    let mut m = DMatrix::zeros(5, 5);
    skew(&mut m, 1, 3, alpha_kb);
    skew(&mut m, 1, 4, -0.5 * beta_kb);
    skew(&mut m, 2, 5, -1.0);

    MSSystem {
        k,
        m,
        source: MsSource::KdvBbm { alpha_kb, beta_kb },
    }
}

impl MSSystem {
    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn k(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn source(&self) -> &MsSource {
        &self.source
    }

    pub fn component_names(&self) -> &'static [&'static str] {
        match self.source {
            MsSource::Boussinesq(_) => &BOUSSINESQ_COMPONENTS,
            MsSource::KdvBbm { .. } => &KDVBBM_COMPONENTS,
        }
    }

    pub fn potential(&self, z: &[f64]) -> f64 {
        assert_eq!(z.len(), self.dim());
        match self.source {
            MsSource::Boussinesq(s) => {
                let (d, n) = (&s.disp, &s.nl);
                let [eta, _, v1, w1, p1, u, _, v2, w2, p2] = <[f64; 10]>::try_from(z).unwrap();
                p1 * eta - eta * u - n.alpha11 / 3.0 * eta.powi(3) - n.beta11 * eta * eta * u
                    - 0.5 * n.beta12 * eta * u * u
                    + 0.5 * d.b * v1 * w1
                    - n.beta22 / 3.0 * u.powi(3)
                    + 0.5 * d.d * v2 * w2
                    - d.a * v1 * v2
                    + p2 * u
            }
            MsSource::KdvBbm { alpha_kb, beta_kb } => {
                let [u, _, v, w, p] = <[f64; 5]>::try_from(z).unwrap();
                p * u - u.powi(3) / 6.0 - 0.5 * alpha_kb * v * v + 0.5 * beta_kb * v * w
            }
        }
    }

    /// Analytic gradient of [`potential`](Self::potential).
    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len(), self.dim());
        match self.source {
            MsSource::Boussinesq(s) => {
                let (d, n) = (&s.disp, &s.nl);
                let [eta, _, v1, w1, p1, u, _, v2, w2, p2] = <[f64; 10]>::try_from(z).unwrap();
                vec![
                    p1 - u - n.alpha11 * eta * eta - 2.0 * n.beta11 * eta * u - 0.5 * n.beta12 * u * u,
                    0.0,
                    0.5 * d.b * w1 - d.a * v2,
                    0.5 * d.b * v1,
                    eta,
                    p2 - eta - n.beta11 * eta * eta - n.beta12 * eta * u - n.beta22 * u * u,
                    0.0,
                    0.5 * d.d * w2 - d.a * v1,
                    0.5 * d.d * v2,
                    u,
                ]
            }
            MsSource::KdvBbm { alpha_kb, beta_kb } => {
                let [u, _, v, w, p] = <[f64; 5]>::try_from(z).unwrap();
                vec![
                    p - 0.5 * u * u,
                    0.0,
                    -alpha_kb * v + 0.5 * beta_kb * w,
                    0.5 * beta_kb * v,
                    u,
                ]
            }
        }
    }
}

/// Right-hand side of the first-order reformulation of the general family,
/// defined for any coefficients. It is a gradient field exactly when the
/// multi-symplectic conditions hold.
pub fn boussinesq_vector_field(s: &SystemCoefficients, z: &[f64; 10]) -> [f64; 10] {
    let (d, n) = (&s.disp, &s.nl);
    let [eta, _, v1, w1, p1, u, _, v2, w2, p2] = *z;
    [
        p1 - u - n.quad_a(eta, u),
        0.0,
        0.5 * d.b * w1 - d.a * v2,
        0.5 * d.b * v1,
        eta,
        p2 - eta - n.quad_b(eta, u),
        0.0,
        0.5 * d.d * w2 - d.c * v1,
        0.5 * d.d * v2,
        u,
    ]
}

/// Central-difference Jacobian of `f` at `z` with step `h`.
pub fn fd_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, z: &[f64], h: f64) -> DMatrix<f64> {
    let n = z.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut zp = z.to_vec();
    for j in 0..n {
        zp[j] = z[j] + h;
        let fp = f(&zp);
        zp[j] = z[j] - h;
        let fm = f(&zp);
        zp[j] = z[j];
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// `max |J - J^T|`.
pub fn asymmetry(jac: &DMatrix<f64>) -> f64 {
    (jac - jac.transpose()).amax()
}
