use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Absolute tolerance on a field mean (scaled by `max(1, |f|_inf)`) below which
/// the field counts as zero-mean.
pub const MEAN_TOL: f64 = 1e-10;

/// Uniform periodic grid on `[-L, L)` with `n` nodes, `n` a power of two.
///
/// The grid owns its FFT plans. Transform layout and normalization stay inside
/// this module; callers only ever see physical-space samples.
#[derive(Clone)]
pub struct PeriodicGrid {
    half_length: f64,
    n: usize,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("half_length", &self.half_length)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl PeriodicGrid {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::Domain(format!(
                "grid half-length must be positive, got {half_length}"
            )));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Domain(format!(
                "grid size must be a power of two >= 4, got {n}"
            )));
        }
        let dk = PI / half_length;
        let wavenumbers = (0..n)
            .map(|j| {
                let m = if j < n / 2 {
                    j as f64
                } else {
                    j as f64 - n as f64
                };
                m * dk
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            half_length,
            n,
            wavenumbers,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Largest resolved wavenumber `pi n / (2L)`.
    pub fn max_wavenumber(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.half_length)
    }

    /// Samples `f` at the grid nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|j| f(self.node(j))).collect()
    }

    pub(crate) fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    fn is_nyquist(&self, j: usize) -> bool {
        j == self.n / 2
    }

    /// Signed mode index of slot `j`.
    fn mode(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    pub(crate) fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(f.len(), self.n);
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub(crate) fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut spec);
        let scale = 1.0 / self.n as f64;
        spec.into_iter().map(|c| c.re * scale).collect()
    }

    /// Multiplier `(ik)^order` for slot `j`, with the Nyquist slot zeroed for odd orders.
    pub(crate) fn derivative_multiplier(&self, j: usize, order: u32) -> Complex64 {
        if order % 2 == 1 && self.is_nyquist(j) {
            return Complex64::new(0.0, 0.0);
        }
        let k = self.wavenumbers[j];
        Complex64::new(0.0, k).powu(order)
    }

    /// Spectral derivative of order `order` (0 returns a copy).
    pub fn diff(&self, f: &[f64], order: u32) -> Vec<f64> {
        if order == 0 {
            return f.to_vec();
        }
        let mut spec = self.forward(f);
        for (j, c) in spec.iter_mut().enumerate() {
            *c *= self.derivative_multiplier(j, order);
        }
        self.inverse(spec)
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() / self.n as f64
    }

    /// Zero-mean antiderivative; rejects fields whose mean exceeds [`MEAN_TOL`].
    pub fn antideriv(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.antideriv_with_tol(f, MEAN_TOL)
    }

    pub fn antideriv_with_tol(&self, f: &[f64], tol: f64) -> Result<Vec<f64>> {
        let mean = self.mean(f);
        let scale = f.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        if mean.abs() > tol * scale {
            return Err(Error::Domain(format!(
                "field mean {mean:e} is not zero; its antiderivative is not periodic"
            )));
        }
        Ok(self.antideriv_unchecked(f))
    }

    /// Antiderivative of `f - mean(f)`.
    pub(crate) fn antideriv_unchecked(&self, f: &[f64]) -> Vec<f64> {
        let mut spec = self.forward(f);
        for (j, c) in spec.iter_mut().enumerate() {
            let k = self.wavenumbers[j];
            if j == 0 || self.is_nyquist(j) {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c /= Complex64::new(0.0, k);
            }
        }
        self.inverse(spec)
    }

    /// Whether slot `j` survives the 2/3-rule truncation (`|m| < n/3`).
    pub(crate) fn keeps_mode(&self, j: usize) -> bool {
        3 * self.mode(j).unsigned_abs() < self.n as u64
    }

    pub(crate) fn truncate(&self, spec: &mut [Complex64]) {
        for (j, c) in spec.iter_mut().enumerate() {
            if !self.keeps_mode(j) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Removes the top third of the spectrum.
    pub fn dealias(&self, f: &[f64]) -> Vec<f64> {
        let mut spec = self.forward(f);
        self.truncate(&mut spec);
        self.inverse(spec)
    }

    /// Product `f * g` free of aliasing: both factors and the result are
    /// truncated by the 2/3 rule.
    pub fn product_dealiased(&self, f: &[f64], g: &[f64]) -> Vec<f64> {
        let fl = self.dealias(f);
        let gl = self.dealias(g);
        let prod: Vec<f64> = fl.iter().zip(&gl).map(|(a, b)| a * b).collect();
        self.dealias(&prod)
    }

    /// Rectangle-rule quadrature over one period.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.spacing() * f.iter().sum::<f64>()
    }

    /// `int f^2 dx` evaluated from the discrete Fourier coefficients.
    pub fn spectral_energy(&self, f: &[f64]) -> f64 {
        let spec = self.forward(f);
        let n = self.n as f64;
        2.0 * self.half_length / (n * n) * spec.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Returns `f(x - shift)` by phase rotation of the spectrum.
    pub fn translate(&self, f: &[f64], shift: f64) -> Vec<f64> {
        let mut spec = self.forward(f);
        for (j, c) in spec.iter_mut().enumerate() {
            let k = self.wavenumbers[j];
            if self.is_nyquist(j) {
                // keep the real part only so the output stays real
                *c *= (k * shift).cos();
            } else {
                *c *= Complex64::from_polar(1.0, -k * shift);
            }
        }
        self.inverse(spec)
    }

    /// First column of the circulant matrix of the order-`order` derivative,
    /// so that `D[i][j] = stencil[(i - j) mod n]`.
    pub(crate) fn derivative_stencil(&self, order: u32) -> Vec<f64> {
        let mut delta = vec![0.0; self.n];
        delta[0] = 1.0;
        self.diff(&delta, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn band_limited(grid: &PeriodicGrid, seed: u64, modes: usize) -> Vec<f64> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let coeffs: Vec<(f64, f64)> = (0..modes)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let w = PI / grid.half_length();
        grid.sample(|x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(m, (a, b))| a * (m as f64 * w * x).cos() + b * (m as f64 * w * x).sin())
                .sum()
        })
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(PeriodicGrid::new(1.0, 12).is_err());
        assert!(PeriodicGrid::new(-1.0, 16).is_err());
        assert!(PeriodicGrid::new(f64::NAN, 16).is_err());
        let g = PeriodicGrid::new(2.0, 16).unwrap();
        assert_eq!(g.node(0), -2.0);
        assert!((g.spacing() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn single_mode_derivative() {
        let l = 3.0;
        let g = PeriodicGrid::new(l, 64).unwrap();
        let f = g.sample(|x| (PI * x / l).sin());
        let exact = g.sample(|x| PI / l * (PI * x / l).cos());
        assert!(max_diff(&g.diff(&f, 1), &exact) < 1e-12);
    }

    #[test]
    fn every_resolvable_mode_is_exact() {
        let l = 5.0;
        let g = PeriodicGrid::new(l, 32).unwrap();
        for m in 1..16 {
            let w = m as f64 * PI / l;
            let f = g.sample(|x| (w * x).sin() + 0.5 * (w * x).cos());
            let d1 = g.sample(|x| w * (w * x).cos() - 0.5 * w * (w * x).sin());
            let d2 = g.sample(|x| -w * w * (w * x).sin() - 0.5 * w * w * (w * x).cos());
            assert!(max_diff(&g.diff(&f, 1), &d1) < 1e-12 * w.max(1.0), "mode {m}");
            assert!(max_diff(&g.diff(&f, 2), &d2) < 1e-12 * (w * w).max(1.0), "mode {m}");
        }
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let g = PeriodicGrid::new(1.0, 16).unwrap();
        let f = vec![3.5; 16];
        for order in 1..5 {
            assert!(g.diff(&f, order).iter().all(|v| v.abs() < 1e-13));
        }
    }

    #[test]
    fn derivative_composition() {
        let g = PeriodicGrid::new(4.0, 128).unwrap();
        let f = band_limited(&g, 7, 20);
        let twice = g.diff(&g.diff(&f, 1), 1);
        let direct = g.diff(&f, 2);
        let scale = direct.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        assert!(max_diff(&twice, &direct) < 1e-12 * scale);
    }

    #[test]
    fn antiderivative_of_single_mode() {
        let l = 2.5;
        let g = PeriodicGrid::new(l, 64).unwrap();
        let f = g.sample(|x| (PI * x / l).cos());
        let exact = g.sample(|x| l / PI * (PI * x / l).sin());
        assert!(max_diff(&g.antideriv(&f).unwrap(), &exact) < 1e-13);
        assert!(g.antideriv(&vec![0.0; 64]).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn antiderivative_rejects_mean() {
        let g = PeriodicGrid::new(1.0, 16).unwrap();
        assert!(matches!(g.antideriv(&vec![1.0; 16]), Err(Error::Domain(_))));
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let g = PeriodicGrid::new(3.0, 128).unwrap();
        let f = band_limited(&g, 11, 25);
        let mean = g.mean(&f);
        let back = g.antideriv(&g.diff(&f, 1)).unwrap();
        let expected: Vec<f64> = f.iter().map(|v| v - mean).collect();
        assert!(max_diff(&back, &expected) < 1e-12);
    }

    #[test]
    fn parseval() {
        let g = PeriodicGrid::new(7.0, 256).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let f: Vec<f64> = (0..256).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let quad = g.integrate(&f.iter().map(|v| v * v).collect::<Vec<_>>());
        assert!((quad - g.spectral_energy(&f)).abs() < 1e-10 * quad.max(1.0));
    }

    #[test]
    fn dealiased_product_is_exact_in_band() {
        let l = PI;
        let g = PeriodicGrid::new(l, 32).unwrap();
        // modes 4 and 5 are inside n/3; their product has modes 1 and 9, also inside
        let f = g.sample(|x| (4.0 * x).cos());
        let h = g.sample(|x| (5.0 * x).cos());
        let exact = g.sample(|x| 0.5 * (x.cos() + (9.0 * x).cos()));
        assert!(max_diff(&g.product_dealiased(&f, &h), &exact) < 1e-14);
        // modes 6 and 5 give mode 11 which is removed
        let f6 = g.sample(|x| (6.0 * x).cos());
        let p = g.product_dealiased(&f6, &h);
        let kept = g.sample(|x| 0.5 * x.cos());
        assert!(max_diff(&p, &kept) < 1e-14);
    }

    #[test]
    fn translation_is_exact_for_band_limited() {
        let l = 2.0;
        let g = PeriodicGrid::new(l, 64).unwrap();
        let w = PI / l;
        let f = g.sample(|x| (3.0 * w * x).sin() + (w * x).cos());
        let s = 0.37;
        let exact = g.sample(|x| (3.0 * w * (x - s)).sin() + (w * (x - s)).cos());
        assert!(max_diff(&g.translate(&f, s), &exact) < 1e-13);
    }

    #[test]
    fn stencil_reproduces_diff() {
        let g = PeriodicGrid::new(1.5, 32).unwrap();
        let f = band_limited(&g, 5, 10);
        let st = g.derivative_stencil(2);
        let n = g.len();
        let via: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| st[(i + n - j) % n] * f[j]).sum())
            .collect();
        assert!(max_diff(&via, &g.diff(&f, 2)) < 1e-10);
    }
}
