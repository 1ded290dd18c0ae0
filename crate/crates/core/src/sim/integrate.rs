use serde::{Deserialize, Serialize};

use super::state::{diagnostics, ConservedDiagnostics, FieldState, Tendency};
use crate::coeffs::SystemCoefficients;
use crate::error::{Error, Result};
use crate::spectralkit::PeriodicGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub dt: f64,
    /// Observer is called every this many steps, plus at the start and the end.
    pub observe_every: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            observe_every: 100,
        }
    }
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(f: &Tendency, eta: &[f64], u: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let (k1e, k1u) = f.eval(eta, u);
    let (k2e, k2u) = f.eval(&axpy(eta, 0.5 * h, &k1e), &axpy(u, 0.5 * h, &k1u));
    let (k3e, k3u) = f.eval(&axpy(eta, 0.5 * h, &k2e), &axpy(u, 0.5 * h, &k2u));
    let (k4e, k4u) = f.eval(&axpy(eta, h, &k3e), &axpy(u, h, &k3u));
    let combine = |y: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        (0..y.len())
            .map(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
            .collect()
    };
    (
        combine(eta, &k1e, &k2e, &k3e, &k4e),
        combine(u, &k1u, &k2u, &k3u, &k4u),
    )
}

/// Advances `state` by `duration` with classical RK4 in fixed steps of
/// `opts.dt`; the last step is shortened to land exactly on the final time.
pub fn integrate<F>(
    s: &SystemCoefficients,
    state: FieldState,
    duration: f64,
    opts: &IntegrateOptions,
    mut observer: F,
) -> Result<FieldState>
where
    F: FnMut(&FieldState, &ConservedDiagnostics),
{
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {}", opts.dt)));
    }
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(Error::Domain(format!("duration must be non-negative, got {duration}")));
    }
    let every = opts.observe_every.max(1);
    let f = Tendency::new(s, state.grid())?;
    observer(&state, &diagnostics(s, &state));

    let steps = (duration / opts.dt - 1e-9).ceil().max(0.0) as usize;
    let t0 = state.t();
    let grid = state.grid().clone();
    let (mut eta, mut u) = state.clone().into_fields();
    let mut current = state;
    for i in 0..steps {
        let t_next = if i + 1 == steps {
            t0 + duration
        } else {
            t0 + (i + 1) as f64 * opts.dt
        };
        let h = t_next - current.t();
        let (e, v) = rk4_step(&f, &eta, &u, h);
        if !e.iter().chain(&v).all(|x| x.is_finite()) {
            return Err(Error::BlowUp {
                t: current.t(),
                last_eta: eta,
                last_u: u,
            });
        }
        eta = e;
        u = v;
        current = FieldState::new(grid.clone(), eta.clone(), u.clone(), t_next)?;
        if (i + 1) % every == 0 || i + 1 == steps {
            observer(&current, &diagnostics(s, &current));
        }
    }
    Ok(current)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub half_length: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::new(self.half_length, self.n)
    }
}

/// Run configuration as stored alongside simulation output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub coeffs: SystemCoefficients,
    pub grid: GridSpec,
    pub dt: f64,
    #[serde(rename = "T")]
    pub duration: f64,
    pub observe_every: usize,
}

/// Final state and the recorded diagnostics of a run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_state: FieldState,
    pub history: Vec<ConservedDiagnostics>,
}

pub fn run(config: &RunConfig, eta0: Vec<f64>, u0: Vec<f64>) -> Result<RunOutput> {
    let grid = config.grid.build()?;
    let state = FieldState::new(grid, eta0, u0, 0.0)?;
    let mut history = Vec::new();
    let opts = IntegrateOptions {
        dt: config.dt,
        observe_every: config.observe_every,
    };
    let final_state = integrate(&config.coeffs, state, config.duration, &opts, |_, d| history.push(*d))?;
    Ok(RunOutput { final_state, history })
}
