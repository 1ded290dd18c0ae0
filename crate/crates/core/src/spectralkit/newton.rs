//! Newton driver and natural-parameter continuation.

use crate::error::{Error, Result};

/// A nonlinear system `r(x) = 0` together with a way to solve its linearization.
pub trait NewtonProblem {
    fn residual(&mut self, x: &[f64]) -> Vec<f64>;

    /// Returns the step `dx` solving `J(x) dx = -r`.
    fn solve_linearized(&mut self, x: &[f64], r: &[f64]) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Converged once the residual max-norm drops to this level.
    pub tol: f64,
    /// Also converged when the update max-norm falls below this and the
    /// residual is below `accept_tol`.
    pub step_tol: f64,
    pub accept_tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            step_tol: 1e-12,
            accept_tol: 1e-10,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonStep {
    pub residual: f64,
    pub update: f64,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub solution: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<NewtonStep>,
}

pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn newton<P: NewtonProblem>(
    problem: &mut P,
    init: Vec<f64>,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome> {
    let mut x = init;
    let mut r = problem.residual(&x);
    let mut res = max_norm(&r);
    let mut history = Vec::new();
    if res <= opts.tol {
        return Ok(NewtonOutcome {
            solution: x,
            residual: res,
            iterations: 0,
            history,
        });
    }
    for it in 1..=opts.max_iter {
        let dx = problem.solve_linearized(&x, &r)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        r = problem.residual(&x);
        res = max_norm(&r);
        let update = max_norm(&dx);
        history.push(NewtonStep {
            residual: res,
            update,
        });
        if !res.is_finite() {
            break;
        }
        if res <= opts.tol || (update <= opts.step_tol && res <= opts.accept_tol) {
            return Ok(NewtonOutcome {
                solution: x,
                residual: res,
                iterations: it,
                history,
            });
        }
    }
    Err(Error::Convergence {
        iterations: history.len(),
        residual: res,
        last: Some(x),
    })
}

/// Natural-parameter continuation from `start` to `target`.
///
/// `solve(p, guess)` is called along the path; on failure the step is halved
/// (at most `max_halvings` times in a row) and retried from the last success.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Continuation {
    pub start: f64,
    pub target: f64,
    pub steps: usize,
    pub max_halvings: usize,
}

impl Continuation {
    pub fn run<T, F>(&self, initial: T, mut solve: F) -> Result<T>
    where
        T: Clone,
        F: FnMut(f64, &T) -> Result<T>,
    {
        let mut current = initial;
        let mut p = self.start;
        let mut step = (self.target - self.start) / self.steps.max(1) as f64;
        let mut halvings = 0;
        while (self.target - p) * step.signum() > 0.0 {
            let next = if (self.target - (p + step)) * step.signum() <= 0.0 {
                self.target
            } else {
                p + step
            };
            match solve(next, &current) {
                Ok(sol) => {
                    current = sol;
                    p = next;
                    halvings = 0;
                }
                Err(e) => {
                    if halvings >= self.max_halvings {
                        return Err(e);
                    }
                    halvings += 1;
                    step *= 0.5;
                }
            }
        }
        Ok(current)
    }
}
