//! Cross-checks between the multi-symplectic lift, the time integrator and
//! the traveling-wave solver.

use boussinesq_ms::cli::preset;
use boussinesq_ms::coeffs::{DispersionCoefficients, NonlinearCoefficients, SystemCoefficients};
use boussinesq_ms::msform::{
    build_boussinesq_ms, conservation_densities, conservation_residuals, lift_state, lift_state_with, ms_residual,
    LiftOptions, MSSystem, PhaseField,
};
use boussinesq_ms::sim::{integrate, rhs, FieldState, IntegrateOptions};
use boussinesq_ms::spectralkit::PeriodicGrid;
use boussinesq_ms::travel::{default_grid, solve_classical, TravelingWaveSetup};

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Zero-mean pulse pair (derivatives of Gaussians), so the lift is periodic.
fn zero_mean_data(g: &PeriodicGrid, amp: f64) -> (Vec<f64>, Vec<f64>) {
    let eta = g.sample(|x| amp * x * (-x * x / 4.0).exp());
    let u = g.sample(|x| amp * (1.0 - x * x / 2.0) * (-x * x / 4.0).exp());
    (eta, u)
}

fn snapshot(s: &SystemCoefficients, n: usize, t_end: f64) -> FieldState {
    let g = PeriodicGrid::new(20.0, n).unwrap();
    let (eta, u) = zero_mean_data(&g, 0.2);
    let st = FieldState::new(g, eta, u, 0.0).unwrap();
    let opts = IntegrateOptions {
        dt: 0.01,
        observe_every: usize::MAX,
    };
    integrate(s, st, t_end, &opts, |_, _| {}).unwrap()
}

fn lift_snapshot(s: &SystemCoefficients, st: &FieldState) -> PhaseField {
    let (eta_t, u_t) = rhs(s, st).unwrap();
    lift_state(s, st.grid(), st.eta(), st.u(), &eta_t, &u_t).unwrap()
}

fn pointwise_dot(ms: &MSSystem, pf: &PhaseField, use_t: bool, res: &[Vec<f64>]) -> Vec<f64> {
    (0..pf.grid().len())
        .map(|j| {
            let (_, z_t, z_x) = pf.node_vectors(j);
            let v = if use_t { z_t } else { z_x };
            (0..ms.dim()).map(|i| v[i] * res[i][j]).sum()
        })
        .collect()
}

#[test]
fn sim_snapshots_satisfy_the_ms_form_under_refinement() {
    let s = preset("figure2").unwrap();
    let ms = build_boussinesq_ms(&s).unwrap();
    let r: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| ms_residual(&ms, &lift_snapshot(&s, &snapshot(&s, n, 1.0))).unwrap().max_norm)
        .collect();
    assert_spectral(&r, 1e-13);
    assert!(r[2] < 1e-11, "{r:?}");
}

#[test]
fn balance_laws_equal_minus_residual_projection() {
    // E_t + F_x = -<z_t, r> and I_t + G_x = -<z_x, r> hold pointwise for any
    // lifted field; perturb the time derivatives of a resolved state so r is
    // large while aliasing stays at roundoff
    let s = preset("ms-modified").unwrap();
    let ms = build_boussinesq_ms(&s).unwrap();
    let st = snapshot(&s, 256, 0.5);
    let g = st.grid();
    let (mut eta_t, mut u_t) = rhs(&s, &st).unwrap();
    let (pe, pu) = zero_mean_data(g, 0.05);
    for j in 0..g.len() {
        eta_t[j] += pe[j];
        u_t[j] -= 0.6 * pu[j];
    }
    let pf = lift_state(&s, g, st.eta(), st.u(), &eta_t, &u_t).unwrap();
    let res = ms_residual(&ms, &pf).unwrap();
    assert!(res.max_norm > 1e-3);
    let (e, m) = conservation_residuals(&ms, &pf).unwrap();
    let e_ref: Vec<f64> = pointwise_dot(&ms, &pf, true, &res.components).iter().map(|v| -v).collect();
    let m_ref: Vec<f64> = pointwise_dot(&ms, &pf, false, &res.components).iter().map(|v| -v).collect();
    let diff = |a: &[f64], b: &[f64]| max_abs(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
    assert!(diff(&e, &e_ref) < 1e-9 * max_abs(&e_ref), "{:e} vs {:e}", diff(&e, &e_ref), max_abs(&e_ref));
    assert!(diff(&m, &m_ref) < 1e-9 * max_abs(&m_ref), "{:e} vs {:e}", diff(&m, &m_ref), max_abs(&m_ref));
}

/// Each refinement step gains more than the previous one (faster than any
/// fixed algebraic order).
fn assert_spectral(r: &[f64], floor: f64) {
    for w in r.windows(3) {
        if w[2] > floor {
            assert!(w[0] / w[1] > 10.0 && w[1] / w[2] > w[0] / w[1], "{r:?}");
        }
    }
    assert!(r.windows(2).all(|w| w[1] < w[0] || w[1] < floor), "{r:?}");
}

#[test]
fn joint_system_balance_laws_decay_under_refinement() {
    let s = preset("ms-modified").unwrap();
    let ms = build_boussinesq_ms(&s).unwrap();
    let r: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| {
            let (e, m) = conservation_residuals(&ms, &lift_snapshot(&s, &snapshot(&s, n, 1.0))).unwrap();
            max_abs(&e).max(max_abs(&m))
        })
        .collect();
    assert_spectral(&r, 1e-13);
    assert!(r[2] < 1e-10, "{r:?}");
}

#[test]
fn integrated_densities_are_conserved_by_the_flow() {
    let s = preset("ms-modified").unwrap();
    let ms = build_boussinesq_ms(&s).unwrap();
    let g = PeriodicGrid::new(20.0, 256).unwrap();
    let (eta, u) = zero_mean_data(&g, 0.2);
    let st = FieldState::new(g.clone(), eta, u, 0.0).unwrap();
    let total = |st: &FieldState| {
        let d = conservation_densities(&ms, &lift_snapshot(&s, st)).unwrap();
        (g.integrate(&d.energy), g.integrate(&d.momentum))
    };
    let (e0, i0) = total(&st);
    let opts = IntegrateOptions {
        dt: 0.01,
        observe_every: usize::MAX,
    };
    let end = integrate(&s, st, 2.0, &opts, |_, _| {}).unwrap();
    let (e1, i1) = total(&end);
    assert!((e1 - e0).abs() < 1e-9 * e0.abs().max(1e-3), "{e0} {e1}");
    assert!((i1 - i0).abs() < 1e-9 * i0.abs().max(1e-3), "{i0} {i1}");
}

#[test]
fn solitary_wave_is_a_translating_state_of_the_simulator() {
    let s = preset("figure2").unwrap();
    let c_s = 1.1;
    let grid = default_grid(c_s, 1024).unwrap();
    let p = solve_classical(&TravelingWaveSetup::new(s, c_s).unwrap(), &grid, None).unwrap();
    let st = FieldState::new(grid.clone(), p.zeta.clone(), p.u.clone(), 0.0).unwrap();
    let (eta_t, u_t) = rhs(&s, &st).unwrap();
    let zx = grid.diff(&p.zeta, 1);
    let ux = grid.diff(&p.u, 1);
    for j in 0..grid.len() {
        assert!((eta_t[j] + c_s * zx[j]).abs() < 1e-10);
        assert!((u_t[j] + c_s * ux[j]).abs() < 1e-10);
    }
}

#[test]
fn traveling_lift_residual_vanishes_under_refinement() {
    let s = preset("figure2").unwrap();
    let ms = build_boussinesq_ms(&s).unwrap();
    let c_s = 1.2;
    let fine = solve_classical(&TravelingWaveSetup::new(s, c_s).unwrap(), &default_grid(c_s, 1024).unwrap(), None)
        .unwrap();
    let r: Vec<f64> = [8, 4, 2]
        .iter()
        .map(|&factor| {
            let p = fine.subsample(factor).unwrap();
            let g = &p.grid;
            let eta_t: Vec<f64> = g.diff(&p.zeta, 1).iter().map(|v| -c_s * v).collect();
            let u_t: Vec<f64> = g.diff(&p.u, 1).iter().map(|v| -c_s * v).collect();
            let pf =
                lift_state_with(&s, g, &p.zeta, &p.u, &eta_t, &u_t, &LiftOptions { strict_mean: false }).unwrap();
            ms_residual(&ms, &pf).unwrap().max_norm
        })
        .collect();
    assert_spectral(&r, 1e-13);
    assert!(r[2] < 1e-7, "{r:?}");
}

fn symmetric_with(b: f64, d: f64) -> SystemCoefficients {
    SystemCoefficients::new(
        DispersionCoefficients::new(0.05, b, 0.05, d),
        NonlinearCoefficients {
            alpha12: 0.5,
            beta11: 0.25,
            beta22: 0.75,
            ..Default::default()
        },
    )
}

#[test]
fn symmetric_family_conserves_h1_weighted_norm() {
    // with b, d > 0 the conserved quantity is int(eta^2 + b eta_x^2 + u^2 + d u_x^2),
    // which reduces to the L2 norm only when b = d = 0
    let s = symmetric_with(0.1, 0.2);
    let g = PeriodicGrid::new(30.0, 256).unwrap();
    let eta = g.sample(|x| 0.3 * (-x * x / 4.0).exp());
    let u = g.sample(|x| 0.1 * (-(x + 1.0) * (x + 1.0) / 4.0).exp());
    let weighted = |st: &FieldState| {
        let ex = g.diff(st.eta(), 1);
        let ux = g.diff(st.u(), 1);
        let dens: Vec<f64> = (0..g.len())
            .map(|j| st.eta()[j].powi(2) + 0.1 * ex[j].powi(2) + st.u()[j].powi(2) + 0.2 * ux[j].powi(2))
            .collect();
        g.integrate(&dens)
    };
    let st = FieldState::new(g.clone(), eta, u, 0.0).unwrap();
    let mut l2 = Vec::new();
    let w0 = weighted(&st);
    let opts = IntegrateOptions {
        dt: 0.01,
        observe_every: usize::MAX,
    };
    let end = integrate(&s, st, 5.0, &opts, |_, d| l2.push(d.l2)).unwrap();
    assert!(((weighted(&end) - w0) / w0).abs() < 1e-9);
    assert!(((l2[1] - l2[0]) / l2[0]).abs() > 1e-5);
}
