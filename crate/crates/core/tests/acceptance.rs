//! Acceptance criteria, one pass/fail line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.
//! Criteria listed in `KNOWN_FAILURES` are evaluated as written and expected
//! to fail; the suite fails if they start passing or if anything else fails.

use std::time::{Duration, Instant};

use boussinesq_ms::cli::preset;
use boussinesq_ms::coeffs::{
    classify_structure, DispersionCoefficients, NonlinearCoefficients, SystemCoefficients, DEFAULT_TOL,
};
use boussinesq_ms::msform::{
    asymmetry, boussinesq_vector_field, build_boussinesq_ms, fd_jacobian, lift_state_with, ms_residual, LiftOptions,
};
use boussinesq_ms::sim::{integrate, ConservedDiagnostics, FieldState, IntegrateOptions};
use boussinesq_ms::spectralkit::PeriodicGrid;
use boussinesq_ms::travel::{
    build_linearization, default_grid, eigen_classify, generalized_grid, measure_tail_wavenumber, nonlinear_term,
    normal_form_constants, solve_classical, solve_generalized, table1_prediction, tail_wavenumber, ProfilePair,
    Table1Label, TravelingWaveSetup, WaveClass,
};
use nalgebra::Vector4;
use rand::{Rng, SeedableRng};

/// Criterion 5 asks for amplitude/(c_s - 1) -> 3/(2 sigma); the solved profiles
/// approach 3/sigma instead.
const KNOWN_FAILURES: [u32; 1] = [5];

enum Outcome {
    Pass(String),
    Fail(String),
    /// Best-effort criterion that could not be evaluated.
    Fragile(String),
}

struct Line {
    id: u32,
    title: &'static str,
    outcome: Outcome,
    elapsed: Duration,
    budget: Duration,
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn run(id: u32, title: &'static str, budget_s: u64, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let outcome = f();
    Line {
        id,
        title,
        outcome,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget_s),
    }
}

fn system(a: f64, b: f64, c: f64, d: f64, nl: NonlinearCoefficients) -> SystemCoefficients {
    SystemCoefficients::new(DispersionCoefficients::new(a, b, c, d), nl)
}

fn c1_structure() -> Outcome {
    let expect = [
        ("abcd-classic", false, true),
        ("symmetric", true, false),
        ("ms-modified", true, true),
        ("figure2", true, false),
        ("kdvkdv", true, false),
    ];
    let mut wrong = Vec::new();
    for (name, ms, sy) in expect {
        let r = classify_structure(&preset(name).unwrap(), DEFAULT_TOL).unwrap();
        if r.is_multisymplectic != ms || r.is_symplectic != sy || r.is_both != (ms && sy) {
            wrong.push(name);
        }
    }
    check(wrong.is_empty(), format!("5 presets, mismatches: {wrong:?}"))
}

fn random_ms(rng: &mut impl Rng) -> SystemCoefficients {
    let a = rng.gen_range(-1.0..1.0);
    let beta11 = rng.gen_range(-1.0..1.0);
    let alpha22 = rng.gen_range(-1.0..1.0);
    system(
        a,
        rng.gen_range(-1.0..1.0),
        a,
        rng.gen_range(-1.0..1.0),
        NonlinearCoefficients {
            alpha11: rng.gen_range(-1.0..1.0),
            alpha12: 2.0 * beta11,
            alpha22,
            beta11,
            beta12: 2.0 * alpha22,
            beta22: rng.gen_range(-1.0..1.0),
        },
    )
}

fn c2_poincare() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2);
    let mut worst_sym: f64 = 0.0;
    for _ in 0..20 {
        let ms = build_boussinesq_ms(&random_ms(&mut rng)).unwrap();
        for _ in 0..20 {
            let z: Vec<f64> = (0..10).map(|_| rng.gen_range(-2.0..2.0)).collect();
            worst_sym = worst_sym.max(asymmetry(&fd_jacobian(|v| ms.gradient(v), &z, 1e-5)));
        }
    }
    let mut least_broken = f64::INFINITY;
    for _ in 0..20 {
        let mut s = random_ms(&mut rng);
        s.nl.alpha12 += 0.1;
        let z: [f64; 10] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let jac = fd_jacobian(
            |v| boussinesq_vector_field(&s, &v.try_into().unwrap()).to_vec(),
            &z,
            1e-5,
        );
        least_broken = least_broken.min(asymmetry(&jac));
    }
    check(
        worst_sym <= 1e-6 && least_broken >= 1e-3,
        format!("max asymmetry (admissible) {worst_sym:.2e} <= 1e-6; min asymmetry (violated) {least_broken:.2e} >= 1e-3"),
    )
}

fn c3_closed_forms() -> Outcome {
    let none = NonlinearCoefficients::default();
    let bbm = TravelingWaveSetup::new(system(0.0, 1.0 / 6.0, 0.0, 1.0 / 6.0, none), 1.2).unwrap();
    let ev = eigen_classify(&bbm).unwrap().eigenvalues;
    let r11 = 11.0_f64.sqrt();
    let expected = [-r11, -1.0, 1.0, r11];
    let err_real = ev
        .iter()
        .zip(expected)
        .map(|(l, e)| (l.re - e).abs().max(l.im.abs()))
        .fold(0.0, f64::max);

    let kdv = TravelingWaveSetup::new(system(1.0 / 6.0, 0.0, 1.0 / 6.0, 0.0, none), 1.0).unwrap();
    let ev = eigen_classify(&kdv).unwrap().eigenvalues;
    let r12 = 12.0_f64.sqrt();
    let mut imag: Vec<f64> = ev.iter().filter(|l| l.im.abs() > 1.0).map(|l| l.im).collect();
    imag.sort_by(f64::total_cmp);
    let pair_re = ev.iter().filter(|l| l.im.abs() > 1.0).map(|l| l.re.abs()).fold(0.0, f64::max);
    let err_imag = if imag.len() == 2 {
        (imag[0] + r12).abs().max((imag[1] - r12).abs()).max(pair_re)
    } else {
        f64::INFINITY
    };
    check(
        err_real <= 1e-12 && err_imag <= 1e-12,
        format!("|ev - {{+-1, +-sqrt 11}}| = {err_real:.1e}, |ev - (+-i sqrt 12)| = {err_imag:.1e} (tol 1e-12)"),
    )
}

fn c4_table1() -> Outcome {
    let sixth = 1.0 / 6.0;
    let rows = [
        (sixth, 0.0, 0.0, WaveClass::Gen),
        (-0.1, 0.0, sixth, WaveClass::Gen),
        (sixth, sixth, 0.0, WaveClass::Gen),
        (-0.1, sixth, sixth, WaveClass::Class),
        (-0.2, 0.1, 0.1, WaveClass::Gen),
        (0.1, sixth, sixth, WaveClass::Class),
        (1.0, 0.5, 0.5, WaveClass::Gen),
        (0.2, -0.1, -0.1, WaveClass::Gen),
        (0.0, sixth, sixth, WaveClass::Class),
    ];
    let mut agree = 0;
    for (a, b, d, label) in rows {
        let s = system(a, b, a, d, NonlinearCoefficients::default());
        let numeric = eigen_classify(&TravelingWaveSetup::new(s, 1.01).unwrap()).unwrap().classification;
        let symbolic = match table1_prediction(&s, DEFAULT_TOL) {
            Table1Label::Class => WaveClass::Class,
            Table1Label::Gen => WaveClass::Gen,
            Table1Label::Unlisted => WaveClass::Degenerate,
        };
        if numeric == label && symbolic == label {
            agree += 1;
        }
    }
    check(agree == 9, format!("{agree}/9 rows agree (numeric, symbolic, printed)"))
}

fn c5_solitary_asymptotics() -> Outcome {
    let s = preset("figure2").unwrap();
    let sigma = s.nl.sigma();
    let target = 3.0 / (2.0 * sigma);
    let mut ratios = Vec::new();
    let mut worst_res: f64 = 0.0;
    for c_s in [1.04, 1.02, 1.01] {
        let setup = TravelingWaveSetup::new(s, c_s).unwrap();
        match solve_classical(&setup, &default_grid(c_s, 2048).unwrap(), None) {
            Ok(p) => {
                worst_res = worst_res.max(p.residual_norm);
                ratios.push(p.amplitude_zeta() / (c_s - 1.0));
            }
            Err(e) => return Outcome::Fail(format!("c_s = {c_s}: {e}")),
        }
    }
    let dev = |t: f64| (ratios[2] - t).abs() / t;
    let monotone = (ratios[0] - target).abs() > (ratios[1] - target).abs()
        && (ratios[1] - target).abs() > (ratios[2] - target).abs();
    check(
        worst_res <= 1e-10 && monotone && dev(target) <= 0.05,
        format!(
            "residual {worst_res:.1e} <= 1e-10; amp/(c_s-1) = {:.5}, {:.5}, {:.5}; monotone toward 3/(2 sigma) = {target:.5}: {monotone}; \
             deviation {:.1}% (<= 5%); deviation from 3/sigma = {:.5}: {:.2}%",
            ratios[0],
            ratios[1],
            ratios[2],
            100.0 * dev(target),
            3.0 / sigma,
            100.0 * dev(3.0 / sigma)
        ),
    )
}

fn translate_error(s: &SystemCoefficients, p: &ProfilePair, t_end: f64, dt: f64) -> (Vec<f64>, f64) {
    let g = &p.grid;
    let st = FieldState::new(g.clone(), p.zeta.clone(), p.u.clone(), 0.0).unwrap();
    let opts = IntegrateOptions {
        dt,
        observe_every: usize::MAX,
    };
    let end = integrate(s, st, t_end, &opts, |_, _| {}).unwrap();
    let expected = g.translate(&p.zeta, p.c_s * t_end);
    let err = end.eta().iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    (end.eta().to_vec(), err)
}

fn c6_translation() -> Outcome {
    let s = preset("figure2").unwrap();
    let c_s = 1.1;
    let p = solve_classical(&TravelingWaveSetup::new(s, c_s).unwrap(), &default_grid(c_s, 1024).unwrap(), None)
        .unwrap();
    let (_, err) = translate_error(&s, &p, 10.0, 1e-3);
    // at dt = 1e-3 the time-stepping error is below the translation floor, so
    // the order is measured at coarser steps against a dt/8 reference
    let (dt1, dt2) = (0.1, 0.05);
    let (e_ref, _) = translate_error(&s, &p, 10.0, dt2 / 8.0);
    let dist = |v: &[f64]| v.iter().zip(&e_ref).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (e1, _) = translate_error(&s, &p, 10.0, dt1);
    let (e2, _) = translate_error(&s, &p, 10.0, dt2);
    let ratio = dist(&e1) / dist(&e2);
    check(
        err <= 1e-6 && (14.0..=18.0).contains(&ratio),
        format!("|eta(T) - translate| = {err:.2e} <= 1e-6 (dt 1e-3); error ratio dt {dt1} -> {dt2}: {ratio:.2} in [14, 18]"),
    )
}

fn history(s: &SystemCoefficients, dt: f64) -> Vec<ConservedDiagnostics> {
    let g = PeriodicGrid::new(40.0, 256).unwrap();
    let eta = g.sample(|x| 0.3 * (-x * x / 9.0).exp());
    let u = g.sample(|x| 0.2 * (-(x - 2.0) * (x - 2.0) / 9.0).exp());
    let st = FieldState::new(g, eta, u, 0.0).unwrap();
    let mut hist = Vec::new();
    let opts = IntegrateOptions {
        dt,
        observe_every: 1000,
    };
    integrate(s, st, 10.0, &opts, |_, d| hist.push(*d)).unwrap();
    hist
}

fn max_rel_drift(hist: &[ConservedDiagnostics], f: impl Fn(&ConservedDiagnostics) -> f64) -> f64 {
    let x0 = f(&hist[0]);
    hist.iter().map(|d| ((f(d) - x0) / x0).abs()).fold(0.0, f64::max)
}

fn c7_conservation() -> Outcome {
    let dt = 1e-3;
    let sym = history(&preset("symmetric").unwrap(), dt);
    let ham = history(&preset("ms-modified").unwrap(), dt);
    let control = history(&preset("figure2").unwrap(), dt);
    let l2 = max_rel_drift(&sym, |d| d.l2);
    let h = max_rel_drift(&ham, |d| d.hamiltonian.unwrap());
    let imp = max_rel_drift(&ham, |d| d.impulse.unwrap());
    let mass = [&sym, &ham, &control]
        .iter()
        .flat_map(|hist| [max_rel_drift(hist, |d| d.mass_eta), max_rel_drift(hist, |d| d.mass_u)])
        .fold(0.0, f64::max);
    let h_control = max_rel_drift(&control, |d| d.hamiltonian.unwrap());
    check(
        l2 <= 1e-8 && h <= 1e-8 && imp <= 1e-8 && mass <= 1e-12 && h_control >= 1e-4,
        format!(
            "symmetric l2 {l2:.1e}; ms-modified H {h:.1e}, impulse {imp:.1e} (<= 1e-8); mass {mass:.1e} (<= 1e-12); \
             control H {h_control:.1e} (>= 1e-4)"
        ),
    )
}

fn c8_ms_residual() -> Outcome {
    let s = preset("figure2").unwrap();
    let ms = build_boussinesq_ms(&s).unwrap();
    let c_s = 1.1;
    // one solve on a fine grid, sampled down: re-solving per N would only
    // measure the Newton tolerance
    let fine = solve_classical(&TravelingWaveSetup::new(s, c_s).unwrap(), &default_grid(c_s, 2048).unwrap(), None)
        .unwrap();
    let residual = |factor: usize| {
        let p = fine.subsample(factor).unwrap();
        let g = &p.grid;
        let eta_t: Vec<f64> = g.diff(&p.zeta, 1).iter().map(|v| -c_s * v).collect();
        let u_t: Vec<f64> = g.diff(&p.u, 1).iter().map(|v| -c_s * v).collect();
        let pf = lift_state_with(&s, g, &p.zeta, &p.u, &eta_t, &u_t, &LiftOptions { strict_mean: false }).unwrap();
        ms_residual(&ms, &pf).unwrap().max_norm
    };
    let (r512, r1024) = (residual(4), residual(2));
    check(
        r512 >= 1e2 * r1024,
        format!("N = 512: {r512:.2e}, N = 1024: {r1024:.2e}, ratio {:.1e} >= 1e2", r512 / r1024),
    )
}

fn c9_generalized() -> Outcome {
    let setup = TravelingWaveSetup::new(preset("kdvkdv").unwrap(), 1.5).unwrap();
    let k_eig = tail_wavenumber(&setup).unwrap();
    let grid = generalized_grid(&setup, 40.0, 1024).unwrap();
    match solve_generalized(&setup, &grid, None) {
        Ok(p) => {
            let tail = p.tail_amplitude.unwrap_or(0.0);
            match measure_tail_wavenumber(&p) {
                Some(k) => {
                    let dev = (k - k_eig).abs() / k_eig;
                    check(
                        tail > 1e-6 && dev <= 0.05,
                        format!("ripple amplitude {tail:.3e}; wavenumber {k:.4} vs |Im lambda| = {k_eig:.4} ({:.2}% <= 5%)", 100.0 * dev),
                    )
                }
                None => Outcome::Fail(format!("no oscillatory tail found (amplitude {tail:.1e})")),
            }
        }
        Err(e) => Outcome::Fragile(format!("Newton did not converge: {e}")),
    }
}

fn c10_normal_form() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(10);
    let w0 = Vector4::new(1.0, 0.0, 1.0, 0.0);
    let w1_dual = Vector4::new(0.0, 0.5, 0.0, 0.5);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a: f64 = rng.gen_range(0.05..2.0);
        let nl = NonlinearCoefficients {
            alpha11: rng.gen_range(0.0..1.0),
            alpha12: rng.gen_range(0.0..1.0),
            alpha22: rng.gen_range(0.0..1.0),
            beta11: rng.gen_range(0.0..1.0),
            beta12: rng.gen_range(0.0..1.0),
            beta22: rng.gen_range(0.0..1.0),
        };
        let s = system(a, 0.0, a, 0.0, nl);
        let nf = normal_form_constants(&s, a);
        let at = |c: f64| TravelingWaveSetup::new(s, c).unwrap();
        // the linearization is affine in c_s when b = d = 0, so the centered
        // difference is exact up to rounding
        let dl = (build_linearization(&at(1.5)).unwrap() - build_linearization(&at(0.5)).unwrap()) / 1.0;
        let c10 = w1_dual.dot(&(dl * w0));
        // the nonlinearity is quadratic: (1/2) D^2 R [w0, w0] = R(w0)
        let c20 = w1_dual.dot(&nonlinear_term(&at(1.0), &w0).unwrap());
        for (got, want) in [(nf.c10.unwrap(), c10), (nf.c20.unwrap(), c20)] {
            worst = worst.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    check(worst <= 1e-14, format!("10 random (a, sigma): max scaled deviation {worst:.1e} <= 1e-14"))
}

// plain main so the per-criterion lines are never captured
fn main() {
    let lines = vec![
        run(1, "structure classification", 1, c1_structure),
        run(2, "gradient-field symmetry", 5, c2_poincare),
        run(3, "eigenvalue closed forms", 1, c3_closed_forms),
        run(4, "Table 1 regression", 1, c4_table1),
        run(5, "solitary-wave residual and asymptotics", 30, c5_solitary_asymptotics),
        run(6, "traveling wave / simulator cross-check", 120, c6_translation),
        run(7, "conservation drift", 180, c7_conservation),
        run(8, "MS residual convergence", 30, c8_ms_residual),
        run(9, "generalized-wave regime", 60, c9_generalized),
        run(10, "normal-form constants", 1, c10_normal_form),
    ];
    let mut unexpected = Vec::new();
    for l in &lines {
        let in_time = l.elapsed <= l.budget;
        let (tag, detail, failed) = match &l.outcome {
            Outcome::Pass(d) if in_time => ("PASS", d.clone(), false),
            Outcome::Pass(d) => ("FAIL", format!("{d}; over time budget"), true),
            Outcome::Fail(d) => ("FAIL", d.clone(), true),
            Outcome::Fragile(d) => ("FRAGILE", d.clone(), false),
        };
        let known = KNOWN_FAILURES.contains(&l.id);
        let note = if known { " [known]" } else { "" };
        println!(
            "C{:<2} {tag:<7} {:<40} {:>7.2}s / {:>3}s  {detail}{note}",
            l.id,
            l.title,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs()
        );
        if failed != known {
            unexpected.push(l.id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
