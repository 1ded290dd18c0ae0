//! Command implementations behind the `bms` binary.
//!
//! Exit codes: 0 success, 1 numerical non-convergence, 2 input error,
//! 3 blow-up during time integration.

mod model;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coeffs::{classify_structure, classify_wellposedness, SystemCoefficients, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::msform::{asymmetry, build_boussinesq_ms, fd_jacobian, fmt17};
use crate::sim::{self, GridSpec, RunConfig};
use crate::travel::{
    default_grid, eigen_classify, generalized_grid, normal_form_constants, solve_classical, solve_generalized,
    speed_amplitude_curve, write_curve_csv, EigenReport, NormalFormConstants, ProfilePair, TravelingWaveSetup,
    WaveClass,
};

pub use model::{load_model, parse_grid, parse_model, parse_speeds, preset, PRESET_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONCONVERGENCE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;

/// Exit status associated with an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. }
        | Error::Singular
        | Error::NoBifurcation { .. }
        | Error::WrongSolver { .. }
        | Error::Degenerate { .. }
        | Error::NonlinearitySign { .. } => EXIT_NONCONVERGENCE,
        Error::BlowUp { .. } => EXIT_BLOWUP,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bms", version, about = "Multi-symplectic Boussinesq systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Preset name or path to a model JSON file.
    #[arg(long)]
    pub model: String,
    /// Output directory for artifacts; reports go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure and well-posedness classification.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// K, M and a finite-difference symmetry check of grad S.
    MsMatrices {
        #[command(flatten)]
        common: Common,
    },
    /// Linearized traveling-wave spectrum per speed.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Speeds as a list `a,b,...` or a range `start:stop:count`.
        #[arg(long)]
        cs: String,
    },
    /// Traveling-wave profiles per speed and an optional speed-amplitude curve.
    Travel {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cs: Option<String>,
        /// Speed range `start:stop:count` for the speed-amplitude curve.
        #[arg(long)]
        curve: Option<String>,
        /// `L,N`; defaults to `L = 50 / sqrt(c_s - 1)`, `N = 2048`.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Time integration with conserved-quantity diagnostics.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "100,512")]
        grid: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "T", default_value_t = 10.0)]
        duration: f64,
        #[arg(long, default_value_t = 100)]
        observe_every: usize,
        /// `pulse:A,W` for `eta = A exp(-(x/W)^2)`, `u = eta`, or `solitary:C`.
        #[arg(long, default_value = "pulse:0.1,4")]
        init: String,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Applies `BMS_THREADS` to the dense linear algebra.
fn configure_threads() {
    if let Some(n) = std::env::var("BMS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let par = if n <= 1 { faer::Par::Seq } else { faer::Par::rayon(n) };
        faer::set_global_parallelism(par);
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Classify { common } => cmd_classify(common),
        Command::MsMatrices { common } => cmd_ms_matrices(common),
        Command::Spectrum { common, cs } => cmd_spectrum(common, cs),
        Command::Travel {
            common,
            cs,
            curve,
            grid,
        } => cmd_travel(common, cs.as_deref(), curve.as_deref(), grid.as_deref()),
        Command::Simulate {
            common,
            grid,
            dt,
            duration,
            observe_every,
            init,
        } => cmd_simulate(common, grid, *dt, *duration, *observe_every, init),
    }
}

fn out_dir(common: &Common) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Writes a JSON report to `<out>/<name>.json`, or to stdout without `--out`.
fn emit_json<T: Serialize>(common: &Common, name: &str, doc: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{name}.json")), text + "\n")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

/// Writes CSV rows to `<out>/<name>.csv`, or to stdout without `--out`.
fn emit_csv(common: &Common, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let sink: Box<dyn Write> = match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Box::new(fs::File::create(dir.join(format!("{name}.csv")))?)
        }
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_classify(common: &Common) -> Result<i32> {
    let s = load_model(&common.model)?;
    let structure = classify_structure(&s, DEFAULT_TOL)?;
    let wellposedness = classify_wellposedness(&s, DEFAULT_TOL);
    match common.format {
        Format::Json => {
            let doc = json!({
                "model": s,
                "is_multisymplectic": structure.is_multisymplectic,
                "is_symplectic": structure.is_symplectic,
                "structure": structure,
                "wellposedness": wellposedness,
            });
            emit_json(common, "classify", &doc)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = crate::coeffs::Condition::MULTISYMPLECTIC
                .iter()
                .chain(&crate::coeffs::Condition::SYMPLECTIC)
                .map(|c| {
                    vec![
                        c.as_str().to_string(),
                        fmt17(c.defect(&s)),
                        c.holds(&s, DEFAULT_TOL).to_string(),
                    ]
                })
                .collect();
            emit_csv(common, "classify", &["condition", "defect", "holds"], &rows)?;
        }
    }
    Ok(EXIT_OK)
}

/// Deterministic sample states for the gradient symmetry check.
fn sample_states(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| (0..10).map(|j| 0.5 * ((i * 10 + j) as f64 * 0.7 + 0.3).sin()).collect())
        .collect()
}

pub fn cmd_ms_matrices(common: &Common) -> Result<i32> {
    let s = load_model(&common.model)?;
    let ms = build_boussinesq_ms(&s)?;
    let max_asym = sample_states(20)
        .iter()
        .map(|z| asymmetry(&fd_jacobian(|v| ms.gradient(v), z, 1e-6)))
        .fold(0.0, f64::max);
    let rows = |m: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    };
    match common.format {
        Format::Json => {
            let doc = json!({
                "components": ms.component_names(),
                "K": rows(ms.k()),
                "M": rows(ms.m()),
                "gradient_jacobian_max_asymmetry": max_asym,
            });
            emit_json(common, "ms_matrices", &doc)?;
        }
        Format::Csv => {
            let names = ms.component_names();
            let mut header = vec!["matrix", "row"];
            header.extend(names.iter().copied());
            let mut out = Vec::new();
            for (label, m) in [("K", ms.k()), ("M", ms.m())] {
                for (i, r) in rows(m).into_iter().enumerate() {
                    let mut line = vec![label.to_string(), names[i].to_string()];
                    line.extend(r.into_iter().map(fmt17));
                    out.push(line);
                }
            }
            emit_csv(common, "ms_matrices", &header, &out)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    c_s: f64,
    report: EigenReport,
    normal_form: NormalFormConstants,
}

pub fn cmd_spectrum(common: &Common, cs: &str) -> Result<i32> {
    let s = load_model(&common.model)?;
    let speeds = parse_speeds(cs)?;
    let mut rows = Vec::new();
    for &c_s in &speeds {
        let setup = TravelingWaveSetup::new(s, c_s)?;
        rows.push(SpectrumRow {
            c_s,
            report: eigen_classify(&setup)?,
            normal_form: normal_form_constants(&s, s.disp.a),
        });
    }
    match common.format {
        Format::Json => emit_json(common, "spectrum", &rows)?,
        Format::Csv => {
            let header = [
                "c_s", "class", "table1", "re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4",
            ];
            let lines: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut line = vec![
                        fmt17(r.c_s),
                        r.report.classification.as_str().to_string(),
                        format!("{:?}", r.report.table1_prediction),
                    ];
                    for l in &r.report.eigenvalues {
                        line.push(fmt17(l.re));
                        line.push(fmt17(l.im));
                    }
                    line
                })
                .collect();
            emit_csv(common, "spectrum", &header, &lines)?;
        }
    }
    Ok(EXIT_OK)
}

fn solve_for_speed(s: &SystemCoefficients, c_s: f64, grid: Option<(f64, usize)>) -> Result<(EigenReport, ProfilePair)> {
    let setup = TravelingWaveSetup::new(*s, c_s)?;
    if c_s <= 1.0 {
        return Err(Error::NoBifurcation { c_s });
    }
    let report = eigen_classify(&setup)?;
    let profile = match report.classification {
        WaveClass::Class => {
            let g = match grid {
                Some((l, n)) => crate::spectralkit::PeriodicGrid::new(l, n)?,
                None => default_grid(c_s, 2048)?,
            };
            solve_classical(&setup, &g, None)?
        }
        WaveClass::Gen => {
            let (l, n) = grid.unwrap_or((40.0, 1024));
            solve_generalized(&setup, &generalized_grid(&setup, l, n)?, None)?
        }
        other => {
            return Err(Error::WrongSolver {
                expected: "Class or Gen",
                found: other.as_str(),
            })
        }
    };
    Ok((report, profile))
}

fn speed_tag(c_s: f64) -> String {
    format!("{c_s}").replace('.', "p")
}

pub fn cmd_travel(common: &Common, cs: Option<&str>, curve: Option<&str>, grid: Option<&str>) -> Result<i32> {
    let s = load_model(&common.model)?;
    if cs.is_none() && curve.is_none() {
        return Err(Error::Input("travel needs --cs and/or --curve".into()));
    }
    let grid = grid.map(parse_grid).transpose()?;
    let speeds = cs.map(parse_speeds).transpose()?.unwrap_or_default();
    let curve_speeds = curve.map(parse_speeds).transpose()?;
    let dir = out_dir(common)?;
    let mut status = EXIT_OK;
    let mut summary = Vec::new();
    for &c_s in &speeds {
        match solve_for_speed(&s, c_s, grid) {
            Ok((report, p)) => {
                let file = dir.join(format!("profile_cs{}.csv", speed_tag(c_s)));
                p.write_csv(fs::File::create(&file)?)?;
                summary.push(json!({
                    "c_s": c_s,
                    "status": "ok",
                    "spectrum": report,
                    "amplitude_zeta": p.amplitude_zeta(),
                    "amplitude_u": p.amplitude_u(),
                    "residual": p.residual_norm,
                    "iterations": p.iterations,
                    "tail_amplitude": p.tail_amplitude,
                    "profile": file.file_name().map(|f| f.to_string_lossy().into_owned()),
                }));
            }
            Err(e) => {
                eprintln!("c_s = {c_s}: {e}");
                let code = exit_code(&e);
                if code == EXIT_INPUT {
                    return Err(e);
                }
                status = status.max(code);
                summary.push(json!({"c_s": c_s, "status": e.to_string()}));
            }
        }
    }
    if let Some(cspeeds) = curve_speeds {
        let setup = TravelingWaveSetup::new(s, cspeeds[0].max(f64::MIN_POSITIVE))?;
        let g = match grid {
            Some((l, n)) => crate::spectralkit::PeriodicGrid::new(l, n)?,
            None => {
                let slowest = cspeeds.iter().copied().fold(f64::INFINITY, f64::min);
                default_grid(slowest.max(1.0 + 1e-3), 2048)?
            }
        };
        let rows = speed_amplitude_curve(&setup, &cspeeds, &g);
        if rows.iter().any(|r| !r.converged()) {
            status = status.max(EXIT_NONCONVERGENCE);
        }
        write_curve_csv(&rows, fs::File::create(dir.join("curve.csv"))?)?;
    }
    let doc = json!({"model": s, "speeds": summary});
    fs::write(dir.join("travel.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(status)
}

fn initial_data(s: &SystemCoefficients, grid: &crate::spectralkit::PeriodicGrid, init: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let bad = || Error::Input(format!("cannot parse initial condition '{init}'"));
    let (kind, params) = init.split_once(':').ok_or_else(bad)?;
    match kind {
        "pulse" => {
            let (a, w) = params.split_once(',').ok_or_else(bad)?;
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let w: f64 = w.trim().parse().map_err(|_| bad())?;
            let eta = grid.sample(|x| a * (-(x / w) * (x / w)).exp());
            Ok((eta.clone(), eta))
        }
        "solitary" => {
            let c_s: f64 = params.trim().parse().map_err(|_| bad())?;
            let setup = TravelingWaveSetup::new(*s, c_s)?;
            let p = solve_classical(&setup, grid, None)?;
            Ok((p.zeta, p.u))
        }
        _ => Err(bad()),
    }
}

pub fn cmd_simulate(
    common: &Common,
    grid: &str,
    dt: f64,
    duration: f64,
    observe_every: usize,
    init: &str,
) -> Result<i32> {
    let s = load_model(&common.model)?;
    if s.disp.b < 0.0 || s.disp.d < 0.0 {
        return Err(Error::Unsupported(format!(
            "time integration needs b >= 0 and d >= 0 (got b = {}, d = {})",
            s.disp.b, s.disp.d
        )));
    }
    let (l, n) = parse_grid(grid)?;
    let config = RunConfig {
        coeffs: s,
        grid: GridSpec { half_length: l, n },
        dt,
        duration,
        observe_every,
    };
    let g = config.grid.build()?;
    let (eta0, u0) = initial_data(&s, &g, init)?;
    let dir = out_dir(common)?;
    fs::write(dir.join("run.json"), serde_json::to_string_pretty(&config)? + "\n")?;
    let out = sim::run(&config, eta0, u0)?;
    sim::write_diagnostics_csv(&out.history, fs::File::create(dir.join("diagnostics.csv"))?)?;
    out.final_state.write_csv(fs::File::create(dir.join("final.csv"))?)?;
    Ok(EXIT_OK)
}

/// Reads a report written by [`cmd_classify`] back into coefficients.
pub fn model_from_report(path: &Path) -> Result<SystemCoefficients> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let model = v
        .get("model")
        .ok_or_else(|| Error::Input("report has no 'model' entry".into()))?;
    parse_model(&model.to_string())
}
