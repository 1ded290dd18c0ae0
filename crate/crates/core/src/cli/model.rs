use std::path::Path;

use serde_json::{Map, Value};

use crate::coeffs::{abcd_from_theta, DispersionCoefficients, NonlinearCoefficients, SystemCoefficients, ThetaNuMu};
use crate::error::{Error, Result};

pub const PRESET_NAMES: [&str; 5] = ["abcd-classic", "symmetric", "ms-modified", "figure2", "kdvkdv"];

const SIXTH: f64 = 1.0 / 6.0;

fn figure2_nonlinearity() -> NonlinearCoefficients {
    NonlinearCoefficients {
        alpha12: 0.46,
        beta11: 0.23,
        beta22: 0.73,
        ..Default::default()
    }
}

/// Built-in coefficient sets.
///
/// - `abcd-classic`: `A = eta u`, `B = u^2 / 2`, `a = c = 0`, `b = d = 1/6`.
/// - `symmetric`: `A = eta u / 2`, `B = (eta^2 + 3 u^2) / 4`, `a = c = 1/6`, `b = d = 0`.
/// - `ms-modified`: `A = eta u`, `B = (eta^2 + u^2) / 2`, `a = c = 0`, `b = d = 1/6`.
/// - `figure2`: `a = c = 0`, `b = d = 1/6`, `alpha12 = 0.46`, `beta11 = 0.23`, `beta22 = 0.73`.
/// - `kdvkdv`: `a = c = 1/6`, `b = d = 0` with the `figure2` nonlinearity.
pub fn preset(name: &str) -> Option<SystemCoefficients> {
    let bbm = DispersionCoefficients::new(0.0, SIXTH, 0.0, SIXTH);
    let kdv = DispersionCoefficients::new(SIXTH, 0.0, SIXTH, 0.0);
    let s = match name {
        "abcd-classic" => SystemCoefficients::new(
            bbm,
            NonlinearCoefficients {
                alpha12: 1.0,
                beta22: 0.5,
                ..Default::default()
            },
        ),
        "symmetric" => SystemCoefficients::new(
            kdv,
            NonlinearCoefficients {
                alpha12: 0.5,
                beta11: 0.25,
                beta22: 0.75,
                ..Default::default()
            },
        ),
        "ms-modified" => SystemCoefficients::new(
            bbm,
            NonlinearCoefficients {
                alpha12: 1.0,
                beta11: 0.5,
                beta22: 0.5,
                ..Default::default()
            },
        ),
        "figure2" => SystemCoefficients::new(bbm, figure2_nonlinearity()),
        "kdvkdv" => SystemCoefficients::new(kdv, figure2_nonlinearity()),
        _ => return None,
    };
    Some(s)
}

const DISP_KEYS: [&str; 4] = ["a", "b", "c", "d"];
const THETA_KEYS: [&str; 3] = ["theta", "nu", "mu"];
const NL_KEYS: [&str; 6] = ["alpha11", "alpha12", "alpha22", "beta11", "beta12", "beta22"];

fn number(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    match obj.get(key) {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::Input(format!("model key '{key}' must be a number"))),
        None => Err(Error::Input(format!("model is missing key '{key}'"))),
    }
}

/// Parses a model document: either `a, b, c, d` or `theta, nu, mu`, plus the
/// six nonlinear coefficients. Exactly one dispersion source is allowed.
pub fn parse_model(text: &str) -> Result<SystemCoefficients> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("model is not valid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Input("model must be a JSON object".into()))?;
    let has_disp = DISP_KEYS.iter().any(|k| obj.contains_key(*k));
    let has_theta = THETA_KEYS.iter().any(|k| obj.contains_key(*k));
    let disp = match (has_disp, has_theta) {
        (true, true) => {
            return Err(Error::Input(
                "model gives both (a, b, c, d) and (theta, nu, mu); provide exactly one".into(),
            ))
        }
        (false, false) => return Err(Error::Input("model needs (a, b, c, d) or (theta, nu, mu)".into())),
        (true, false) => DispersionCoefficients::new(
            number(obj, "a")?,
            number(obj, "b")?,
            number(obj, "c")?,
            number(obj, "d")?,
        ),
        (false, true) => {
            let p = ThetaNuMu::new(number(obj, "theta")?, number(obj, "nu")?, number(obj, "mu")?)?;
            abcd_from_theta(&p)?
        }
    };
    let mut nl = [0.0; 6];
    for (slot, key) in nl.iter_mut().zip(NL_KEYS) {
        *slot = number(obj, key)?;
    }
    let s = SystemCoefficients::new(
        disp,
        NonlinearCoefficients {
            alpha11: nl[0],
            alpha12: nl[1],
            alpha22: nl[2],
            beta11: nl[3],
            beta12: nl[4],
            beta22: nl[5],
        },
    );
    s.validate().map_err(|e| Error::Input(e.to_string()))?;
    Ok(s)
}

/// A preset name or a path to a model file.
pub fn load_model(arg: &str) -> Result<SystemCoefficients> {
    if let Some(s) = preset(arg) {
        return Ok(s);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Error::Input(format!(
            "'{arg}' is neither a preset ({}) nor an existing file",
            PRESET_NAMES.join(", ")
        )));
    }
    parse_model(&std::fs::read_to_string(path)?)
}

/// `a,b,...` or an inclusive range `start:stop:count`.
pub fn parse_speeds(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Input(format!("cannot parse speeds '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let start: f64 = start.trim().parse().map_err(|_| bad())?;
            let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            match count {
                0 => Err(bad()),
                1 => Ok(vec![start]),
                _ => Ok((0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect()),
            }
        }
        [list] => list.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect(),
        _ => Err(bad()),
    }
}

/// `L,N`.
pub fn parse_grid(text: &str) -> Result<(f64, usize)> {
    let bad = || Error::Input(format!("grid must be 'L,N', got '{text}'"));
    let (l, n) = text.split_once(',').ok_or_else(bad)?;
    Ok((l.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}
