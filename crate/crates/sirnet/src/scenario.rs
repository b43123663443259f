//! Scenario files: UTF-8 text, `key = value` lines grouped under bracketed
//! section headers `[window]`, `[pathloss]`, `[fading]`, `[qos]`,
//! `[intensity]`, `[base]`. Numbers are decimal, comments start with `#`.
//!
//! ```text
//! # dense disk cell
//! [window]
//! shape = disk
//! r = 1.0
//!
//! [pathloss]
//! form = truncated-power
//! cap = 5.0
//! exponent = 4.0
//!
//! [fading]
//! law = uniform
//! a = 1.0
//! b = 2.0
//!
//! [qos]
//! form = truncated-identity
//! k = 1.9201
//!
//! [intensity]
//! form = uniform
//! mass = 1.0
//!
//! [base]
//! fading = fixed
//! value = 1.5
//! ```
//!
//! List-valued keys use comma-separated entries; pairs are written `x:y`.

use crate::model::{
    BaseFading, FadingLaw, NetworkModel, PathLoss, QosFunction, SpatialIntensity, Window,
};
use crate::numerics::PiecewiseLinear;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

type Section = BTreeMap<String, String>;

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            current = Some(name.trim().to_string());
            out.entry(name.trim().to_string()).or_default();
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
        })?;
        let section = current
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("line {}: key outside any section", lineno + 1)))?;
        out.get_mut(section)
            .unwrap()
            .insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn get<'a>(sec: &'a Section, name: &str, key: &str) -> Result<&'a str> {
    sec.get(key)
        .map(|s| s.as_str())
        .ok_or_else(|| Error::Parse(format!("[{name}] missing key `{key}`")))
}

fn num(sec: &Section, name: &str, key: &str) -> Result<f64> {
    let raw = get(sec, name, key)?;
    raw.parse::<f64>()
        .map_err(|_| Error::Parse(format!("[{name}] {key}: `{raw}` is not a number")))
}

fn num_list(sec: &Section, name: &str, key: &str) -> Result<Vec<f64>> {
    get(sec, name, key)?
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("[{name}] {key}: `{s}` is not a number")))
        })
        .collect()
}

/// Comma-separated `x:y` pairs.
fn pair_list(sec: &Section, name: &str, key: &str) -> Result<Vec<(f64, f64)>> {
    get(sec, name, key)?
        .split(',')
        .map(|s| {
            let (a, b) = s
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("[{name}] {key}: `{s}` is not an `x:y` pair")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("[{name}] {key}: `{t}` is not a number")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

pub fn parse_scenario(text: &str) -> Result<NetworkModel> {
    let sections = parse_sections(text)?;
    let section = |name: &str| -> Result<&Section> {
        sections
            .get(name)
            .ok_or_else(|| Error::Parse(format!("missing section [{name}]")))
    };

    let w = section("window")?;
    let window = match get(w, "window", "shape")? {
        "disk" => Window::Disk2D { r: num(w, "window", "r")? },
        "box" => Window::Box {
            d: num(w, "window", "d")? as usize,
            r: num(w, "window", "r")?,
        },
        other => return Err(Error::Parse(format!("[window] unknown shape `{other}`"))),
    };

    let p = section("pathloss")?;
    let path_loss = match get(p, "pathloss", "form")? {
        "truncated-power" => PathLoss::TruncatedPower {
            cap: num(p, "pathloss", "cap")?,
            exponent: num(p, "pathloss", "exponent")?,
        },
        "constant" => PathLoss::Constant(num(p, "pathloss", "value")?),
        "tabulated" => PathLoss::Tabulated {
            samples: pair_list(p, "pathloss", "samples")?,
            j2: num(p, "pathloss", "j2")?,
        },
        other => return Err(Error::Parse(format!("[pathloss] unknown form `{other}`"))),
    };

    let f = section("fading")?;
    let fading = parse_fading(f, "fading")?;

    let q = section("qos")?;
    let qos = match get(q, "qos", "form")? {
        "truncated-identity" => QosFunction::TruncatedIdentity { k: num(q, "qos", "k")? },
        "general" => QosFunction::General {
            samples: pair_list(q, "qos", "samples")?,
            rho_plus: num(q, "qos", "rho_plus")?,
            c_plus: num(q, "qos", "c_plus")?,
        },
        other => return Err(Error::Parse(format!("[qos] unknown form `{other}`"))),
    };

    let i = section("intensity")?;
    let intensity = match get(i, "intensity", "form")? {
        "uniform" => SpatialIntensity::UniformOnWindow { mass: num(i, "intensity", "mass")? },
        "lebesgue-disk" => {
            let r = window.half_width();
            SpatialIntensity::lebesgue_disk(r, num(i, "intensity", "mass")?)
        }
        "radial" => SpatialIntensity::Radial2D {
            q: PiecewiseLinear::new(pair_list(i, "intensity", "knots")?),
        },
        other => return Err(Error::Parse(format!("[intensity] unknown form `{other}`"))),
    };

    let b = section("base")?;
    let base = match get(b, "base", "fading")? {
        "fixed" => BaseFading::Fixed(num(b, "base", "value")?),
        "random" => BaseFading::Random(if b.contains_key("law") {
            parse_fading(b, "base")?
        } else {
            fading.clone()
        }),
        other => return Err(Error::Parse(format!("[base] unknown fading `{other}`"))),
    };

    let model = NetworkModel { window, path_loss, fading, qos, intensity, base };
    model.validate()?;
    Ok(model)
}

fn parse_fading(sec: &Section, name: &str) -> Result<FadingLaw> {
    Ok(match get(sec, name, "law")? {
        "uniform" => FadingLaw::Uniform { a: num(sec, name, "a")?, b: num(sec, name, "b")? },
        "atoms" => FadingLaw::DiscreteAtoms {
            values: num_list(sec, name, "values")?,
            weights: num_list(sec, name, "weights")?,
        },
        "density" => FadingLaw::TruncatedDensity { grid: pair_list(sec, name, "knots")? },
        other => return Err(Error::Parse(format!("[{name}] unknown law `{other}`"))),
    })
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<NetworkModel> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

/// FNV-1a hash of the scenario text with comments and whitespace stripped, so
/// cosmetic edits do not change the recorded identity.
pub fn scenario_hash(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        for b in line.split_whitespace().flat_map(str::bytes) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        // line separator keeps `a\nb` distinct from `ab`
        h ^= b'\n' as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
