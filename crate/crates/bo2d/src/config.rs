//! Plain-text run configuration.
//!
//! The format is flat `key = value` lines; `#` starts a comment, blank
//! lines are skipped, unknown and duplicate keys are rejected, and the
//! parser reports every problem it finds rather than stopping at the
//! first. Serialization renders floats with 17 significant digits, so
//! parse -> serialize -> parse is the identity.
//!
//! Keys and defaults:
//!
//! ```text
//! nx = 256              ny = 256          # grid points per axis (even, >= 8)
//! lx = 10*pi            ly = 10*pi        # half-lengths of the box
//! p = 2                 alpha = 1.0       # equation parameters
//! gamma = 0.0           s = 3.0           # working regularity (> 2)
//! dt = <auto>                             # omitted: from cfl_guard at t = 0
//! t_end = 1.0           snapshot_stride = 10
//! cfl_guard = 0.5                         # fraction of the stability bound
//! init = gaussian                         # gaussian | dx_gaussian |
//!                                         # random_smooth | file
//! amplitude = 1.0       width = 1.5       # gaussian, dx_gaussian
//! seed = 0              decay_rate = 6.0  # random_smooth
//! init_file = <path>                      # file
//! experiment = evolve                     # evolve | kernel_check | decay |
//!                                         # commutators | jbound | scatter
//! theta = 1.0                             # decay: weight exponent
//! kind = kato           seeds = 50        # commutators
//! t_max = 100.0                           # jbound
//! r = <s - 1>                             # scatter: convergence index
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::evolution::EquationParams;
use crate::grid::Grid2;
use crate::harness::RatioKind;
use crate::report::{fmt_g17, fnv1a};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid config:\n  {}", errors.join("\n  "))]
    Invalid { errors: Vec<String> },
}

/// Initial-data recipe.
#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    Gaussian { amplitude: f64, width: f64 },
    DxGaussian { amplitude: f64, width: f64 },
    RandomSmooth { seed: u64, decay_rate: f64 },
    File { path: String },
}

/// The experiment a run performs.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Evolve,
    KernelCheck,
    Decay { theta: f64 },
    Commutators { kind: RatioKind, seeds: u32 },
    Jbound { t_max: f64 },
    Scatter { r: Option<f64> },
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub p: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub s: f64,
    /// Absent: derive the step from the stability bound at `t = 0`.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub cfl_guard: f64,
    pub init: InitSpec,
    pub experiment: Experiment,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nx: 256,
            ny: 256,
            lx: 10.0 * std::f64::consts::PI,
            ly: 10.0 * std::f64::consts::PI,
            p: 2,
            alpha: 1.0,
            gamma: 0.0,
            s: 3.0,
            dt: None,
            t_end: 1.0,
            snapshot_stride: 10,
            cfl_guard: 0.5,
            init: InitSpec::Gaussian {
                amplitude: 1.0,
                width: 1.5,
            },
            experiment: Experiment::Evolve,
        }
    }
}

const KNOWN_KEYS: [&str; 24] = [
    "nx", "ny", "lx", "ly", "p", "alpha", "gamma", "s", "dt", "t_end",
    "snapshot_stride", "cfl_guard", "init", "amplitude", "width", "seed",
    "decay_rate", "init_file", "experiment", "theta", "kind", "seeds",
    "t_max", "r",
];

fn take<T: std::str::FromStr>(
    map: &BTreeMap<&str, &str>,
    key: &str,
    default: T,
    what: &str,
    errors: &mut Vec<String>,
) -> T {
    match map.get(key) {
        None => default,
        Some(text) => match text.parse::<T>() {
            Ok(v) => v,
            Err(_) => {
                errors.push(format!("{key}: expected {what}, got '{text}'"));
                default
            }
        },
    }
}

/// Parse and validate configuration text; collects every error.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut errors = Vec::new();
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("line {}: expected 'key = value', got '{line}'", n + 1));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            errors.push(format!("line {}: empty key or value", n + 1));
            continue;
        }
        if !KNOWN_KEYS.contains(&key) {
            errors.push(format!("unknown key '{key}'"));
            continue;
        }
        if map.insert(key, value).is_some() {
            errors.push(format!("duplicate key '{key}'"));
        }
    }

    let d = RunConfig::default();
    let nx = take(&map, "nx", d.nx, "an even integer", &mut errors);
    let ny = take(&map, "ny", d.ny, "an even integer", &mut errors);
    let lx = take(&map, "lx", d.lx, "a positive number", &mut errors);
    let ly = take(&map, "ly", d.ly, "a positive number", &mut errors);
    let p = take(&map, "p", d.p, "a positive integer", &mut errors);
    let alpha = take(&map, "alpha", d.alpha, "a number", &mut errors);
    let gamma = take(&map, "gamma", d.gamma, "a number", &mut errors);
    let s = take(&map, "s", d.s, "a number", &mut errors);
    let dt = map
        .get("dt")
        .map(|text| match text.parse::<f64>() {
            Ok(v) => v,
            Err(_) => {
                errors.push(format!("dt: expected a positive number, got '{text}'"));
                0.01
            }
        });
    let t_end = take(&map, "t_end", d.t_end, "a positive number", &mut errors);
    let snapshot_stride = take(
        &map,
        "snapshot_stride",
        d.snapshot_stride,
        "a positive integer",
        &mut errors,
    );
    let cfl_guard = take(&map, "cfl_guard", d.cfl_guard, "a number in (0, 1]", &mut errors);
    let amplitude: f64 = take(&map, "amplitude", 1.0, "a number", &mut errors);
    let width: f64 = take(&map, "width", 1.5, "a positive number", &mut errors);
    let seed = take(&map, "seed", 0u64, "an unsigned integer", &mut errors);
    let decay_rate = take(&map, "decay_rate", 6.0, "a number > 1", &mut errors);
    let theta = take(&map, "theta", 1.0, "a number in (0, 1]", &mut errors);
    let seeds = take(&map, "seeds", 50u32, "a positive integer", &mut errors);
    let t_max: f64 = take(&map, "t_max", 100.0, "a positive number", &mut errors);
    let r = map.get("r").map(|text| match text.parse::<f64>() {
        Ok(v) => v,
        Err(_) => {
            errors.push(format!("r: expected a number, got '{text}'"));
            s - 1.0
        }
    });

    // Structural validation through the module constructors, so the
    // config layer cannot drift from what the solver accepts.
    if let Err(e) = Grid2::new(nx, ny, lx, ly) {
        errors.push(e.to_string());
    }
    if let Err(e) = EquationParams::new(p, alpha, gamma, s) {
        errors.push(e.to_string());
    }
    if let Some(dt) = dt {
        if !(dt > 0.0) || !dt.is_finite() {
            errors.push(format!("dt must be positive and finite, got {dt}"));
        }
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        errors.push(format!("t_end must be positive and finite, got {t_end}"));
    }
    if snapshot_stride == 0 {
        errors.push("snapshot_stride must be >= 1".to_string());
    }
    if !(cfl_guard > 0.0 && cfl_guard <= 1.0) {
        errors.push(format!("cfl_guard must lie in (0, 1], got {cfl_guard}"));
    }
    if !amplitude.is_finite() {
        errors.push(format!("amplitude must be finite, got {amplitude}"));
    }
    if !(width > 0.0) || !width.is_finite() {
        errors.push(format!("width must be positive, got {width}"));
    }
    if !(decay_rate > 1.0) {
        errors.push(format!("decay_rate must exceed 1, got {decay_rate}"));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        errors.push(format!("theta must lie in (0, 1], got {theta}"));
    }
    if seeds == 0 {
        errors.push("seeds must be >= 1".to_string());
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        errors.push(format!("t_max must be positive and finite, got {t_max}"));
    }
    if let Some(r) = r {
        if !(r >= s - 1.0 && r < s) {
            errors.push(format!(
                "r must lie in [s-1, s) = [{}, {}), got {r}",
                s - 1.0,
                s
            ));
        }
    }

    let init = match map.get("init").copied().unwrap_or("gaussian") {
        "gaussian" => InitSpec::Gaussian { amplitude, width },
        "dx_gaussian" => InitSpec::DxGaussian { amplitude, width },
        "random_smooth" => InitSpec::RandomSmooth { seed, decay_rate },
        "file" => match map.get("init_file") {
            Some(path) => InitSpec::File {
                path: path.to_string(),
            },
            None => {
                errors.push("init = file requires init_file".to_string());
                InitSpec::Gaussian { amplitude, width }
            }
        },
        other => {
            errors.push(format!(
                "init: expected gaussian, dx_gaussian, random_smooth, or file, got '{other}'"
            ));
            InitSpec::Gaussian { amplitude, width }
        }
    };

    let kind = match map.get("kind") {
        None => RatioKind::Kato,
        Some(text) => RatioKind::parse(text).unwrap_or_else(|| {
            errors.push(format!(
                "kind: expected kato, kato_ponce, leibniz, calderon, product_a, \
                 or product_dx, got '{text}'"
            ));
            RatioKind::Kato
        }),
    };

    let experiment = match map.get("experiment").copied().unwrap_or("evolve") {
        "evolve" => Experiment::Evolve,
        "kernel_check" => Experiment::KernelCheck,
        "decay" => Experiment::Decay { theta },
        "commutators" => Experiment::Commutators { kind, seeds },
        "jbound" => Experiment::Jbound { t_max },
        "scatter" => Experiment::Scatter { r },
        other => {
            errors.push(format!(
                "experiment: expected evolve, kernel_check, decay, commutators, \
                 jbound, or scatter, got '{other}'"
            ));
            Experiment::Evolve
        }
    };

    if !errors.is_empty() {
        return Err(ConfigError::Invalid { errors });
    }
    Ok(RunConfig {
        nx,
        ny,
        lx,
        ly,
        p,
        alpha,
        gamma,
        s,
        dt,
        t_end,
        snapshot_stride,
        cfl_guard,
        init,
        experiment,
    })
}

/// Read and parse a configuration file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    parse_config_str(&std::fs::read_to_string(path)?)
}

impl RunConfig {
    /// Canonical text form; `parse_config_str` inverts it exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("nx", self.nx.to_string());
        kv("ny", self.ny.to_string());
        kv("lx", fmt_g17(self.lx));
        kv("ly", fmt_g17(self.ly));
        kv("p", self.p.to_string());
        kv("alpha", fmt_g17(self.alpha));
        kv("gamma", fmt_g17(self.gamma));
        kv("s", fmt_g17(self.s));
        if let Some(dt) = self.dt {
            kv("dt", fmt_g17(dt));
        }
        kv("t_end", fmt_g17(self.t_end));
        kv("snapshot_stride", self.snapshot_stride.to_string());
        kv("cfl_guard", fmt_g17(self.cfl_guard));
        match &self.init {
            InitSpec::Gaussian { amplitude, width } => {
                kv("init", "gaussian".to_string());
                kv("amplitude", fmt_g17(*amplitude));
                kv("width", fmt_g17(*width));
            }
            InitSpec::DxGaussian { amplitude, width } => {
                kv("init", "dx_gaussian".to_string());
                kv("amplitude", fmt_g17(*amplitude));
                kv("width", fmt_g17(*width));
            }
            InitSpec::RandomSmooth { seed, decay_rate } => {
                kv("init", "random_smooth".to_string());
                kv("seed", seed.to_string());
                kv("decay_rate", fmt_g17(*decay_rate));
            }
            InitSpec::File { path } => {
                kv("init", "file".to_string());
                kv("init_file", path.clone());
            }
        }
        match &self.experiment {
            Experiment::Evolve => kv("experiment", "evolve".to_string()),
            Experiment::KernelCheck => kv("experiment", "kernel_check".to_string()),
            Experiment::Decay { theta } => {
                kv("experiment", "decay".to_string());
                kv("theta", fmt_g17(*theta));
            }
            Experiment::Commutators { kind, seeds } => {
                kv("experiment", "commutators".to_string());
                kv("kind", kind.to_string());
                kv("seeds", seeds.to_string());
            }
            Experiment::Jbound { t_max } => {
                kv("experiment", "jbound".to_string());
                kv("t_max", fmt_g17(*t_max));
            }
            Experiment::Scatter { r } => {
                kv("experiment", "scatter".to_string());
                if let Some(r) = r {
                    kv("r", fmt_g17(*r));
                }
            }
        }
        out
    }

    /// FNV-1a fingerprint of the canonical serialization.
    pub fn hash(&self) -> u64 {
        fnv1a(self.serialize().as_bytes())
    }

    /// Structural advisories: conditions the run will handle by itself
    /// but the user should know about.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.gamma != 0.0
            && matches!(
                self.init,
                InitSpec::Gaussian { .. } | InitSpec::RandomSmooth { .. }
            )
        {
            out.push(
                "gamma != 0 requires zero x-mean; the initial data will be \
                 projected onto zero x-mean before the solve"
                    .to_string(),
            );
        }
        out
    }
}
