//! Experiment runner: turns a validated [`RunConfig`] into output files.
//!
//! Every run writes `run-manifest.txt` (config fingerprint, package
//! version, snapshot format version, and the canonical config text) into
//! the output directory, then the experiment-specific artifacts:
//!
//! * `evolve`: `diagnostics.csv`, `initial.bo2d`, `final.bo2d`
//! * `kernel_check`: `kernel_check.csv`
//! * `decay`: `decay.csv`, `decay_fit.csv`
//! * `commutators`: `ratios.csv`
//! * `jbound`: `jbound.csv`
//! * `scatter`: `diagnostics.csv`, `scatter.csv`, `phi_plus.bo2d`
//!
//! `run` returns human-readable summary lines for the caller to print.
//! Exit codes are part of the external contract: bad configuration or
//! inputs exit 2, detected blow-up exits 3, filesystem trouble exits 4,
//! and a clean no-scattering verdict exits 1.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{Experiment, InitSpec, RunConfig};
use crate::diagnostics::{
    boundary_strip_mass, fit_decay, hs_norm, j_closed_p2, j_integral, l2_norm, linf_norm,
    lp_norm,
};
use crate::evolution::{evolve, stability_bound, EquationParams, SolveSchedule, Trajectory};
use crate::field::SpectralField;
use crate::grid::Grid2;
use crate::harness::{
    random_smooth_field, ratio_report, HarnessTask, LambdaReading, RatioKind, RatioParams,
    RatioReport,
};
use crate::kernel::propagate_via_kernel;
use crate::line::Line;
use crate::propagator::propagate;
use crate::report::{
    decay_fit_csv, decay_series_csv, diagnostics_csv, fmt_g17, jtable_csv, ratio_csv,
    scatter_csv,
};
use crate::scattering::{check_converged, scatter_record};
use crate::snapshot::{read_snapshot, write_snapshot, SNAPSHOT_VERSION};

/// Fraction of each half-length that counts as the boundary strip when
/// deciding how long a dispersive window the periodic box affords.
pub const STRIP_FRAC: f64 = 0.1;

/// Relative boundary-strip mass at which wrap-around is declared.
pub const STRIP_MASS_LIMIT: f64 = 1e-4;

/// Sample count for the decay-fit time ladder.
const DECAY_SAMPLES: usize = 48;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Setup(String),
    #[error("blow-up detected at t = {0}")]
    BlowUp(f64),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    NoScattering(String),
}

impl RunError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Setup(_) => 2,
            RunError::BlowUp(_) => 3,
            RunError::Io { .. } => 4,
            RunError::NoScattering(_) => 1,
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Build the initial field a config describes. The file variant must
/// match the configured grid exactly.
pub fn make_initial(cfg: &RunConfig) -> Result<SpectralField, RunError> {
    let grid = Grid2::new(cfg.nx, cfg.ny, cfg.lx, cfg.ly).map_err(|e| RunError::Setup(e.to_string()))?;
    let field = match &cfg.init {
        InitSpec::Gaussian { amplitude, width } => {
            let (a, w2) = (*amplitude, width * width);
            SpectralField::from_fn(grid, move |x, y| a * (-(x * x + y * y) / (2.0 * w2)).exp())
        }
        InitSpec::DxGaussian { amplitude, width } => {
            let (a, w2) = (*amplitude, width * width);
            SpectralField::from_fn(grid, move |x, y| {
                -(x / w2) * a * (-(x * x + y * y) / (2.0 * w2)).exp()
            })
        }
        InitSpec::RandomSmooth { seed, decay_rate } => {
            random_smooth_field(*seed, grid, *decay_rate)
        }
        InitSpec::File { path } => {
            let (field, _s) = read_snapshot(path).map_err(|e| {
                RunError::Setup(format!("cannot load initial data from {path}: {e}"))
            })?;
            let have = *field.grid();
            if have != grid {
                return Err(RunError::Setup(format!(
                    "initial data grid {}x{} on [{}, {}] does not match the configured \
                     grid {}x{} on [{}, {}]",
                    have.nx(),
                    have.ny(),
                    have.lx(),
                    have.ly(),
                    grid.nx(),
                    grid.ny(),
                    grid.lx(),
                    grid.ly()
                )));
            }
            field
        }
    };
    Ok(field)
}

fn equation_params(cfg: &RunConfig) -> Result<EquationParams, RunError> {
    EquationParams::new(cfg.p, cfg.alpha, cfg.gamma, cfg.s)
        .map_err(|e| RunError::Setup(e.to_string()))
}

/// The time step a config implies: explicit `dt` wins, otherwise the
/// guard fraction of the stability bound at `t = 0`.
pub fn effective_dt(cfg: &RunConfig, phi: &SpectralField) -> f64 {
    match cfg.dt {
        Some(dt) => dt,
        None => {
            let bound = stability_bound(linf_norm(phi), cfg.p, phi.grid().xi_max());
            let dt = cfg.cfl_guard * bound;
            if dt.is_finite() && dt > 0.0 {
                dt.min(cfg.t_end)
            } else {
                cfg.t_end / 100.0
            }
        }
    }
}

fn solve(cfg: &RunConfig, phi: &SpectralField, messages: &mut Vec<String>) -> Result<Trajectory, RunError> {
    let params = equation_params(cfg)?;
    let dt = effective_dt(cfg, phi);
    if cfg.dt.is_none() {
        messages.push(format!("dt = {} (automatic: {} of the stability bound)", fmt_g17(dt), cfg.cfl_guard));
    }
    let schedule = SolveSchedule::new(dt, cfg.t_end, cfg.snapshot_stride, cfg.cfl_guard)
        .map_err(|e| RunError::Setup(e.to_string()))?;
    let traj = evolve(phi, &params, &schedule).map_err(|e| RunError::Setup(e.to_string()))?;
    for w in traj.warnings() {
        messages.push(format!("warning: {w}"));
    }
    Ok(traj)
}

fn manifest(cfg: &RunConfig) -> String {
    format!(
        "config_hash = {:016x}\npackage_version = {}\nsnapshot_format = BO2D v{}\n\n{}",
        cfg.hash(),
        env!("CARGO_PKG_VERSION"),
        SNAPSHOT_VERSION,
        cfg.serialize()
    )
}

/// Execute a config, writing artifacts into `out_dir` (created if
/// missing). Returns summary lines for the caller to print.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<String>, RunError> {
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut messages = Vec::new();
    messages.push(format!("config hash {:016x}", cfg.hash()));
    for w in cfg.warnings() {
        messages.push(format!("warning: {w}"));
    }
    write_text(&out_dir.join("run-manifest.txt"), &manifest(cfg))?;

    match &cfg.experiment {
        Experiment::Evolve => run_evolve(cfg, out_dir, &mut messages)?,
        Experiment::KernelCheck => run_kernel_check(cfg, out_dir, &mut messages)?,
        Experiment::Decay { theta } => run_decay(cfg, *theta, out_dir, &mut messages)?,
        Experiment::Commutators { kind, seeds } => {
            run_commutators(cfg, *kind, *seeds, out_dir, &mut messages)?
        }
        Experiment::Jbound { t_max } => run_jbound(cfg, *t_max, out_dir, &mut messages)?,
        Experiment::Scatter { r } => run_scatter(cfg, *r, out_dir, &mut messages)?,
    }
    Ok(messages)
}

fn run_evolve(cfg: &RunConfig, out: &Path, messages: &mut Vec<String>) -> Result<(), RunError> {
    let phi = make_initial(cfg)?;
    write_snapshot(out.join("initial.bo2d"), &phi, cfg.s).map_err(|e| RunError::Io {
        path: out.join("initial.bo2d"),
        source: std::io::Error::other(e.to_string()),
    })?;
    let traj = solve(cfg, &phi, messages)?;
    write_text(&out.join("diagnostics.csv"), &diagnostics_csv(traj.records()))?;
    if let Some(t) = traj.blown_up() {
        return Err(RunError::BlowUp(t));
    }
    let last = traj.last();
    write_snapshot(out.join("final.bo2d"), last, cfg.s).map_err(|e| RunError::Io {
        path: out.join("final.bo2d"),
        source: std::io::Error::other(e.to_string()),
    })?;
    messages.push(format!(
        "evolved to t = {}: |u|_L2 = {}, |u|_inf = {}",
        fmt_g17(last.time()),
        fmt_g17(l2_norm(last)),
        fmt_g17(linf_norm(last))
    ));
    Ok(())
}

fn run_kernel_check(cfg: &RunConfig, out: &Path, messages: &mut Vec<String>) -> Result<(), RunError> {
    let phi = make_initial(cfg)?;
    let params = equation_params(cfg)?;
    let t = cfg.t_end;
    let via_kernel =
        propagate_via_kernel(&phi, t, &params).map_err(|e| RunError::Setup(e.to_string()))?;
    for w in &via_kernel.warnings {
        messages.push(format!("warning: {w}"));
    }
    let want = propagate(&phi, t, &params);
    let denom = l2_norm(&want);
    let diff = via_kernel
        .field
        .sub(&want)
        .expect("kernel and multiplier paths share the grid");
    let rel = if denom == 0.0 { l2_norm(&diff) } else { l2_norm(&diff) / denom };
    write_text(
        &out.join("kernel_check.csv"),
        &format!("t,rel_l2\n{},{}\n", fmt_g17(t), fmt_g17(rel)),
    )?;
    messages.push(format!(
        "kernel quadrature vs multiplier at t = {}: relative L2 discrepancy {}",
        fmt_g17(t),
        fmt_g17(rel)
    ));
    Ok(())
}

fn run_decay(cfg: &RunConfig, theta: f64, out: &Path, messages: &mut Vec<String>) -> Result<(), RunError> {
    let phi = make_initial(cfg)?;
    let params = equation_params(cfg)?;
    let (label, measure): (String, Box<dyn Fn(&SpectralField) -> f64>) = if theta == 1.0 {
        ("linf".to_string(), Box::new(linf_norm))
    } else {
        let q = 2.0 / (1.0 - theta);
        (format!("l{q}"), Box::new(move |u: &SpectralField| lp_norm(u, q)))
    };

    let mut series = Vec::new();
    let mut truncated_at = None;
    for k in 1..=DECAY_SAMPLES {
        let t = cfg.t_end * k as f64 / DECAY_SAMPLES as f64;
        let u = propagate(&phi, -t, &params);
        if boundary_strip_mass(&u, STRIP_FRAC) >= STRIP_MASS_LIMIT {
            truncated_at = Some(t);
            break;
        }
        series.push((t, measure(&u)));
    }
    if let Some(t) = truncated_at {
        messages.push(format!(
            "window truncated at t = {}: boundary-strip mass reached {STRIP_MASS_LIMIT:e}",
            fmt_g17(t)
        ));
    }
    write_text(&out.join("decay.csv"), &decay_series_csv(&series))?;
    let Some(&(t_hi, _)) = series.last() else {
        return Err(RunError::Setup(
            "no usable decay window: the field reaches the boundary before the first sample"
                .to_string(),
        ));
    };
    let t_lo = series[0].0;
    let fit = fit_decay(&series, (t_lo, t_hi)).map_err(|e| RunError::Setup(e.to_string()))?;
    write_text(&out.join("decay_fit.csv"), &decay_fit_csv(&[(label.clone(), fit)]))?;
    messages.push(format!(
        "|exp(-tA)phi|_{label} ~ t^({}) on [{}, {}], r^2 = {}",
        fmt_g17(fit.exponent),
        fmt_g17(t_lo),
        fmt_g17(t_hi),
        fmt_g17(fit.r_squared)
    ));
    Ok(())
}

fn run_commutators(
    cfg: &RunConfig,
    kind: RatioKind,
    seeds: u32,
    out: &Path,
    messages: &mut Vec<String>,
) -> Result<(), RunError> {
    let grid = Grid2::new(cfg.nx, cfg.ny, cfg.lx, cfg.ly).map_err(|e| RunError::Setup(e.to_string()))?;
    let line = Line::new(cfg.nx * 4, cfg.lx).map_err(|e| RunError::Setup(e.to_string()))?;
    let seed_list: Vec<u64> = (0..seeds as u64).collect();
    let readings: &[LambdaReading] = match kind {
        RatioKind::Kato | RatioKind::ProductA => {
            &[LambdaReading::Homogeneous, LambdaReading::Inhomogeneous]
        }
        _ => &[LambdaReading::Homogeneous],
    };
    let mut reports: Vec<RatioReport> = Vec::new();
    for &lambda in readings {
        let params = RatioParams {
            s: cfg.s,
            lambda,
            ..RatioParams::default()
        };
        let task = HarnessTask {
            kind,
            params,
            grid,
            line: line.clone(),
            seeds: seed_list.clone(),
        };
        let report = ratio_report(&task).map_err(|e| RunError::Setup(e.to_string()))?;
        messages.push(format!(
            "{} [{}]: max ratio {} over {} seeds, x2 refinement moves it by {}",
            report.kind,
            report.params.label(report.kind),
            fmt_g17(report.max_ratio),
            report.samples.len(),
            fmt_g17(report.refinement_ratio)
        ));
        reports.push(report);
    }
    write_text(&out.join("ratios.csv"), &ratio_csv(&reports))?;
    Ok(())
}

fn run_jbound(cfg: &RunConfig, t_max: f64, out: &Path, messages: &mut Vec<String>) -> Result<(), RunError> {
    let mut times = Vec::new();
    let mut t = 1.0;
    while t < t_max {
        times.push(t);
        t *= 10.0;
    }
    times.push(t_max);
    let rows: Vec<(f64, f64, Option<f64>)> = times
        .iter()
        .map(|&t| {
            let j = j_integral(t, cfg.p);
            let closed = (cfg.p == 2).then(|| j_closed_p2(t));
            (t, j, closed)
        })
        .collect();
    write_text(&out.join("jbound.csv"), &jtable_csv(&rows))?;
    let (t_last, j_last, closed) = rows[rows.len() - 1];
    messages.push(format!("J({}) = {} at p = {}", fmt_g17(t_last), fmt_g17(j_last), cfg.p));
    if let Some(c) = closed {
        messages.push(format!(
            "closed form agrees to {}",
            fmt_g17((j_last - c).abs() / c.abs().max(f64::MIN_POSITIVE))
        ));
    }
    Ok(())
}

fn run_scatter(
    cfg: &RunConfig,
    r: Option<f64>,
    out: &Path,
    messages: &mut Vec<String>,
) -> Result<(), RunError> {
    let phi = make_initial(cfg)?;
    let traj = solve(cfg, &phi, messages)?;
    write_text(&out.join("diagnostics.csv"), &diagnostics_csv(traj.records()))?;
    if let Some(t) = traj.blown_up() {
        return Err(RunError::BlowUp(t));
    }
    let params = equation_params(cfg)?;
    let r = r.unwrap_or(cfg.s - 1.0);
    let record =
        scatter_record(&traj, &params, r).map_err(|e| RunError::Setup(e.to_string()))?;
    write_text(&out.join("scatter.csv"), &scatter_csv(&record))?;
    let phi_plus = &record.profiles[record.profiles.len() - 1];
    write_snapshot(out.join("phi_plus.bo2d"), phi_plus, cfg.s).map_err(|e| RunError::Io {
        path: out.join("phi_plus.bo2d"),
        source: std::io::Error::other(e.to_string()),
    })?;
    messages.push(format!(
        "|phi+|_L2 = {} vs |u(t_end)|_L2 = {}",
        fmt_g17(l2_norm(phi_plus)),
        fmt_g17(l2_norm(traj.last()))
    ));
    let m = record.cauchy_increments.len();
    messages.push(format!(
        "final Cauchy increments in H^{}: {} -> {}",
        fmt_g17(r),
        fmt_g17(record.cauchy_increments[m - 2]),
        fmt_g17(record.cauchy_increments[m - 1])
    ));
    check_converged(&record).map_err(|e| RunError::NoScattering(e.to_string()))?;
    messages.push(format!(
        "pulled-back profiles are Cauchy; wrote phi_plus.bo2d (|phi+|_H{} = {})",
        fmt_g17(r),
        fmt_g17(hs_norm(phi_plus, r))
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;
    use crate::snapshot::read_snapshot;
    use std::sync::atomic::{AtomicU64, Ordering};

    fn temp_dir(tag: &str) -> PathBuf {
        static STAMP: AtomicU64 = AtomicU64::new(0);
        let n = STAMP.fetch_add(1, Ordering::Relaxed);
        let dir = std::env::temp_dir().join(format!(
            "bo2d-run-{tag}-{}-{n}",
            std::process::id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn small_grid_prefix() -> &'static str {
        "nx = 32\nny = 32\nlx = 12.566370614359172\nly = 12.566370614359172\n"
    }

    #[test]
    fn evolve_run_writes_manifest_diagnostics_and_snapshots() {
        let cfg = parse_config_str(&format!(
            "{}init = dx_gaussian\namplitude = 0.1\ndt = 0.01\nt_end = 0.1\nsnapshot_stride = 2\n",
            small_grid_prefix()
        ))
        .unwrap();
        let dir = temp_dir("evolve");
        let messages = run(&cfg, &dir).unwrap();
        for name in ["run-manifest.txt", "diagnostics.csv", "initial.bo2d", "final.bo2d"] {
            assert!(dir.join(name).exists(), "missing {name}");
        }
        let manifest = std::fs::read_to_string(dir.join("run-manifest.txt")).unwrap();
        assert!(manifest.contains(&format!("config_hash = {:016x}", cfg.hash())));
        let diag = std::fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
        assert!(diag.starts_with("t,l2,hs,xs,linf,w1inf,weighted,gronwall_integrand\n"));
        assert!(diag.lines().count() > 3, "several snapshot rows expected:\n{diag}");
        let (final_field, s) = read_snapshot(dir.join("final.bo2d")).unwrap();
        assert_eq!(s, cfg.s);
        assert!((final_field.time() - 0.1).abs() < 1e-12);
        assert!(messages.iter().any(|m| m.contains("evolved to")), "{messages:?}");
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn blow_up_exits_with_code_three_but_keeps_diagnostics() {
        let cfg = parse_config_str(&format!(
            "{}amplitude = 2000000.0\ndt = 0.01\nt_end = 0.1\n",
            small_grid_prefix()
        ))
        .unwrap();
        let dir = temp_dir("blowup");
        let err = run(&cfg, &dir).unwrap_err();
        assert_eq!(err.exit_code(), 3, "expected blow-up exit, got {err}");
        assert!(dir.join("diagnostics.csv").exists(), "partial diagnostics must survive");
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn kernel_check_reports_a_discrepancy_without_failing() {
        let cfg = parse_config_str(&format!("{}experiment = kernel_check\n", small_grid_prefix()))
            .unwrap();
        let dir = temp_dir("kernel");
        let messages = run(&cfg, &dir).unwrap();
        let csv = std::fs::read_to_string(dir.join("kernel_check.csv")).unwrap();
        assert!(csv.starts_with("t,rel_l2\n"));
        let row = csv.lines().nth(1).unwrap();
        let rel: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(rel.is_finite() && rel >= 0.0);
        assert!(
            messages.iter().any(|m| m.contains("relative L2 discrepancy")),
            "{messages:?}"
        );
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn decay_run_fits_a_negative_exponent_for_localized_data() {
        let cfg = parse_config_str(
            "nx = 96\nny = 96\nlx = 62.83185307179586\nly = 62.83185307179586\n\
             init = dx_gaussian\nexperiment = decay\ntheta = 1.0\nt_end = 6.0\n",
        )
        .unwrap();
        let dir = temp_dir("decay");
        let messages = run(&cfg, &dir).unwrap();
        let fit = std::fs::read_to_string(dir.join("decay_fit.csv")).unwrap();
        let row = fit.lines().nth(1).unwrap();
        assert!(row.starts_with("linf,"), "label row: {row}");
        let exponent: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(
            exponent < -0.3,
            "free flow of localized data must lose sup norm, got exponent {exponent}\n{messages:?}"
        );
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn commutator_run_writes_one_report_per_reading() {
        let cfg = parse_config_str(&format!(
            "{}experiment = commutators\nkind = product_a\nseeds = 3\n",
            small_grid_prefix()
        ))
        .unwrap();
        let dir = temp_dir("commutators");
        let messages = run(&cfg, &dir).unwrap();
        let csv = std::fs::read_to_string(dir.join("ratios.csv")).unwrap();
        assert!(csv.starts_with("kind,params,seed,lhs,rhs,ratio\n"));
        let summaries = csv.lines().filter(|l| l.contains(",summary,")).count();
        assert_eq!(summaries, 2, "homogeneous and inhomogeneous summaries:\n{csv}");
        assert_eq!(messages.iter().filter(|m| m.contains("max ratio")).count(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn jbound_run_tabulates_decades_and_checks_the_closed_form() {
        let cfg = parse_config_str("experiment = jbound\nt_max = 100.0\n").unwrap();
        let dir = temp_dir("jbound");
        let messages = run(&cfg, &dir).unwrap();
        let csv = std::fs::read_to_string(dir.join("jbound.csv")).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "t,j,closed_form");
        assert_eq!(rows.len(), 1 + 3, "t = 1, 10, 100:\n{csv}");
        assert!(
            messages.iter().any(|m| m.contains("closed form agrees")),
            "{messages:?}"
        );
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn scatter_run_on_weak_nonlinearity_reports_no_scattering_with_exit_one() {
        let cfg = parse_config_str(&format!(
            "{}p = 1\ninit = dx_gaussian\namplitude = 1.5\ndt = 0.002\nt_end = 0.3\n\
             snapshot_stride = 30\nexperiment = scatter\n",
            small_grid_prefix()
        ))
        .unwrap();
        let dir = temp_dir("noscatter");
        match run(&cfg, &dir) {
            Err(err) => {
                assert_eq!(err.exit_code(), 1, "{err}");
                assert!(err.to_string().contains("no scattering detected"), "{err}");
                assert!(dir.join("scatter.csv").exists(), "evidence must be written anyway");
            }
            Ok(messages) => panic!("expected a no-scattering verdict, got {messages:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn scatter_run_on_linear_flow_converges_and_writes_phi_plus() {
        let cfg = parse_config_str(&format!(
            "{}p = 3\ninit = dx_gaussian\namplitude = 0.05\ndt = 0.005\nt_end = 0.2\n\
             snapshot_stride = 10\nexperiment = scatter\n",
            small_grid_prefix()
        ))
        .unwrap();
        let dir = temp_dir("scatter");
        let messages = run(&cfg, &dir).unwrap();
        assert!(dir.join("phi_plus.bo2d").exists());
        let (phi_plus, _) = read_snapshot(dir.join("phi_plus.bo2d")).unwrap();
        assert!(l2_norm(&phi_plus) > 0.0);
        assert!(messages.iter().any(|m| m.contains("Cauchy")), "{messages:?}");
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn file_init_checks_the_grid_then_round_trips_through_a_run() {
        let grid = Grid2::new(32, 32, 5.0, 5.0).unwrap();
        let seed_field = SpectralField::from_fn(grid, |x, y| {
            0.2 * (-(x * x + y * y) / 3.0).exp() * (x + 0.3 * y)
        });
        let dir = temp_dir("fileinit");
        let src = dir.join("start.bo2d");
        write_snapshot(&src, &seed_field, 3.0).unwrap();

        let mismatched = parse_config_str(&format!(
            "{}init = file\ninit_file = {}\ndt = 0.01\nt_end = 0.05\n",
            small_grid_prefix(),
            src.display()
        ))
        .unwrap();
        let err = run(&mismatched, &dir).unwrap_err();
        assert_eq!(err.exit_code(), 2, "grid mismatch is a setup failure: {err}");
        assert!(err.to_string().contains("does not match"), "{err}");

        let matched = parse_config_str(&format!(
            "nx = 32\nny = 32\nlx = 5.0\nly = 5.0\ninit = file\ninit_file = {}\n\
             dt = 0.01\nt_end = 0.05\n",
            src.display()
        ))
        .unwrap();
        run(&matched, &dir).unwrap();
        assert!(dir.join("final.bo2d").exists());
        std::fs::remove_dir_all(&dir).ok();
    }
}
