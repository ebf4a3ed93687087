//! Command-line front end: each subcommand selects an experiment, an
//! optional `--config` file supplies everything else, and flags override
//! the file. Artifacts land in `--out` (default `out/`).
//!
//! Exit codes: 0 success, 1 negative scientific verdict (no scattering),
//! 2 configuration or usage problems, 3 detected blow-up, 4 I/O trouble.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use bo2d::config::{parse_config, Experiment, RunConfig};
use bo2d::harness::RatioKind;
use bo2d::run::{run, RunError};

#[derive(Parser)]
#[command(name = "bo2d", version, about = "Pseudospectral laboratory for a 2D dispersive equation")]
struct Cli {
    /// Configuration file of `key = value` lines; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for run artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the full equation and record norm diagnostics.
    Evolve,
    /// Compare the closed-form kernel quadrature with the multiplier propagator.
    KernelCheck,
    /// Fit the decay exponent of the free flow in the norm theta selects.
    Decay {
        /// Weight exponent in (0, 1]; 1 measures the sup norm, theta < 1
        /// the L^q norm with q = 2/(1-theta).
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Sample commutator and product inequality ratios over random fields.
    Commutators {
        /// kato | kato_ponce | leibniz | calderon | product_a | product_dx
        #[arg(long)]
        kind: Option<String>,
        /// Number of random seeds to draw.
        #[arg(long)]
        seeds: Option<u32>,
    },
    /// Tabulate the Duhamel weight integral J(t) on a decade ladder.
    Jbound {
        /// Nonlinearity power.
        #[arg(long)]
        p: Option<u32>,
        /// Final tabulated time.
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Extract a scattering state from a decaying run.
    Scatter {
        /// Convergence index in [s-1, s); defaults to s-1.
        #[arg(long)]
        r: Option<f64>,
    },
}

fn apply_command(cfg: &mut RunConfig, cmd: &Command) -> Result<(), RunError> {
    match cmd {
        Command::Evolve => cfg.experiment = Experiment::Evolve,
        Command::KernelCheck => cfg.experiment = Experiment::KernelCheck,
        Command::Decay { theta } => {
            let base = match cfg.experiment {
                Experiment::Decay { theta } => theta,
                _ => 1.0,
            };
            let theta = theta.unwrap_or(base);
            if !(theta > 0.0 && theta <= 1.0) {
                return Err(RunError::Setup(format!(
                    "theta must lie in (0, 1], got {theta}"
                )));
            }
            cfg.experiment = Experiment::Decay { theta };
        }
        Command::Commutators { kind, seeds } => {
            let (base_kind, base_seeds) = match &cfg.experiment {
                Experiment::Commutators { kind, seeds } => (*kind, *seeds),
                _ => (RatioKind::Kato, 50),
            };
            let kind = match kind {
                Some(text) => RatioKind::parse(text).ok_or_else(|| {
                    RunError::Setup(format!(
                        "kind: expected kato, kato_ponce, leibniz, calderon, product_a, \
                         or product_dx, got '{text}'"
                    ))
                })?,
                None => base_kind,
            };
            let seeds = seeds.unwrap_or(base_seeds);
            if seeds == 0 {
                return Err(RunError::Setup("seeds must be >= 1".to_string()));
            }
            cfg.experiment = Experiment::Commutators { kind, seeds };
        }
        Command::Jbound { p, tmax } => {
            if let Some(p) = p {
                if *p == 0 {
                    return Err(RunError::Setup("p must be >= 1".to_string()));
                }
                cfg.p = *p;
            }
            let base = match cfg.experiment {
                Experiment::Jbound { t_max } => t_max,
                _ => 100.0,
            };
            let t_max = tmax.unwrap_or(base);
            if !(t_max > 0.0) || !t_max.is_finite() {
                return Err(RunError::Setup(format!(
                    "t_max must be positive and finite, got {t_max}"
                )));
            }
            cfg.experiment = Experiment::Jbound { t_max };
        }
        Command::Scatter { r } => {
            let base = match cfg.experiment {
                Experiment::Scatter { r } => r,
                _ => None,
            };
            let r = r.or(base);
            if let Some(r) = r {
                if !(r >= cfg.s - 1.0 && r < cfg.s) {
                    return Err(RunError::Setup(format!(
                        "r must lie in [s-1, s) = [{}, {}), got {r}",
                        cfg.s - 1.0,
                        cfg.s
                    )));
                }
            }
            cfg.experiment = Experiment::Scatter { r };
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Vec<String>, RunError> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(path).map_err(|e| RunError::Setup(e.to_string()))?,
        None => RunConfig::default(),
    };
    apply_command(&mut cfg, &cli.command)?;
    run(&cfg, &cli.out)
}

fn main() {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(messages) => {
            for line in messages {
                println!("{line}");
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
