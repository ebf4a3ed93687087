//! Scattering-state extraction.
//!
//! For a decaying nonlinear solution the pulled-back profiles
//! `v(t) = exp(tA) u(t)` form a Cauchy family; their limit is the
//! scattering state `phi+`, and `|u(t) - exp(-tA) phi+|_{H^r}` measures
//! how closely the solution rides the free flow. The artifact takes the
//! last recorded profile as `phi+` and reports the Cauchy increments as
//! the convergence evidence; no extrapolation is attempted because the
//! underlying theory guarantees a limit but no rate.
//!
//! The periodic box cannot scatter forever: once the dispersed tail wraps
//! around, the increments stop decreasing. Callers bound the time window
//! by the boundary-strip mass of the solution (see
//! `diagnostics::boundary_strip_mass`).

use thiserror::Error;

use crate::diagnostics::hs_norm;
use crate::evolution::{EquationParams, Trajectory};
use crate::field::SpectralField;
use crate::propagator::Propagator;

/// Increments at or below this relative size count as converged at
/// working precision (the linear flow reproduces `phi` exactly up to
/// rounding, not bitwise).
pub const CONVERGED_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error("convergence index r = {r} must lie in [s-1, s) for s = {s}")]
    InvalidR { r: f64, s: f64 },
    #[error("scattering extraction needs at least 3 snapshots, got {0}")]
    TooFewSnapshots(usize),
    #[error(
        "no scattering detected: the final Cauchy increments grow ({previous:e} -> {last:e})"
    )]
    NoScattering { previous: f64, last: f64 },
}

/// Pulled-back profiles of one trajectory and their Cauchy increments.
#[derive(Debug, Clone)]
pub struct ScatterRecord {
    pub times: Vec<f64>,
    pub profiles: Vec<SpectralField>,
    /// `|profile_{k+1} - profile_k|_{H^r}`, one entry per snapshot gap.
    pub cauchy_increments: Vec<f64>,
    /// `|u(t_k) - exp(-t_k A) phi+|_{H^r}` per snapshot.
    pub distances: Vec<f64>,
    pub r: f64,
}

/// Apply the inverse group `exp(tA)`: the exact inverse of propagation
/// by `t`. The field clock moves back by `t`.
pub fn pullback(u_t: &SpectralField, t: f64, params: &EquationParams) -> SpectralField {
    Propagator::new(*u_t.grid(), params).propagate(u_t, -t)
}

/// Pull back every snapshot and measure the Cauchy increments and the
/// distances to the final profile, with no judgement about convergence.
/// This is the raw evidence; `scattering_state` applies the verdict.
pub fn scatter_record(
    traj: &Trajectory,
    params: &EquationParams,
    r: f64,
) -> Result<ScatterRecord, ScatteringError> {
    let s = params.s();
    if !(r >= s - 1.0 && r < s) {
        return Err(ScatteringError::InvalidR { r, s });
    }
    let snaps = traj.snapshots();
    if snaps.len() < 3 {
        return Err(ScatteringError::TooFewSnapshots(snaps.len()));
    }
    let prop = Propagator::new(*snaps[0].grid(), params);
    let times: Vec<f64> = snaps.iter().map(|u| u.time()).collect();
    let profiles: Vec<SpectralField> = snaps
        .iter()
        .map(|u| prop.propagate(u, -u.time()))
        .collect();
    let cauchy_increments: Vec<f64> = profiles
        .windows(2)
        .map(|w| hs_norm(&w[1].sub(&w[0]).expect("one grid per trajectory"), r))
        .collect();
    let candidate = &profiles[profiles.len() - 1];
    let distances: Vec<f64> = snaps
        .iter()
        .map(|u| {
            let free = prop.propagate(candidate, u.time());
            hs_norm(&u.sub(&free).expect("one grid per trajectory"), r)
        })
        .collect();
    Ok(ScatterRecord {
        times,
        profiles,
        cauchy_increments,
        distances,
        r,
    })
}

/// Convergence verdict on a record: the final increment must not grow
/// past its predecessor, unless both already sit at working precision
/// relative to the candidate profile.
pub fn check_converged(record: &ScatterRecord) -> Result<(), ScatteringError> {
    let m = record.cauchy_increments.len();
    let candidate = &record.profiles[record.profiles.len() - 1];
    let scale = hs_norm(candidate, record.r).max(f64::MIN_POSITIVE);
    let last = record.cauchy_increments[m - 1];
    let previous = record.cauchy_increments[m - 2];
    if last <= previous || last <= CONVERGED_FLOOR * scale {
        Ok(())
    } else {
        Err(ScatteringError::NoScattering { previous, last })
    }
}

/// Extract the approximate scattering state of a decaying trajectory.
///
/// Returns the final pulled-back profile as `phi+` together with the
/// full profile record. Errors when the final two Cauchy increments
/// grow, which is the expected outcome for nonlinearities too weak to
/// scatter.
pub fn scattering_state(
    traj: &Trajectory,
    params: &EquationParams,
    r: f64,
) -> Result<(SpectralField, ScatterRecord), ScatteringError> {
    let record = scatter_record(traj, params, r)?;
    check_converged(&record)?;
    let phi_plus = record.profiles[record.profiles.len() - 1].clone();
    Ok((phi_plus, record))
}
