//! Nonlinear time integration.
//!
//! The equation `u_t + A u + u^p u_x = 0` is integrated in the
//! integrating-factor variable `v^ = exp(+i omega t) u^`, which removes the
//! stiff linear phase analytically; classical RK4 acts on what remains. One
//! step therefore costs four dealiased nonlinearity evaluations and is exact
//! on the linear flow.
//!
//! The nonlinearity is kept in conservative form `-dx(u^{p+1})/(p+1)`:
//! spectral integration by parts is exact, so the discrete L2 norm is
//! conserved to rounding accumulation and the `xi = 0` column never moves.

use std::time::Instant;

use num_complex::Complex64;
use thiserror::Error;

use crate::dealias::dealias_product;
use crate::diagnostics::{self, NormRequests};
use crate::field::SpectralField;
use crate::grid::Grid2;
use crate::multiplier::deriv_x;
use crate::propagator::Propagator;

/// Grid-maximum amplitude past which the run is declared blown up.
pub const BLOWUP_LINF: f64 = 1e6;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("nonlinearity power p must be >= 1, got {0}")]
    InvalidPower(u32),
    #[error("regularity index s must exceed 2, got {0}")]
    InvalidRegularity(f64),
    #[error("equation coefficients must be finite")]
    NonFiniteCoefficient,
    #[error("dt must be positive and finite, got {0}")]
    InvalidDt(f64),
    #[error("t_end must be positive and finite, got {0}")]
    InvalidTEnd(f64),
    #[error("snapshot_stride must be >= 1")]
    ZeroStride,
    #[error("cfl_guard must lie in (0, 1], got {0}")]
    InvalidCflGuard(f64),
    #[error("initial data must be real")]
    ComplexData,
    #[error("initial data contains non-finite samples")]
    NonFiniteData,
    #[error("dt = {dt:.6e} exceeds the stability bound {bound:.6e} at t = {t:.6}")]
    ScheduleViolation { t: f64, dt: f64, bound: f64 },
    #[error("blow-up detected at t = {0}")]
    BlowUp(f64),
    #[error("Duhamel residual needs at least 5 snapshots, got {0}")]
    TooFewSnapshots(usize),
    #[error("Duhamel residual needs uniformly spaced snapshots")]
    NonUniformSnapshots,
}

/// Parameters of the equation `u_t + u^p u_x + H dx^2 u + alpha H dy^2 u
/// - gamma dx^{-1} dy^2 u = 0` together with the working regularity `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationParams {
    p: u32,
    alpha: f64,
    gamma: f64,
    s: f64,
}

impl EquationParams {
    pub fn new(p: u32, alpha: f64, gamma: f64, s: f64) -> Result<Self, EvolutionError> {
        if p < 1 {
            return Err(EvolutionError::InvalidPower(p));
        }
        if !(s > 2.0) {
            return Err(EvolutionError::InvalidRegularity(s));
        }
        if !alpha.is_finite() || !gamma.is_finite() {
            return Err(EvolutionError::NonFiniteCoefficient);
        }
        Ok(Self { p, alpha, gamma, s })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Requested step size, horizon, snapshot cadence, and stability margin.
#[derive(Debug, Clone, Copy)]
pub struct SolveSchedule {
    dt: f64,
    t_end: f64,
    snapshot_stride: usize,
    cfl_guard: f64,
}

impl SolveSchedule {
    pub fn new(
        dt: f64,
        t_end: f64,
        snapshot_stride: usize,
        cfl_guard: f64,
    ) -> Result<Self, EvolutionError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(EvolutionError::InvalidDt(dt));
        }
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(EvolutionError::InvalidTEnd(t_end));
        }
        if snapshot_stride == 0 {
            return Err(EvolutionError::ZeroStride);
        }
        if !(cfl_guard > 0.0 && cfl_guard <= 1.0) {
            return Err(EvolutionError::InvalidCflGuard(cfl_guard));
        }
        Ok(Self { dt, t_end, snapshot_stride, cfl_guard })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn snapshot_stride(&self) -> usize {
        self.snapshot_stride
    }

    pub fn cfl_guard(&self) -> f64 {
        self.cfl_guard
    }
}

/// Largest stable step for the transformed system: the linear phase is
/// absorbed exactly, so the Lipschitz scale left over is the advective
/// frequency `(p+1) |u|_inf^p xi_max` of the nonlinearity.
pub fn stability_bound(linf: f64, p: u32, xi_max: f64) -> f64 {
    let rate = (p as f64 + 1.0) * linf.powi(p as i32) * xi_max;
    if rate > 0.0 {
        1.0 / rate
    } else {
        f64::INFINITY
    }
}

/// Dealias-exact conservative nonlinearity `N(u) = -dx(u^{p+1})/(p+1)`.
/// The result has exactly zero mass on the `xi = 0` column.
pub fn nonlinear_rhs(u: &SpectralField, p: u32) -> SpectralField {
    assert!(p >= 1, "nonlinearity power must be >= 1");
    let factors: Vec<&SpectralField> = std::iter::repeat(u).take(p as usize + 1).collect();
    let power = dealias_product(&factors).expect("repeated factors share one grid");
    let mut out = deriv_x(&power).scale(-1.0 / (p as f64 + 1.0));
    out.set_time(u.time());
    out
}

/// Convective form `-u^p u_x` of the same nonlinearity; equal to the
/// conservative form up to rounding because both are band truncations of
/// one polynomial.
pub fn convective_rhs(u: &SpectralField, p: u32) -> SpectralField {
    assert!(p >= 1, "nonlinearity power must be >= 1");
    let ux = deriv_x(u);
    let mut factors: Vec<&SpectralField> = std::iter::repeat(u).take(p as usize).collect();
    factors.push(&ux);
    let mut out = dealias_product(&factors)
        .expect("repeated factors share one grid")
        .scale(-1.0);
    out.set_time(u.time());
    out
}

/// Reusable one-step integrator for a fixed `(grid, params, dt)`.
pub struct Stepper {
    params: EquationParams,
    grid: Grid2,
    h: f64,
    e_half: Vec<Complex64>,
    e_full: Vec<Complex64>,
    nonlinear: bool,
}

impl Stepper {
    pub fn new(grid: Grid2, params: &EquationParams, h: f64) -> Self {
        let prop = Propagator::new(grid, params);
        let (e_half, e_full) = prop.step_phases(h);
        Self { params: *params, grid, h, e_half, e_full, nonlinear: true }
    }

    /// Disable the nonlinearity: the step becomes the exact linear group.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    fn field(&self, coeffs: Vec<Complex64>, t: f64) -> SpectralField {
        SpectralField::from_coeffs_unchecked(self.grid, coeffs, t, true)
    }

    /// One integrating-factor RK4 step. Exact on the linear flow; errors
    /// with the offending time if the state leaves the finite range.
    pub fn step(&self, u: &SpectralField) -> Result<SpectralField, EvolutionError> {
        assert_eq!(*u.grid(), self.grid, "stepper grid does not match field grid");
        assert!(u.is_real(), "the integrator is defined for real states");
        let h = self.h;
        let t1 = u.time() + h;
        let u0 = u.coeffs();
        if !self.nonlinear {
            let coeffs = u0.iter().zip(&self.e_full).map(|(c, e)| c * e).collect();
            return Ok(self.field(coeffs, t1));
        }
        let p = self.params.p();
        let n = self.grid.len();
        let e1 = &self.e_half;
        let e2 = &self.e_full;

        let a = nonlinear_rhs(u, p).into_coeffs();
        let stage2: Vec<Complex64> =
            (0..n).map(|i| e1[i] * (u0[i] + 0.5 * h * a[i])).collect();
        let b = nonlinear_rhs(&self.field(stage2, u.time() + 0.5 * h), p).into_coeffs();
        let stage3: Vec<Complex64> =
            (0..n).map(|i| e1[i] * u0[i] + 0.5 * h * b[i]).collect();
        let c = nonlinear_rhs(&self.field(stage3, u.time() + 0.5 * h), p).into_coeffs();
        let stage4: Vec<Complex64> =
            (0..n).map(|i| e2[i] * u0[i] + h * (e1[i] * c[i])).collect();
        let d = nonlinear_rhs(&self.field(stage4, t1), p).into_coeffs();

        let sixth = h / 6.0;
        let coeffs: Vec<Complex64> = (0..n)
            .map(|i| {
                e2[i] * u0[i]
                    + sixth * (e2[i] * a[i] + 2.0 * (e1[i] * (b[i] + c[i])) + d[i])
            })
            .collect();
        let out = self.field(coeffs, t1);
        if !out.is_finite() {
            return Err(EvolutionError::BlowUp(t1));
        }
        Ok(out)
    }
}

/// One-shot step; build a [`Stepper`] for repeated stepping.
pub fn step(
    u: &SpectralField,
    dt: f64,
    params: &EquationParams,
) -> Result<SpectralField, EvolutionError> {
    Stepper::new(*u.grid(), params, dt).step(u)
}

/// Scalar diagnostics recorded at one snapshot time.
#[derive(Debug, Clone)]
pub struct SnapRecord {
    pub t: f64,
    pub l2: f64,
    pub hs: f64,
    /// Absent when the x-antiderivative is undefined for this state.
    pub xs: Option<f64>,
    pub linf: f64,
    pub w1inf: f64,
    pub weighted: f64,
    pub gronwall_integrand: f64,
    pub x_mean: f64,
    pub wall_time: f64,
}

/// Snapshots and per-snapshot diagnostics of one solve.
#[derive(Debug, Clone)]
pub struct Trajectory {
    params: EquationParams,
    schedule: SolveSchedule,
    snapshots: Vec<SpectralField>,
    records: Vec<SnapRecord>,
    blown_up: Option<f64>,
    warnings: Vec<String>,
    nonlinear: bool,
}

impl Trajectory {
    pub fn params(&self) -> &EquationParams {
        &self.params
    }

    pub fn schedule(&self) -> &SolveSchedule {
        &self.schedule
    }

    pub fn snapshots(&self) -> &[SpectralField] {
        &self.snapshots
    }

    pub fn records(&self) -> &[SnapRecord] {
        &self.records
    }

    /// Time of blow-up detection, if the run terminated early.
    pub fn blown_up(&self) -> Option<f64> {
        self.blown_up
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Whether the nonlinearity was active during the solve.
    pub fn is_nonlinear(&self) -> bool {
        self.nonlinear
    }

    pub fn last(&self) -> &SpectralField {
        self.snapshots.last().expect("a trajectory always holds its initial state")
    }
}

/// Fraction of spectral energy in the highest-third shell of either axis;
/// a resolution health indicator.
pub fn spectral_tail_fraction(u: &SpectralField) -> f64 {
    let grid = *u.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let cut_x = (nx / 2) as f64 * (2.0 / 3.0);
    let cut_y = (ny / 2) as f64 * (2.0 / 3.0);
    let mut tail = 0.0;
    let mut total = 0.0;
    for ix in 0..nx {
        let jx = Grid2::mode_number(ix, nx).unsigned_abs() as f64;
        for iy in 0..ny {
            let jy = Grid2::mode_number(iy, ny).unsigned_abs() as f64;
            let m = u.coeffs()[grid.idx(ix, iy)].norm_sqr();
            total += m;
            if jx >= cut_x || jy >= cut_y {
                tail += m;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

fn make_record(u: &SpectralField, params: &EquationParams, wall_time: f64) -> SnapRecord {
    let n = diagnostics::norms(u, params, &NormRequests::default());
    SnapRecord {
        t: u.time(),
        l2: n.l2,
        hs: n.hs,
        xs: n.xs,
        linf: n.linf,
        w1inf: n.w1inf,
        weighted: n.weighted,
        gronwall_integrand: n.gronwall_integrand,
        x_mean: u.mean(),
        wall_time,
    }
}

/// Integrate the full equation from `phi` over `[0, t_end]` with uniform
/// steps `t_end / ceil(t_end / dt)`. Records a snapshot at `t = 0`, every
/// `snapshot_stride` steps, and at the final time. Terminates early with a
/// partial trajectory and a flag when blow-up is detected.
pub fn evolve(
    phi: &SpectralField,
    params: &EquationParams,
    schedule: &SolveSchedule,
) -> Result<Trajectory, EvolutionError> {
    evolve_impl(phi, params, schedule, true)
}

/// Same driver with the nonlinearity disabled: the exact linear group,
/// stepped and recorded on the same cadence.
pub fn evolve_linearized(
    phi: &SpectralField,
    params: &EquationParams,
    schedule: &SolveSchedule,
) -> Result<Trajectory, EvolutionError> {
    evolve_impl(phi, params, schedule, false)
}

fn evolve_impl(
    phi: &SpectralField,
    params: &EquationParams,
    schedule: &SolveSchedule,
    nonlinear: bool,
) -> Result<Trajectory, EvolutionError> {
    if !phi.is_real() {
        return Err(EvolutionError::ComplexData);
    }
    if !phi.is_finite() {
        return Err(EvolutionError::NonFiniteData);
    }
    let start = Instant::now();
    let grid = *phi.grid();
    let mut warnings = Vec::new();

    let mut u = phi.clone();
    if params.gamma() != 0.0 && u.x_mean_mass() > 1e-14 {
        let mass = u.x_mean_mass();
        u.project_zero_x_mean();
        warnings.push(format!(
            "gamma != 0 requires zero x-mean; projected data carrying relative mass {mass:.3e} \
             on the xi = 0 column"
        ));
    }

    let n_steps = ((schedule.t_end() / schedule.dt()) - 1e-9).ceil().max(1.0) as usize;
    let dt_eff = schedule.t_end() / n_steps as f64;
    let mut stepper = Stepper::new(grid, params, dt_eff);
    if !nonlinear {
        stepper = stepper.linear_only();
    }
    let xi_max = grid.xi_max();

    let mut snapshots = vec![u.clone()];
    let mut records = vec![make_record(&u, params, start.elapsed().as_secs_f64())];
    let mut blown_up = None;
    let mut linf = diagnostics::linf_norm(&u);

    for k in 1..=n_steps {
        if !linf.is_finite() || linf > BLOWUP_LINF {
            blown_up = Some(u.time());
            warnings.push(format!("blow-up detected at t = {}", u.time()));
            break;
        }
        if nonlinear {
            let bound = stability_bound(linf, params.p(), xi_max);
            if dt_eff > schedule.cfl_guard() * bound {
                return Err(EvolutionError::ScheduleViolation {
                    t: u.time(),
                    dt: dt_eff,
                    bound: schedule.cfl_guard() * bound,
                });
            }
        }
        match stepper.step(&u) {
            Ok(next) => {
                u = next;
                linf = diagnostics::linf_norm(&u);
            }
            Err(EvolutionError::BlowUp(t)) => {
                blown_up = Some(t);
                warnings.push(format!("blow-up detected at t = {t}"));
                break;
            }
            Err(other) => return Err(other),
        }
        if blown_up.is_none() && (k % schedule.snapshot_stride() == 0 || k == n_steps) {
            if !linf.is_finite() || linf > BLOWUP_LINF {
                blown_up = Some(u.time());
                warnings.push(format!("blow-up detected at t = {}", u.time()));
                break;
            }
            snapshots.push(u.clone());
            records.push(make_record(&u, params, start.elapsed().as_secs_f64()));
        }
    }

    if blown_up.is_none() {
        let tail = spectral_tail_fraction(snapshots.last().expect("nonempty"));
        if tail > 1e-6 {
            warnings.push(format!(
                "spectral tail holds {tail:.3e} of the energy; the run is underresolved"
            ));
        }
    }

    Ok(Trajectory {
        params: *params,
        schedule: *schedule,
        snapshots,
        records,
        blown_up,
        warnings,
        nonlinear,
    })
}

/// Relative L2 residual of the integral identity
/// `u(T) = P(T) phi - dx integral_0^T P(T - tau) u(tau)^{p+1}/(p+1) dtau`,
/// with the integral evaluated by composite Simpson over the snapshots
/// (a 3/8 block absorbs an odd final interval). For a linearized
/// trajectory the integral term is absent.
pub fn duhamel_residual(
    traj: &Trajectory,
    params: &EquationParams,
) -> Result<f64, EvolutionError> {
    let snaps = traj.snapshots();
    if snaps.len() < 5 {
        return Err(EvolutionError::TooFewSnapshots(snaps.len()));
    }
    let n = snaps.len() - 1;
    let t0 = snaps[0].time();
    let t_end = snaps[n].time();
    let h = (t_end - t0) / n as f64;
    for w in snaps.windows(2) {
        let dt = w[1].time() - w[0].time();
        if (dt - h).abs() > 1e-9 * h.max(1.0) {
            return Err(EvolutionError::NonUniformSnapshots);
        }
    }

    let grid = *snaps[0].grid();
    let prop = Propagator::new(grid, params);
    let linear = prop.propagate(&snaps[0], t_end - t0);
    if !traj.is_nonlinear() {
        let diff = snaps[n].sub(&linear).expect("one grid per trajectory");
        return Ok(diagnostics::l2_norm(&diff) / diagnostics::l2_norm(&snaps[n]));
    }

    // Simpson weights over n intervals; odd n ends with a 3/8 block.
    let mut weights = vec![0.0f64; n + 1];
    let simpson_end = if n % 2 == 0 { n } else { n - 3 };
    if simpson_end > 0 {
        weights[0] += 1.0 / 3.0;
        weights[simpson_end] += 1.0 / 3.0;
        for (k, w) in weights.iter_mut().enumerate().take(simpson_end).skip(1) {
            *w += if k % 2 == 1 { 4.0 / 3.0 } else { 2.0 / 3.0 };
        }
    }
    if n % 2 == 1 {
        for (off, coeff) in [(0usize, 3.0 / 8.0), (1, 9.0 / 8.0), (2, 9.0 / 8.0), (3, 3.0 / 8.0)] {
            weights[simpson_end + off] += coeff;
        }
    }

    let p = params.p();
    let scale = 1.0 / (p as f64 + 1.0);
    let mut integral = vec![Complex64::ZERO; grid.len()];
    for (snap, &w) in snaps.iter().zip(&weights) {
        let factors: Vec<&SpectralField> = std::iter::repeat(snap).take(p as usize + 1).collect();
        let power = dealias_product(&factors).expect("one grid per trajectory");
        let pushed = prop.propagate(&power, t_end - snap.time());
        for (acc, c) in integral.iter_mut().zip(pushed.coeffs()) {
            *acc += w * h * scale * c;
        }
    }
    let integral = SpectralField::from_coeffs_unchecked(grid, integral, t_end, true);
    let rhs = linear.sub(&deriv_x(&integral)).expect("one grid per trajectory");
    let diff = snaps[n].sub(&rhs).expect("one grid per trajectory");
    Ok(diagnostics::l2_norm(&diff) / diagnostics::l2_norm(&snaps[n]))
}
