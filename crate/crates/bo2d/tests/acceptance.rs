//! Verification gate for the laboratory's advertised numerical guarantees.
//!
//! Each criterion prints exactly one `PASS`/`FAIL` line with the measured
//! quantities and its tolerance, and the test fails at the end if any
//! criterion failed. The suite runs real solves at the sizes the guarantees
//! are stated for, so a full pass takes a few minutes.

use std::f64::consts::PI;

use num_complex::Complex64;

use bo2d::config::{parse_config_str, Experiment, InitSpec, RunConfig};
use bo2d::diagnostics::{
    boundary_strip_mass, fit_decay, hs_norm, j_closed_p2, j_integral, l11_norm, l2_norm,
    linf_norm, lp_norm,
};
use bo2d::evolution::{
    duhamel_residual, evolve, evolve_linearized, EquationParams, SolveSchedule, Trajectory,
};
use bo2d::grid::Grid2;
use bo2d::harness::{
    calderon_ratio, kato_commutator_ratio, kato_ponce_ratio, leibniz_ratio, product_a_ratio,
    product_dx_ratio, random_smooth_field, ratio_report, HarnessTask, LambdaReading,
    ProductReading, RatioKind, RatioParams,
};
use bo2d::kernel::{kernel_i, propagate_via_kernel};
use bo2d::line::{Line, LineField};
use bo2d::propagator::propagate;
use bo2d::scattering::{scatter_record, scattering_state};
use bo2d::snapshot::{decode_snapshot, encode_snapshot};
use bo2d::SpectralField;

type Outcome = Result<(bool, String), String>;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn check(&mut self, number: u32, name: &str, outcome: Outcome) {
        let (pass, detail) = match outcome {
            Ok(pair) => pair,
            Err(e) => (false, format!("did not complete: {e}")),
        };
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {number:>2} {name}: {detail}");
        if !pass {
            self.failures.push(format!("criterion {number} ({name}): {detail}"));
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "{} of 11 criteria failed:\n  {}",
            self.failures.len(),
            self.failures.join("\n  ")
        );
    }
}

fn gaussian(grid: Grid2, amp: f64, w: f64) -> SpectralField {
    let w2 = w * w;
    SpectralField::from_fn(grid, move |x, y| amp * (-(x * x + y * y) / (2.0 * w2)).exp())
}

fn dx_gaussian(grid: Grid2, amp: f64, w: f64) -> SpectralField {
    let w2 = w * w;
    SpectralField::from_fn(grid, move |x, y| {
        -(x / w2) * amp * (-(x * x + y * y) / (2.0 * w2)).exp()
    })
}

/// 1. The multiplier propagator is an exact unitary group: the Sobolev
///    norm is invariant and composing flows matches the one-shot flow.
fn linear_group_exactness() -> Outcome {
    let grid = Grid2::new(128, 128, PI, PI).map_err(|e| e.to_string())?;
    let params = EquationParams::new(2, 1.0, 0.3, 3.0).map_err(|e| e.to_string())?;
    let phi = random_smooth_field(2025, grid, 2.5);
    let hs0 = hs_norm(&phi, 3.0);
    let times = [0.1, 1.0, 7.3];
    let mut isometry = 0.0f64;
    for t in times {
        let u = propagate(&phi, t, &params);
        isometry = isometry.max((hs_norm(&u, 3.0) - hs0).abs() / hs0);
    }
    let mut group = 0.0f64;
    for t1 in times {
        for t2 in times {
            let composed = propagate(&propagate(&phi, t1, &params), t2, &params);
            let direct = propagate(&phi, t1 + t2, &params);
            let diff = composed.sub(&direct).map_err(|e| e.to_string())?;
            group = group.max(l2_norm(&diff) / l2_norm(&direct));
        }
    }
    let pass = isometry <= 1e-12 && group <= 1e-12;
    Ok((pass, format!(
        "H^s isometry defect {isometry:.1e}, group-law defect {group:.1e} (tolerance 1e-12)"
    )))
}

/// Simpson quadrature of `exp(-i s^2)` over `[0, c]` plus a four-term
/// integration-by-parts tail; remainder is below `c^-7`.
fn quadratic_phase_half_line(c: f64, panels: usize) -> Complex64 {
    let f = |s: f64| Complex64::from_polar(1.0, -s * s);
    let h = c / panels as f64;
    let mut sum = f(0.0) + f(c);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(h * k as f64) * w;
    }
    let body = sum * (h / 3.0);
    let i2 = Complex64::new(0.0, 0.5);
    let tail = -f(c)
        * (i2 / c + i2 * i2 / c.powi(3) + 3.0 * i2 * i2 * i2 / c.powi(5)
            + 15.0 * i2 * i2 * i2 * i2 / c.powi(7));
    body + tail
}

/// 2. The closed-form oscillatory kernel reproduces the multiplier flow:
///    relative L^2 discrepancy at t = 1 on the stated box, improvement
///    under domain doubling, and the origin value against an independent
///    iterated-quadrature oracle.
fn kernel_cross_check() -> Outcome {
    let params = EquationParams::new(2, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;
    let discrepancy = |nx: usize, l: f64| -> Result<f64, String> {
        let grid = Grid2::new(nx, nx, l, l).map_err(|e| e.to_string())?;
        let phi = gaussian(grid, 1.0, 3.0);
        let via_kernel = propagate_via_kernel(&phi, 1.0, &params).map_err(|e| e.to_string())?;
        let direct = propagate(&phi, 1.0, &params);
        let diff = via_kernel.field.sub(&direct).map_err(|e| e.to_string())?;
        Ok(l2_norm(&diff) / l2_norm(&direct))
    };
    // Resolutions keep the sampled chirp below Nyquist out to the far
    // corner (radius 2 pi t / dx past the box plus margin), so what is
    // measured is the kernel's own periodization defect, which shrinks
    // like 1/L, not table aliasing.
    let base = discrepancy(2048, 20.0 * PI)?;
    let doubled = discrepancy(6144, 40.0 * PI)?;

    let q = quadratic_phase_half_line(20.0, 40_000);
    let known = Complex64::from_polar(PI.sqrt() / 2.0, -PI / 4.0);
    if (q - known).norm() > 1e-8 {
        return Err(format!("quadrature oracle self-check failed: {q} vs {known}"));
    }
    // Separable phase: the origin kernel value is Re of the product of the
    // half-line integral and the full-line integral, divided by pi.
    let origin_oracle = 2.0 * (q * q).re / PI;
    let origin_defect = (kernel_i(1.0, 0.0, 0.0) - origin_oracle).abs();

    let pass = base <= 1e-3 && doubled < base && origin_defect <= 1e-6;
    Ok((pass, format!(
        "rel L2 vs multiplier {base:.3e} (tolerance 1e-3), doubled domain {doubled:.3e} \
         (must decrease), origin vs quadrature {origin_defect:.1e} (tolerance 1e-6)"
    )))
}

/// 3. Conservation during nonlinear evolution: relative L^2 drift within
///    1e-8 and a bitwise-frozen x-mean spectral column.
fn conservation() -> Outcome {
    let grid = Grid2::new(64, 64, 4.0 * PI, 4.0 * PI).map_err(|e| e.to_string())?;
    let phi = dx_gaussian(grid, 0.1, 1.5);
    let schedule = SolveSchedule::new(0.005, 1.0, 50, 0.9).map_err(|e| e.to_string())?;
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [1u32, 3] {
        let params = EquationParams::new(p, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;
        let traj = evolve(&phi, &params, &schedule).map_err(|e| e.to_string())?;
        if let Some(t) = traj.blown_up() {
            return Ok((false, format!("p={p} run blew up at t = {t}")));
        }
        let drift = (l2_norm(traj.last()) - l2_norm(&phi)).abs() / l2_norm(&phi);
        let first = &traj.snapshots()[0];
        let last = traj.last();
        let g = *first.grid();
        let column_frozen =
            (0..g.ny()).all(|iy| first.coeffs()[g.idx(0, iy)] == last.coeffs()[g.idx(0, iy)]);
        pass &= drift <= 1e-8 && column_frozen;
        parts.push(format!(
            "p={p} L2 drift {drift:.1e}, x-mean column {}",
            if column_frozen { "bitwise frozen" } else { "DRIFTED" }
        ));
    }
    Ok((pass, format!("{} (tolerance 1e-8 / exact)", parts.join("; "))))
}

/// 4. Fourth-order self-convergence of the stepper and fourth-order decay
///    of the quadrature residual of the integral formulation under
///    snapshot-stride halving.
fn integrator_order() -> Outcome {
    let grid = Grid2::new(64, 64, 4.0 * PI, 4.0 * PI).map_err(|e| e.to_string())?;
    let params = EquationParams::new(2, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;

    let phi = dx_gaussian(grid, 0.5, 1.5);
    let solve = |dt: f64| -> Result<SpectralField, String> {
        let schedule = SolveSchedule::new(dt, 0.5, 1_000_000, 0.9).map_err(|e| e.to_string())?;
        Ok(evolve(&phi, &params, &schedule).map_err(|e| e.to_string())?.last().clone())
    };
    let h = 0.02;
    let (u1, u2, u4) = (solve(h)?, solve(h / 2.0)?, solve(h / 4.0)?);
    let e1 = l2_norm(&u1.sub(&u2).map_err(|e| e.to_string())?);
    let e2 = l2_norm(&u2.sub(&u4).map_err(|e| e.to_string())?);
    let slope = (e1 / e2).log2();

    let phi_r = dx_gaussian(grid, 0.3, 1.5);
    let residual = |stride: usize| -> Result<f64, String> {
        let schedule = SolveSchedule::new(0.0025, 0.4, stride, 0.9).map_err(|e| e.to_string())?;
        let traj = evolve(&phi_r, &params, &schedule).map_err(|e| e.to_string())?;
        duhamel_residual(&traj, &params).map_err(|e| e.to_string())
    };
    let ratio = residual(40)? / residual(20)?;

    let pass = (3.7..=4.3).contains(&slope) && (11.2..=20.8).contains(&ratio);
    Ok((pass, format!(
        "self-convergence slope {slope:.3} (want 4 +/- 0.3), residual stride ratio {ratio:.2} \
         (want 16 +/- 30%)"
    )))
}

/// 5. Dispersive decay of the free flow: sup norm like 1/t and L^4 norm
///    like 1/sqrt(t) over a window free of wrap-around contamination.
fn free_flow_decay() -> Outcome {
    let grid = Grid2::new(512, 512, 48.0 * PI, 48.0 * PI).map_err(|e| e.to_string())?;
    let params = EquationParams::new(1, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;
    let f = dx_gaussian(grid, 1.0, 2.0);
    let samples = 16;
    let mut inf_series = Vec::new();
    let mut l4_series = Vec::new();
    let mut worst_strip = 0.0f64;
    for k in 0..samples {
        let t = 5.0 * 8.0f64.powf(k as f64 / (samples - 1) as f64);
        let u = propagate(&f, t, &params);
        worst_strip = worst_strip.max(boundary_strip_mass(&u, 0.1));
        inf_series.push((t, linf_norm(&u)));
        l4_series.push((t, lp_norm(&u, 4.0)));
    }
    let fit_inf = fit_decay(&inf_series, (5.0, 40.0)).map_err(|e| e.to_string())?;
    let fit_l4 = fit_decay(&l4_series, (5.0, 40.0)).map_err(|e| e.to_string())?;
    let pass = (-1.2..=-0.8).contains(&fit_inf.exponent)
        && (-0.65..=-0.35).contains(&fit_l4.exponent)
        && worst_strip < 1e-4;
    Ok((pass, format!(
        "sup-norm exponent {:.3} (want -1 +/- 0.2), L4 exponent {:.3} (want -0.5 +/- 0.15), \
         worst boundary strip {worst_strip:.1e} (< 1e-4)",
        fit_inf.exponent, fit_l4.exponent
    )))
}

struct SmallDataRun {
    traj: Trajectory,
    params: EquationParams,
}

/// Shared long cubic-nonlinearity solve used by the decay-bound and
/// scattering criteria.
fn small_data_solve() -> Result<SmallDataRun, String> {
    let grid = Grid2::new(256, 256, 28.0 * PI, 28.0 * PI).map_err(|e| e.to_string())?;
    let phi = dx_gaussian(grid, 0.1, 1.5);
    let params = EquationParams::new(3, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;
    let schedule = SolveSchedule::new(0.05, 24.0, 10, 0.9).map_err(|e| e.to_string())?;
    let traj = evolve(&phi, &params, &schedule).map_err(|e| e.to_string())?;
    if let Some(t) = traj.blown_up() {
        return Err(format!("small-data solve blew up at t = {t}"));
    }
    Ok(SmallDataRun { traj, params })
}

/// 6. Small-data decay bound: data at a tenth of a blow-up-free reference
///    decays like 1/t in W^(1,inf) over the uncontaminated window, with
///    (1+t)|u|_(1,inf) staying under three times its initial value.
fn small_data_decay(run: &SmallDataRun) -> Outcome {
    let ref_grid = Grid2::new(128, 128, 14.0 * PI, 14.0 * PI).map_err(|e| e.to_string())?;
    let reference = dx_gaussian(ref_grid, 1.0, 1.5);
    let ref_schedule = SolveSchedule::new(0.025, 2.0, 40, 0.9).map_err(|e| e.to_string())?;
    let ref_traj = evolve(&reference, &run.params, &ref_schedule).map_err(|e| e.to_string())?;
    if let Some(t) = ref_traj.blown_up() {
        return Ok((false, format!("unit-amplitude reference blew up at t = {t}")));
    }

    let phi = &run.traj.snapshots()[0];
    let grid = *phi.grid();
    let phi_ref = dx_gaussian(grid, 1.0, 1.5);
    let measure = |u: &SpectralField| l11_norm(u) + hs_norm(u, run.params.s());
    let fraction = measure(phi) / measure(&phi_ref);

    // The valid window ends when boundary-strip mass first crosses 1e-4.
    let mut t_cut = 0.0f64;
    for snap in run.traj.snapshots() {
        if boundary_strip_mass(snap, 0.1) >= 1e-4 {
            break;
        }
        t_cut = snap.time();
    }
    let series: Vec<(f64, f64)> = run
        .traj
        .records()
        .iter()
        .filter(|r| r.t <= t_cut + 1e-9)
        .map(|r| (r.t, r.w1inf))
        .collect();
    let fit = fit_decay(&series, (4.0, t_cut)).map_err(|e| e.to_string())?;
    let w0 = run.traj.records()[0].w1inf;
    let peak = run
        .traj
        .records()
        .iter()
        .filter(|r| r.t <= t_cut + 1e-9)
        .map(|r| (1.0 + r.t) * r.w1inf)
        .fold(0.0f64, f64::max)
        / w0;

    let pass = fraction <= 0.1 + 1e-12
        && (-1.25..=-0.75).contains(&fit.exponent)
        && peak < 3.0;
    Ok((pass, format!(
        "data at {fraction:.4} of the reference (reference clean to t=2), W^(1,inf) exponent \
         {:.3} on [4, {t_cut}] r^2 {:.4} (want -1 +/- 0.25), peak (1+t)|u|_(1,inf) {peak:.2}x \
         initial (< 3x)",
        fit.exponent, fit.r_squared
    )))
}

/// 7. Decade growth of the nonlinearity's time-decay integral: exact match
///    of the p = 2 closed form, saturation for p = 3, logarithmic growth
///    for p = 2.
fn dichotomy_integral() -> Outcome {
    let mut closed_defect = 0.0f64;
    for t in [1.0, 10.0, 100.0] {
        let rel = (j_integral(t, 2) - j_closed_p2(t)).abs() / j_closed_p2(t);
        closed_defect = closed_defect.max(rel);
    }
    let growth_p3 = j_integral(1e4, 3) / j_integral(1e3, 3);
    let growth_p2 = j_integral(1e4, 2) / j_integral(1e3, 2);
    let pass = closed_defect <= 1e-9 && growth_p3 <= 1.05 && growth_p2 >= 1.2;
    Ok((pass, format!(
        "closed-form defect {closed_defect:.1e} (tolerance 1e-9), decade ratio p=3 \
         {growth_p3:.4} (<= 1.05), p=2 {growth_p2:.4} (>= 1.2)"
    )))
}

/// 8. Scattering: a linear run's pulled-back profile is the data itself,
///    and the small-data nonlinear run has shrinking Cauchy increments
///    over the last five profiles and a shrinking distance to the free
///    evolution of the candidate profile.
fn scattering_states(run: &SmallDataRun) -> Outcome {
    let grid = Grid2::new(64, 64, 4.0 * PI, 4.0 * PI).map_err(|e| e.to_string())?;
    let phi = dx_gaussian(grid, 0.5, 1.5);
    let params = EquationParams::new(3, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;
    let schedule = SolveSchedule::new(0.01, 1.0, 20, 0.9).map_err(|e| e.to_string())?;
    let traj = evolve_linearized(&phi, &params, &schedule).map_err(|e| e.to_string())?;
    let (phi_plus, _) = scattering_state(&traj, &params, 2.0).map_err(|e| e.to_string())?;
    let lin_defect =
        hs_norm(&phi_plus.sub(&phi).map_err(|e| e.to_string())?, 2.0) / hs_norm(&phi, 2.0);

    let r = run.params.s() - 1.0;
    let record = scatter_record(&run.traj, &run.params, r).map_err(|e| e.to_string())?;
    let inc = &record.cauchy_increments;
    if inc.len() < 4 || record.distances.len() < 5 {
        return Err("too few recorded profiles for a tail verdict".into());
    }
    let tail_inc = &inc[inc.len() - 4..];
    let inc_shrinking = tail_inc.windows(2).all(|w| w[1] < w[0]);
    let tail_d = &record.distances[record.distances.len() - 5..];
    let d_shrinking = tail_d.windows(2).all(|w| w[1] < w[0]);

    let pass = lin_defect <= 1e-12 && inc_shrinking && d_shrinking;
    Ok((pass, format!(
        "linear profile defect {lin_defect:.1e} (tolerance 1e-12), tail increments \
         {}creasing ({:.2e} -> {:.2e}), tail distances {}creasing ({:.2e} -> {:.2e})",
        if inc_shrinking { "de" } else { "NOT de" },
        tail_inc[0],
        tail_inc[tail_inc.len() - 1],
        if d_shrinking { "de" } else { "NOT de" },
        tail_d[0],
        tail_d[tail_d.len() - 1]
    )))
}

/// 9. Inequality ratio harness: fifty seeded samples per estimator stay
///    finite, at most double under grid refinement, and zero inputs give
///    exact zero ratios.
fn inequality_harness() -> Outcome {
    let grid = Grid2::new(128, 128, 2.0 * PI, 2.0 * PI).map_err(|e| e.to_string())?;
    let line = Line::new(4096, 2.0 * PI).map_err(|e| e.to_string())?;
    let seeds: Vec<u64> = (0..50).collect();
    let base = RatioParams::default();
    let cases: Vec<(RatioKind, RatioParams)> = vec![
        (RatioKind::Kato, RatioParams { lambda: LambdaReading::Inhomogeneous, ..base }),
        (RatioKind::Kato, RatioParams { lambda: LambdaReading::Homogeneous, ..base }),
        (RatioKind::KatoPonce, base),
        (RatioKind::Leibniz, base),
        (RatioKind::Calderon, base),
        (RatioKind::ProductA, RatioParams { reading: ProductReading::LiteralGg, ..base }),
        (RatioKind::ProductA, RatioParams { reading: ProductReading::SymmetricGh, ..base }),
        (RatioKind::ProductDx, base),
    ];
    let total = cases.len();
    let mut largest_ratio = 0.0f64;
    let mut largest_refine = 0.0f64;
    let mut violations = Vec::new();
    for (kind, params) in cases {
        let task = HarnessTask { kind, params, grid, line, seeds: seeds.clone() };
        let report = ratio_report(&task).map_err(|e| format!("{kind}: {e}"))?;
        largest_ratio = largest_ratio.max(report.max_ratio);
        largest_refine = largest_refine.max(report.refinement_ratio);
        if !(report.max_ratio.is_finite() && report.refinement_ratio <= 2.0) {
            violations.push(format!(
                "{kind}({}): max {:.3e}, refinement {:.3}",
                params.label(kind),
                report.max_ratio,
                report.refinement_ratio
            ));
        }
    }

    let zg = Grid2::new(32, 32, PI, PI).map_err(|e| e.to_string())?;
    let z = SpectralField::zeros(zg);
    let zline = LineField::from_physical(Line::new(256, PI).map_err(|e| e.to_string())?, &[0.0; 256]);
    let zero_ratios = [
        kato_commutator_ratio(&z, &z, 0.0, 0.0, 2.0, LambdaReading::Inhomogeneous)
            .map_err(|e| e.to_string())?
            .ratio,
        kato_ponce_ratio(&z, &z, 2.0, 2.0).map_err(|e| e.to_string())?.ratio,
        leibniz_ratio(&z, &z, 2.0, 2.0).map_err(|e| e.to_string())?.ratio,
        calderon_ratio(&zline, &zline).ratio,
        product_a_ratio(&z, &z, 2.0, LambdaReading::Homogeneous, ProductReading::LiteralGg)
            .map_err(|e| e.to_string())?
            .ratio,
        product_dx_ratio(&z, &z, 2.0, 1.5).map_err(|e| e.to_string())?.ratio,
    ];
    let zeros_exact = zero_ratios.iter().all(|&v| v == 0.0);

    let pass = violations.is_empty() && zeros_exact;
    let detail = if violations.is_empty() {
        format!(
            "{total} reports x 50 seeds: ratios finite (largest {largest_ratio:.3}), refinement \
             growth <= 2x (largest {largest_refine:.3}); zero-input ratios {}",
            if zeros_exact { "all exactly 0" } else { "NONZERO" }
        )
    } else {
        format!("violations: {}", violations.join("; "))
    };
    Ok((pass, detail))
}

/// 10. Weighted-norm envelope: the weighted L^2 norm of a small-data cubic
///     solve stays under `exp(B t) (W(0)^2 + t A X^2)^(1/2)` with the
///     smallest constants reproducing the envelope's value and slope at
///     t = 0.25, checked through t = 1.
fn weighted_norm_envelope() -> Outcome {
    let grid = Grid2::new(128, 128, 16.0 * PI, 16.0 * PI).map_err(|e| e.to_string())?;
    let phi = dx_gaussian(grid, 0.05, 4.0);
    let params = EquationParams::new(3, 1.0, 0.0, 3.0).map_err(|e| e.to_string())?;
    let schedule = SolveSchedule::new(0.0125, 1.0, 5, 0.9).map_err(|e| e.to_string())?;
    let traj = evolve(&phi, &params, &schedule).map_err(|e| e.to_string())?;
    let recs = traj.records();

    let w0_sq = recs[0].weighted.powi(2);
    let t_cal = 0.25;
    let cal = recs
        .iter()
        .position(|r| (r.t - t_cal).abs() < 1e-9)
        .ok_or("no record at the calibration time")?;
    let wcal_sq = recs[cal].weighted.powi(2);
    let x_cal = recs[..=cal].iter().filter_map(|r| r.xs).fold(0.0f64, f64::max);
    if x_cal == 0.0 {
        return Err("flow carries no x-antiderivative norm".into());
    }
    // Value condition fixes A; the one-sided slope at the calibration time
    // fixes B. No data past t = 0.25 enters the constants.
    let a = ((wcal_sq - w0_sq) / (t_cal * x_cal * x_cal)).max(0.0);
    let prev = &recs[cal - 1];
    let slope = (wcal_sq - prev.weighted.powi(2)) / (recs[cal].t - prev.t);
    let b = ((slope - a * x_cal * x_cal) / (2.0 * wcal_sq)).max(0.0);

    let mut x_run = 0.0f64;
    let mut worst = 0.0f64;
    let mut worst_t = 0.0f64;
    for r in recs {
        x_run = x_run.max(r.xs.unwrap_or(0.0));
        if r.t <= t_cal {
            continue;
        }
        let envelope_sq = (2.0 * b * r.t).exp() * (w0_sq + r.t * a * x_run * x_run);
        let ratio = r.weighted.powi(2) / envelope_sq;
        if ratio > worst {
            worst = ratio;
            worst_t = r.t;
        }
    }
    let pass = worst <= 1.0;
    Ok((pass, format!(
        "A {a:.3e}, B {b:.3e} from t <= 0.25; worst squared-norm over envelope {worst:.4} at \
         t = {worst_t} (must stay <= 1)"
    )))
}

/// 11. Serialization: snapshot encode/decode byte identity, canonical
///     config round trip, and bitwise-identical rerun artifacts.
fn serialization_determinism() -> Outcome {
    let grid = Grid2::new(32, 32, PI, PI).map_err(|e| e.to_string())?;
    let f = random_smooth_field(5, grid, 3.0);
    let bytes = encode_snapshot(&f, 3.0);
    let (decoded, s) = decode_snapshot(&bytes).map_err(|e| e.to_string())?;
    let snapshot_stable = encode_snapshot(&decoded, s) == bytes;

    let cfg = RunConfig {
        nx: 32,
        ny: 32,
        lx: PI,
        ly: PI,
        dt: Some(0.01),
        t_end: 0.1,
        snapshot_stride: 5,
        init: InitSpec::DxGaussian { amplitude: 0.5, width: 1.0 },
        experiment: Experiment::Decay { theta: 0.5 },
        ..RunConfig::default()
    };
    let text = cfg.serialize();
    let parsed = parse_config_str(&text).map_err(|e| e.to_string())?;
    let config_stable = parsed.serialize() == text && parsed.hash() == cfg.hash();

    let rerun_cfg = RunConfig { experiment: Experiment::Evolve, ..cfg };
    let root = std::env::temp_dir().join(format!("bo2d-acceptance-{}", std::process::id()));
    let dirs = (root.join("a"), root.join("b"));
    bo2d::run::run(&rerun_cfg, &dirs.0).map_err(|e| e.to_string())?;
    bo2d::run::run(&rerun_cfg, &dirs.1).map_err(|e| e.to_string())?;
    let matches = |name: &str| -> Result<bool, String> {
        let a = std::fs::read(dirs.0.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let b = std::fs::read(dirs.1.join(name)).map_err(|e| format!("{name}: {e}"))?;
        Ok(a == b)
    };
    let rerun_stable =
        matches("final.bo2d")? && matches("diagnostics.csv")? && matches("run-manifest.txt")?;
    let _ = std::fs::remove_dir_all(&root);

    let word = |ok: bool| if ok { "identical" } else { "MISMATCH" };
    let pass = snapshot_stable && config_stable && rerun_stable;
    Ok((pass, format!(
        "snapshot bytes {}, config round trip {}, rerun artifacts {}",
        word(snapshot_stable),
        word(config_stable),
        word(rerun_stable)
    )))
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();
    gate.check(1, "linear group exactness", linear_group_exactness());
    gate.check(2, "kernel propagator cross-check", kernel_cross_check());
    gate.check(3, "conservation", conservation());
    gate.check(4, "integrator order", integrator_order());
    gate.check(5, "free-flow decay rates", free_flow_decay());
    let shared = small_data_solve();
    match &shared {
        Ok(run) => gate.check(6, "small-data decay bound", small_data_decay(run)),
        Err(e) => gate.check(6, "small-data decay bound", Err(e.clone())),
    }
    gate.check(7, "dichotomy integral", dichotomy_integral());
    match &shared {
        Ok(run) => gate.check(8, "scattering states", scattering_states(run)),
        Err(e) => gate.check(8, "scattering states", Err(e.clone())),
    }
    gate.check(9, "inequality ratio harness", inequality_harness());
    gate.check(10, "weighted-norm envelope", weighted_norm_envelope());
    gate.check(11, "serialization determinism", serialization_determinism());
    gate.finish();
}
