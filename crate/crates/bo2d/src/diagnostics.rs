//! Norms, scalar functionals, decay-exponent fitting, and the J(t)
//! dichotomy integral.
//!
//! `H^s` and `X^s` are evaluated through Parseval on the stored
//! coefficients. `L^2`, `L^p`, maxima, and weighted norms use the physical
//! samples with the grid quadrature weight `dx * dy`; in particular `L^2`
//! shares one accumulation path with the weighted norm, so the `theta = 0`
//! weight is the identity bitwise, while agreement with the spectral route
//! is a separate Parseval check. Maxima are grid maxima; no off-grid
//! interpolation.

use thiserror::Error;

use crate::evolution::{EquationParams, Trajectory};
use crate::field::SpectralField;
use crate::multiplier::{deriv_x, deriv_y, inv_dx, lambda_s};

/// Relative spectral mass on the `xi = 0` column above which `∂_x^{-1}` is
/// treated as undefined.
pub const MEAN_MASS_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("xi = 0 column carries relative mass {mass:.3e}; x-antiderivative is undefined")]
    MeanMass { mass: f64 },
    #[error("decay fit needs at least {need} samples in the window, found {have}")]
    InsufficientSamples { have: usize, need: usize },
    #[error("decay fit needs positive values, found {value} at t = {t}")]
    NonPositiveValue { t: f64, value: f64 },
}

/// `(integral |u|^2 dx dy)^(1/2)` on the physical samples: the `theta = 0`
/// case of the weighted norm, so the two coincide exactly.
pub fn l2_norm(u: &SpectralField) -> f64 {
    weighted_norm(u, 0.0)
}

/// Sobolev norm of order `s` through the inhomogeneous symbol
/// `(1 + |xi|^2 + |eta|^2)^(s/2)`, evaluated by Parseval.
pub fn hs_norm(u: &SpectralField, s: f64) -> f64 {
    u.grid().quad_weight().sqrt() * lambda_s(u, s).coeff_l2()
}

/// `X^s` norm `‖u‖_{H^s} + ‖∂_x^{-1} u‖_{H^s}`. Defined only when the
/// spectral mass on the `xi = 0` column is negligible.
pub fn xs_norm(u: &SpectralField, s: f64) -> Result<f64, DiagnosticsError> {
    let mass = u.x_mean_mass();
    if mass > MEAN_MASS_TOL {
        return Err(DiagnosticsError::MeanMass { mass });
    }
    Ok(hs_norm(u, s) + hs_norm(&inv_dx(u), s))
}

/// `L^p` norm on the physical grid, `1 <= p < inf`.
pub fn lp_norm(u: &SpectralField, p: f64) -> f64 {
    assert!(p >= 1.0 && p.is_finite(), "lp_norm needs 1 <= p < inf");
    let w = u.grid().quad_weight();
    let sum: f64 = u.to_physical().iter().map(|v| v.norm().powf(p)).sum();
    (w * sum).powf(1.0 / p)
}

/// Grid maximum of `|u|`.
pub fn linf_norm(u: &SpectralField) -> f64 {
    u.to_physical().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `|u|_inf + |u_x|_inf + |u_y|_inf` with spectral derivatives.
pub fn w1inf_norm(u: &SpectralField) -> f64 {
    linf_norm(u) + linf_norm(&deriv_x(u)) + linf_norm(&deriv_y(u))
}

/// `‖(1 + x^2 + y^2)^(theta/2) u‖_{L^2}` with the domain-truncated weight.
pub fn weighted_norm(u: &SpectralField, theta: f64) -> f64 {
    let grid = *u.grid();
    let phys = u.to_physical();
    let mut acc = 0.0;
    for ix in 0..grid.nx() {
        let x = grid.x(ix);
        for iy in 0..grid.ny() {
            let y = grid.y(iy);
            let w = (1.0 + x * x + y * y).powf(theta);
            acc += w * phys[grid.idx(ix, iy)].norm_sqr();
        }
    }
    (grid.quad_weight() * acc).sqrt()
}

/// Fraction of the `L^2` mass carried by the strip within
/// `strip_frac * L` of the domain boundary (either axis). Wrap-around
/// contamination of decay and scattering windows is detected by this
/// fraction crossing a threshold. Zero for the zero field.
pub fn boundary_strip_mass(u: &SpectralField, strip_frac: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&strip_frac),
        "strip fraction must lie in [0, 1]"
    );
    let grid = *u.grid();
    let phys = u.to_physical();
    let x_cut = grid.lx() * (1.0 - strip_frac);
    let y_cut = grid.ly() * (1.0 - strip_frac);
    let mut strip = 0.0;
    let mut total = 0.0;
    for ix in 0..grid.nx() {
        let x = grid.x(ix);
        for iy in 0..grid.ny() {
            let y = grid.y(iy);
            let m = phys[grid.idx(ix, iy)].norm_sqr();
            total += m;
            if x.abs() >= x_cut || y.abs() >= y_cut {
                strip += m;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        strip / total
    }
}

/// Smallness functional for initial data: `‖Λ^1 u‖_{L^1}`.
pub fn l11_norm(u: &SpectralField) -> f64 {
    lp_norm(&lambda_s(u, 1.0), 1.0)
}

/// Alternative reading of the same functional: `|u|_{L^1} + |∇u|_{L^1}`.
pub fn l11_grad_norm(u: &SpectralField) -> f64 {
    lp_norm(u, 1.0) + lp_norm(&deriv_x(u), 1.0) + lp_norm(&deriv_y(u), 1.0)
}

/// `|u_x|_inf |u|_inf^{p-1}`: the integrand of the growth-envelope bound.
pub fn gronwall_integrand(u: &SpectralField, p: u32) -> f64 {
    linf_norm(&deriv_x(u)) * linf_norm(u).powi(p as i32 - 1)
}

/// Extra norms to evaluate alongside the standard report columns.
#[derive(Debug, Clone)]
pub struct NormRequests {
    /// Additional finite `L^p` norms to report as `(p, value)` pairs.
    pub lp: Vec<f64>,
    /// Weight exponent for the weighted column.
    pub theta: f64,
}

impl Default for NormRequests {
    fn default() -> Self {
        Self { lp: Vec::new(), theta: 1.0 }
    }
}

/// One row of scalar diagnostics for a field.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub time: f64,
    pub l2: f64,
    pub hs: f64,
    /// Absent when the x-antiderivative is undefined (mass on `xi = 0`).
    pub xs: Option<f64>,
    pub lp: Vec<(f64, f64)>,
    pub linf: f64,
    pub w1inf: f64,
    pub weighted: f64,
    pub gronwall_integrand: f64,
}

pub fn norms(u: &SpectralField, params: &EquationParams, requests: &NormRequests) -> NormReport {
    NormReport {
        time: u.time(),
        l2: l2_norm(u),
        hs: hs_norm(u, params.s()),
        xs: xs_norm(u, params.s()).ok(),
        lp: requests.lp.iter().map(|&p| (p, lp_norm(u, p))).collect(),
        linf: linf_norm(u),
        w1inf: w1inf_norm(u),
        weighted: weighted_norm(u, requests.theta),
        gronwall_integrand: gronwall_integrand(u, params.p()),
    }
}

/// Least-squares power-law fit `value ~ amplitude * t^exponent` over a
/// time window.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
}

pub fn fit_decay(
    series: &[(f64, f64)],
    window: (f64, f64),
) -> Result<DecayFit, DiagnosticsError> {
    const NEED: usize = 8;
    let mut pts = Vec::new();
    for &(t, v) in series {
        if t <= 0.0 || t < window.0 || t > window.1 {
            continue;
        }
        if v <= 0.0 {
            return Err(DiagnosticsError::NonPositiveValue { t, value: v });
        }
        pts.push((t.ln(), v.ln()));
    }
    if pts.len() < NEED {
        return Err(DiagnosticsError::InsufficientSamples { have: pts.len(), need: NEED });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    // A flat series has nothing left to explain; report a perfect fit
    // rather than a ratio of roundoff residuals. Flat means the log-values
    // deviate from their mean at no more than roundoff scale.
    let flat = ss_tot <= n * (1.0 + my * my) * 1e-28;
    let r_squared = if flat { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(DecayFit {
        window,
        exponent: slope,
        amplitude: intercept.exp(),
        r_squared,
    })
}

fn simpson_adaptive(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let fmid = f(mid);
    let flm = f(0.5 * (lo + mid));
    let fmh = f(0.5 * (mid + hi));
    let left = (flo + 4.0 * flm + fmid) * (mid - lo) / 6.0;
    let right = (fmid + 4.0 * fmh + fhi) * (hi - mid) / 6.0;
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() < 15.0 * tol {
        refined + (refined - whole) / 15.0
    } else {
        simpson_adaptive(f, lo, mid, flo, fmid, left, 0.5 * tol, depth - 1)
            + simpson_adaptive(f, mid, hi, fmid, fhi, right, 0.5 * tol, depth - 1)
    }
}

/// `J(t) = (1 + t) * integral_0^t dtau / ((1 + t - tau)(1 + tau)^(p-1))`.
///
/// Bounded in `t` exactly when `p >= 3`; grows logarithmically for
/// `p in {1, 2}`. Evaluated by adaptive Simpson to absolute error well
/// below 1e-10.
pub fn j_integral(t: f64, p: u32) -> f64 {
    assert!(t >= 0.0, "j_integral needs t >= 0, got {t}");
    assert!(p >= 1, "j_integral needs p >= 1");
    if t == 0.0 {
        return 0.0;
    }
    let f = move |tau: f64| 1.0 / ((1.0 + t - tau) * (1.0 + tau).powi(p as i32 - 1));
    let flo = f(0.0);
    let fhi = f(t);
    let fmid = f(0.5 * t);
    let whole = (flo + 4.0 * fmid + fhi) * t / 6.0;
    let tol = 1e-13 / (1.0 + t);
    (1.0 + t) * simpson_adaptive(&f, 0.0, t, flo, fhi, whole, tol, 60)
}

/// Closed form of `j_integral` at `p = 2`, by partial fractions.
pub fn j_closed_p2(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        2.0 * (1.0 + t) * (1.0 + t).ln() / (2.0 + t)
    }
}

/// Growth envelope `‖φ‖_s exp(c * integral_0^t g)` with `g` the recorded
/// integrand samples, cumulated by trapezoid over the snapshot times.
/// Returned aligned with the trajectory's records.
pub fn gronwall_envelope(traj: &Trajectory, c: f64) -> Vec<f64> {
    let records = traj.records();
    if records.is_empty() {
        return Vec::new();
    }
    let base = records[0].hs;
    let mut out = Vec::with_capacity(records.len());
    let mut acc = 0.0;
    out.push(base);
    for k in 1..records.len() {
        let dt = records[k].t - records[k - 1].t;
        acc += 0.5 * dt * (records[k].gronwall_integrand + records[k - 1].gronwall_integrand);
        out.push(base * (c * acc).exp());
    }
    out
}
