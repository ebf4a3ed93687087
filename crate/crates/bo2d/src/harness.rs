//! Empirical commutator and product inequality harness.
//!
//! Each estimator computes the two sides of one inequality on seeded
//! random smooth fields and reports their ratio. A harness cannot prove an
//! inequality; the operational meaning of "the constant is finite" is that
//! the maximal ratio over many seeds stays stable (within 2x) when the
//! grid resolution doubles.
//!
//! Conventions shared by the estimators:
//!
//! - `lambda^s` appears in two readings. The inhomogeneous one is the
//!   standard `(1 + |xi|^2)^(s/2)`. The homogeneous one is `|xi|^s` with
//!   the zero mode annihilated (for the exponent 0 it is the identity);
//!   the bracket norm built from it drops the mean. Estimators whose
//!   source statements are ambiguous take the reading as a parameter.
//! - The Wiener-algebra norm is the l1 norm of the Fourier series
//!   coefficients; the stored coefficients carry the unitary `1/sqrt(N)`
//!   factor, which is divided out so the norm is resolution-independent.
//! - A commutator is the difference of two operator orderings. When the
//!   difference lands at or below `1e-12` of the orderings' own size it is
//!   rounding residue of exact cancellation and is reported as zero, so
//!   trivial inputs (constant `f`, zero `g`) yield ratio 0 rather than
//!   noise divided by zero.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dealias::dealias_product;
use crate::diagnostics::{hs_norm, l2_norm, linf_norm, lp_norm};
use crate::field::SpectralField;
use crate::grid::{Grid2, GridError};
use crate::line::{
    deriv_line, hilbert_line, product_line, random_smooth_line, Line, LineField,
};
use crate::multiplier::{deriv_x, deriv_y, lambda_s};
use num_complex::Complex64;

/// Relative size below which a commutator difference counts as exact
/// cancellation.
pub const CANCELLATION_FLOOR: f64 = 1e-12;

/// Seed offset separating the two fields of one sample pair.
const PAIR_SPLIT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("|s~| and |t~| must not exceed s - 1: s~ = {s_tilde}, t~ = {t_tilde}, s = {s}")]
    ParameterRange { s_tilde: f64, t_tilde: f64, s: f64 },
    #[error("Sobolev index s must be positive, got {0}")]
    NonPositiveSobolev(f64),
    #[error("Sobolev index s must be >= 0, got {0}")]
    NegativeSobolev(f64),
    #[error("Lebesgue exponent must satisfy 1 <= p < inf, got {0}")]
    BadLebesgue(f64),
    #[error("auxiliary index s0 must exceed 1, got {0}")]
    BadAuxiliaryIndex(f64),
    #[error("refined grid is invalid: {0}")]
    Grid(#[from] GridError),
}

/// The estimated inequality family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// Smoothed commutator bound for the first-order multiplier sandwich.
    Kato,
    /// Classical commutator estimate for `[lambda^s, f]g` in `L^p`.
    KatoPonce,
    /// Fractional Leibniz bound for `|fg|_{s,p}`.
    Leibniz,
    /// 1D commutator of the Hilbert transform with a Lipschitz multiplier.
    Calderon,
    /// Algebra-weighted product bound for the homogeneous bracket norm.
    ProductA,
    /// Product-with-derivative bound in inhomogeneous Sobolev norms.
    ProductDx,
}

impl RatioKind {
    pub const ALL: [RatioKind; 6] = [
        RatioKind::Kato,
        RatioKind::KatoPonce,
        RatioKind::Leibniz,
        RatioKind::Calderon,
        RatioKind::ProductA,
        RatioKind::ProductDx,
    ];

    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_lowercase().replace('-', "_").as_str() {
            "kato" => Some(Self::Kato),
            "kato_ponce" => Some(Self::KatoPonce),
            "leibniz" => Some(Self::Leibniz),
            "calderon" => Some(Self::Calderon),
            "product_a" => Some(Self::ProductA),
            "product_dx" => Some(Self::ProductDx),
            _ => None,
        }
    }
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Self::Kato => "kato",
            Self::KatoPonce => "kato_ponce",
            Self::Leibniz => "leibniz",
            Self::Calderon => "calderon",
            Self::ProductA => "product_a",
            Self::ProductDx => "product_dx",
        };
        f.write_str(label)
    }
}

/// Reading of the `lambda^s` power where the source statement is
/// ambiguous between the homogeneous and inhomogeneous operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaReading {
    Homogeneous,
    Inhomogeneous,
}

/// Reading of the algebra-weighted product bound's second right-hand
/// term: literally `|g|_[s] |g|_A`, or the symmetric `|g|_[s] |h|_A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductReading {
    LiteralGg,
    SymmetricGh,
}

/// Parameters of one estimator run; fields are read per kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioParams {
    pub s: f64,
    pub s_tilde: f64,
    pub t_tilde: f64,
    pub p: f64,
    pub s0: f64,
    pub lambda: LambdaReading,
    pub reading: ProductReading,
    pub decay_rate: f64,
}

impl Default for RatioParams {
    fn default() -> Self {
        Self {
            s: 2.0,
            s_tilde: 0.0,
            t_tilde: 0.0,
            p: 2.0,
            s0: 1.5,
            lambda: LambdaReading::Homogeneous,
            reading: ProductReading::LiteralGg,
            decay_rate: 6.0,
        }
    }
}

impl RatioParams {
    /// Human-readable rendering of the fields the kind actually uses.
    pub fn label(&self, kind: RatioKind) -> String {
        let lambda = match self.lambda {
            LambdaReading::Homogeneous => "hom",
            LambdaReading::Inhomogeneous => "inhom",
        };
        match kind {
            RatioKind::Kato => format!(
                "s={} s~={} t~={} lambda={}",
                self.s, self.s_tilde, self.t_tilde, lambda
            ),
            RatioKind::KatoPonce | RatioKind::Leibniz => {
                format!("s={} p={}", self.s, self.p)
            }
            RatioKind::Calderon => "".to_string(),
            RatioKind::ProductA => {
                let reading = match self.reading {
                    ProductReading::LiteralGg => "gg",
                    ProductReading::SymmetricGh => "gh",
                };
                format!("s={} lambda={} reading={}", self.s, lambda, reading)
            }
            RatioKind::ProductDx => format!("s={} s0={}", self.s, self.s0),
        }
    }
}

/// One seeded evaluation of an inequality's two sides.
#[derive(Debug, Clone, Copy)]
pub struct RatioSample {
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioSample {
    fn new(seed: u64, lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs == 0.0 {
            if lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            lhs / rhs
        };
        Self {
            seed,
            lhs,
            rhs,
            ratio,
        }
    }
}

/// Samples of one kind at one resolution plus the refinement comparison.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub kind: RatioKind,
    pub params: RatioParams,
    pub samples: Vec<RatioSample>,
    pub max_ratio: f64,
    /// Max ratio at doubled resolution divided by `max_ratio`, same seeds.
    pub refinement_ratio: f64,
}

/// Random real field with coefficient magnitudes
/// `(1 + |xi|^2 + |eta|^2)^(-decay_rate/2)` and seeded uniform phases.
/// The phase of a mode depends only on `(seed, mode pair)`, so the same
/// seed on a refined grid extends the same function with new small-tail
/// modes. The zero mode and the Nyquist lines are left empty.
pub fn random_smooth_field(seed: u64, grid: Grid2, decay_rate: f64) -> SpectralField {
    assert!(decay_rate > 1.0, "decay rate must exceed 1");
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut coeffs = vec![Complex64::ZERO; grid.len()];
    for ix in 0..nx {
        if grid.is_nyquist_x(ix) {
            continue;
        }
        let jx = Grid2::mode_number(ix, nx);
        for iy in 0..ny {
            if grid.is_nyquist_y(iy) {
                continue;
            }
            let jy = Grid2::mode_number(iy, ny);
            let canonical = jx > 0 || (jx == 0 && jy > 0);
            if !canonical {
                continue;
            }
            let xi = grid.xi(ix);
            let eta = grid.eta(iy);
            let mag = (1.0 + xi * xi + eta * eta).powf(-decay_rate / 2.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(mode_stream(jx, jy));
            let phase = rng.gen::<f64>() * std::f64::consts::TAU;
            let c = Complex64::from_polar(mag, phase);
            coeffs[grid.idx(ix, iy)] = c;
            let (mx, my) = grid.mirror(ix, iy);
            coeffs[grid.idx(mx, my)] = c.conj();
        }
    }
    SpectralField::from_coeffs(grid, coeffs, 0.0, true)
        .expect("mirrored coefficients are conjugate-symmetric")
}

fn mode_stream(jx: i64, jy: i64) -> u64 {
    const OFF: i64 = 1 << 31;
    (((jx + OFF) as u64) << 32) | ((jy + OFF) as u64)
}

/// Apply the requested reading of `lambda^pow`.
fn apply_lambda(u: &SpectralField, pow: f64, reading: LambdaReading) -> SpectralField {
    match reading {
        LambdaReading::Inhomogeneous => lambda_s(u, pow),
        LambdaReading::Homogeneous => {
            if pow == 0.0 {
                return u.clone();
            }
            let grid = *u.grid();
            let mut coeffs = u.coeffs().to_vec();
            for ix in 0..grid.nx() {
                let xi = grid.xi(ix);
                for iy in 0..grid.ny() {
                    let eta = grid.eta(iy);
                    let idx = grid.idx(ix, iy);
                    if ix == 0 && iy == 0 {
                        coeffs[idx] = Complex64::ZERO;
                    } else {
                        coeffs[idx] *= (xi * xi + eta * eta).powf(pow / 2.0);
                    }
                }
            }
            SpectralField::from_coeffs_unchecked(grid, coeffs, u.time(), u.is_real())
        }
    }
}

/// `L^2` norm of `lambda^s u` in the requested reading.
fn bracket_norm(u: &SpectralField, s: f64, reading: LambdaReading) -> f64 {
    match reading {
        LambdaReading::Inhomogeneous => hs_norm(u, s),
        LambdaReading::Homogeneous => {
            let grid = u.grid();
            let mut sum = 0.0;
            for ix in 0..grid.nx() {
                let xi = grid.xi(ix);
                for iy in 0..grid.ny() {
                    if ix == 0 && iy == 0 {
                        continue;
                    }
                    let eta = grid.eta(iy);
                    let w = (xi * xi + eta * eta).powf(s);
                    sum += w * u.coeffs()[grid.idx(ix, iy)].norm_sqr();
                }
            }
            (grid.quad_weight() * sum).sqrt()
        }
    }
}

/// Wiener-algebra norm: l1 of the Fourier series coefficients.
fn a_norm(u: &SpectralField) -> f64 {
    u.coeffs().iter().map(|z| z.norm()).sum::<f64>() / (u.grid().len() as f64).sqrt()
}

/// Pointwise sup of `|grad f|` (Euclidean magnitude of the gradient).
fn grad_linf(f: &SpectralField) -> f64 {
    let fx = deriv_x(f).to_physical_real();
    let fy = deriv_y(f).to_physical_real();
    fx.iter()
        .zip(&fy)
        .map(|(&a, &b)| a.hypot(b))
        .fold(0.0, f64::max)
}

/// Sobolev norm of the gradient, `(|f_x|_{H^m}^2 + |f_y|_{H^m}^2)^(1/2)`.
fn grad_hs(f: &SpectralField, m: f64) -> f64 {
    let nx = hs_norm(&deriv_x(f), m);
    let ny = hs_norm(&deriv_y(f), m);
    nx.hypot(ny)
}

fn cancelled(lhs: f64, scale: f64) -> f64 {
    if lhs <= CANCELLATION_FLOOR * scale {
        0.0
    } else {
        lhs
    }
}

/// Smoothed first-order commutator bound: compares
/// `|lambda^{-s~} [lambda^{s~+t~+1}, f] lambda^{-t~} g|_{L^2}` against
/// `|grad f|_{H^{s-1}} |g|_{L^2}`.
pub fn kato_commutator_ratio(
    f: &SpectralField,
    g: &SpectralField,
    s_tilde: f64,
    t_tilde: f64,
    s: f64,
    lambda: LambdaReading,
) -> Result<RatioSample, HarnessError> {
    if s_tilde.abs() > s - 1.0 || t_tilde.abs() > s - 1.0 {
        return Err(HarnessError::ParameterRange { s_tilde, t_tilde, s });
    }
    let w = apply_lambda(g, -t_tilde, lambda);
    let order = s_tilde + t_tilde + 1.0;
    let fw = dealias_product(&[f, &w]).expect("factors share one grid");
    let first = apply_lambda(&fw, order, lambda);
    let lw = apply_lambda(&w, order, lambda);
    let second = dealias_product(&[f, &lw]).expect("factors share one grid");
    let comm = first.sub(&second).expect("one grid");
    let lhs_raw = l2_norm(&apply_lambda(&comm, -s_tilde, lambda));
    let scale = l2_norm(&apply_lambda(&first, -s_tilde, lambda))
        + l2_norm(&apply_lambda(&second, -s_tilde, lambda));
    let lhs = cancelled(lhs_raw, scale);
    let rhs = grad_hs(f, s - 1.0) * l2_norm(g);
    Ok(RatioSample::new(0, lhs, rhs))
}

/// Commutator estimate `|[lambda^s, f] g|_p` against
/// `|grad f|_inf |lambda^{s-1} g|_p + |lambda^s f|_p |g|_inf`, with the
/// inhomogeneous `lambda`.
pub fn kato_ponce_ratio(
    f: &SpectralField,
    g: &SpectralField,
    s: f64,
    p: f64,
) -> Result<RatioSample, HarnessError> {
    if !(s > 0.0) {
        return Err(HarnessError::NonPositiveSobolev(s));
    }
    if !(1.0..f64::INFINITY).contains(&p) {
        return Err(HarnessError::BadLebesgue(p));
    }
    let fg = dealias_product(&[f, g]).expect("factors share one grid");
    let first = lambda_s(&fg, s);
    let second = dealias_product(&[f, &lambda_s(g, s)]).expect("factors share one grid");
    let comm = first.sub(&second).expect("one grid");
    let lhs = cancelled(
        lp_norm(&comm, p),
        lp_norm(&first, p) + lp_norm(&second, p),
    );
    let rhs = grad_linf(f) * lp_norm(&lambda_s(g, s - 1.0), p)
        + lp_norm(&lambda_s(f, s), p) * linf_norm(g);
    Ok(RatioSample::new(0, lhs, rhs))
}

/// Fractional Leibniz bound: `|fg|_{s,p}` against
/// `|f|_inf |lambda^s g|_p + |lambda^s f|_p |g|_inf`.
pub fn leibniz_ratio(
    f: &SpectralField,
    g: &SpectralField,
    s: f64,
    p: f64,
) -> Result<RatioSample, HarnessError> {
    if !(s > 0.0) {
        return Err(HarnessError::NonPositiveSobolev(s));
    }
    if !(1.0..f64::INFINITY).contains(&p) {
        return Err(HarnessError::BadLebesgue(p));
    }
    let fg = dealias_product(&[f, g]).expect("factors share one grid");
    let lhs = lp_norm(&lambda_s(&fg, s), p);
    let rhs = linf_norm(f) * lp_norm(&lambda_s(g, s), p)
        + lp_norm(&lambda_s(f, s), p) * linf_norm(g);
    Ok(RatioSample::new(0, lhs, rhs))
}

/// 1D commutator of the Hilbert transform with a Lipschitz multiplier:
/// `|[H, A] f'|_{L^2}` against `|A'|_inf |f|_{L^2}`.
pub fn calderon_ratio(a: &LineField, f: &LineField) -> RatioSample {
    let fp = deriv_line(f);
    let afp = product_line(a, &fp).expect("fields share one line");
    let first = hilbert_line(&afp);
    let second = product_line(a, &hilbert_line(&fp)).expect("fields share one line");
    let comm = first.sub(&second).expect("one line");
    let lhs = cancelled(comm.l2_norm(), first.l2_norm() + second.l2_norm());
    let rhs = deriv_line(a).linf_norm() * f.l2_norm();
    RatioSample::new(0, lhs, rhs)
}

/// Algebra-weighted product bound: `|gh|_[s]` against
/// `|g|_A |h|_[s] + |g|_[s] X` where `X` is `|g|_A` or `|h|_A` per the
/// requested reading.
pub fn product_a_ratio(
    g: &SpectralField,
    h: &SpectralField,
    s: f64,
    lambda: LambdaReading,
    reading: ProductReading,
) -> Result<RatioSample, HarnessError> {
    if !(s >= 0.0) {
        return Err(HarnessError::NegativeSobolev(s));
    }
    let gh = dealias_product(&[g, h]).expect("factors share one grid");
    let lhs = bracket_norm(&gh, s, lambda);
    let tail = match reading {
        ProductReading::LiteralGg => a_norm(g),
        ProductReading::SymmetricGh => a_norm(h),
    };
    let rhs = a_norm(g) * bracket_norm(h, s, lambda) + bracket_norm(g, s, lambda) * tail;
    Ok(RatioSample::new(0, lhs, rhs))
}

/// Product-with-derivative bound: `|g dx h|_{H^s}` against
/// `|g|_{H^s} |h|_{H^s} + |g|_{H^{s0}} |h|_{H^{s+1}}`.
pub fn product_dx_ratio(
    g: &SpectralField,
    h: &SpectralField,
    s: f64,
    s0: f64,
) -> Result<RatioSample, HarnessError> {
    if !(s >= 0.0) {
        return Err(HarnessError::NegativeSobolev(s));
    }
    if !(s0 > 1.0) {
        return Err(HarnessError::BadAuxiliaryIndex(s0));
    }
    let dxh = deriv_x(h);
    let gdxh = dealias_product(&[g, &dxh]).expect("factors share one grid");
    let lhs = hs_norm(&gdxh, s);
    let rhs = hs_norm(g, s) * hs_norm(h, s) + hs_norm(g, s0) * hs_norm(h, s + 1.0);
    Ok(RatioSample::new(0, lhs, rhs))
}

/// Inputs of one report: the kind, its parameters, the base grids, and
/// the seed list.
#[derive(Debug, Clone)]
pub struct HarnessTask {
    pub kind: RatioKind,
    pub params: RatioParams,
    pub grid: Grid2,
    pub line: Line,
    pub seeds: Vec<u64>,
}

fn sample_for_seed(task: &HarnessTask, grid: Grid2, line: Line, seed: u64) -> Result<RatioSample, HarnessError> {
    let q = &task.params;
    let mut sample = match task.kind {
        RatioKind::Calderon => {
            let a = random_smooth_line(seed, line, q.decay_rate);
            let f = random_smooth_line(seed ^ PAIR_SPLIT, line, q.decay_rate);
            calderon_ratio(&a, &f)
        }
        kind => {
            let f = random_smooth_field(seed, grid, q.decay_rate);
            let g = random_smooth_field(seed ^ PAIR_SPLIT, grid, q.decay_rate);
            match kind {
                RatioKind::Kato => {
                    kato_commutator_ratio(&f, &g, q.s_tilde, q.t_tilde, q.s, q.lambda)?
                }
                RatioKind::KatoPonce => kato_ponce_ratio(&f, &g, q.s, q.p)?,
                RatioKind::Leibniz => leibniz_ratio(&f, &g, q.s, q.p)?,
                RatioKind::ProductA => product_a_ratio(&f, &g, q.s, q.lambda, q.reading)?,
                RatioKind::ProductDx => product_dx_ratio(&f, &g, q.s, q.s0)?,
                RatioKind::Calderon => unreachable!("handled above"),
            }
        }
    };
    sample.seed = seed;
    Ok(sample)
}

/// Map seeds to samples on worker threads; results keep seed order, so
/// reports are deterministic regardless of thread count.
fn batch(task: &HarnessTask, grid: Grid2, line: Line) -> Result<Vec<RatioSample>, HarnessError> {
    let seeds = &task.seeds;
    if seeds.is_empty() {
        return Ok(Vec::new());
    }
    let workers = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1)
        .min(seeds.len());
    let chunk = seeds.len().div_ceil(workers);
    let mut out: Vec<Option<Result<RatioSample, HarnessError>>> =
        (0..seeds.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (seed_chunk, out_chunk) in seeds.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (seed, slot) in seed_chunk.iter().zip(out_chunk.iter_mut()) {
                    *slot = Some(sample_for_seed(task, grid, line, *seed));
                }
            });
        }
    });
    out.into_iter()
        .map(|slot| slot.expect("every slot is filled"))
        .collect()
}

/// Run one kind over the seed list at the task resolution and at doubled
/// resolution (same box), and report the samples plus the stability of
/// the maximal ratio under that refinement.
pub fn ratio_report(task: &HarnessTask) -> Result<RatioReport, HarnessError> {
    let base = batch(task, task.grid, task.line)?;
    let fine = batch(task, task.grid.refined()?, task.line.refined())?;
    let max_ratio = base.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let max_fine = fine.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let refinement_ratio = if max_ratio == 0.0 {
        if max_fine == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        max_fine / max_ratio
    };
    Ok(RatioReport {
        kind: task.kind,
        params: task.params,
        samples: base,
        max_ratio,
        refinement_ratio,
    })
}
