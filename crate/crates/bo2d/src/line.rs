//! One-dimensional spectral path.
//!
//! A scaled-down copy of the 2D machinery (same conventions: samples on
//! `[-L, L)` starting at `-L`, unitary transforms, FFT mode order,
//! frequencies `xi = pi*j/L`, Nyquist zeroed by odd symbols) used where an
//! estimate is genuinely one-dimensional, such as the Calderon commutator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dealias::padded_axis;
use crate::grid::Grid2;
use crate::transform::fft1_raw;

#[derive(Debug, Error, PartialEq)]
pub enum LineError {
    #[error("n must be even and at least 8, got {0}")]
    BadSize(usize),
    #[error("L must be positive, got {0}")]
    BadLength(f64),
    #[error("fields live on different lines")]
    LineMismatch,
}

/// Uniform periodic 1D grid on `[-L, L)` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    n: usize,
    l: f64,
}

impl Line {
    pub fn new(n: usize, l: f64) -> Result<Self, LineError> {
        if n % 2 != 0 || n < 8 {
            return Err(LineError::BadSize(n));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(LineError::BadLength(l));
        }
        Ok(Self { n, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.dx()
    }

    /// Frequency `xi = pi*j/L` at storage index `i`.
    pub fn xi(&self, i: usize) -> f64 {
        std::f64::consts::PI * Grid2::mode_number(i, self.n) as f64 / self.l
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Line with twice the resolution on the same interval.
    pub fn refined(&self) -> Self {
        Self {
            n: self.n * 2,
            l: self.l,
        }
    }
}

/// Real scalar field on a [`Line`], stored as Fourier coefficients.
#[derive(Debug, Clone)]
pub struct LineField {
    line: Line,
    coeffs: Vec<Complex64>,
}

fn fft1_unitary(data: &mut [Complex64], forward: bool) {
    fft1_raw(data, forward);
    let scale = 1.0 / (data.len() as f64).sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
}

impl LineField {
    pub fn from_physical(line: Line, samples: &[f64]) -> Self {
        assert_eq!(samples.len(), line.n(), "sample count must match the line");
        let mut data: Vec<Complex64> =
            samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft1_unitary(&mut data, true);
        Self { line, coeffs: data }
    }

    pub fn from_fn(line: Line, f: impl Fn(f64) -> f64) -> Self {
        let samples: Vec<f64> = (0..line.n()).map(|i| f(line.x(i))).collect();
        Self::from_physical(line, &samples)
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn to_physical_real(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft1_unitary(&mut data, false);
        data.iter().map(|z| z.re).collect()
    }

    /// `L^2` norm on the interval (quadrature-weighted Parseval).
    pub fn l2_norm(&self) -> f64 {
        self.line.dx().sqrt()
            * self
                .coeffs
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.to_physical_real()
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LineError> {
        if self.line != other.line {
            return Err(LineError::LineMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self {
            line: self.line,
            coeffs,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            line: self.line,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }
}

/// Hilbert transform: multiplier `-i sgn(xi)`, zero on the mean and the
/// Nyquist mode.
pub fn hilbert_line(u: &LineField) -> LineField {
    let line = *u.line();
    let coeffs = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if i == 0 || line.is_nyquist(i) {
                Complex64::ZERO
            } else {
                c * Complex64::new(0.0, -line.xi(i).signum())
            }
        })
        .collect();
    LineField { line, coeffs }
}

/// Derivative: multiplier `i xi`, Nyquist zeroed to preserve reality.
pub fn deriv_line(u: &LineField) -> LineField {
    let line = *u.line();
    let coeffs = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if line.is_nyquist(i) {
                Complex64::ZERO
            } else {
                c * Complex64::new(0.0, line.xi(i))
            }
        })
        .collect();
    LineField { line, coeffs }
}

/// Pointwise product of two fields, dealiased by zero padding to at least
/// `3n/2` (exact for the quadratic band that is kept).
pub fn product_line(a: &LineField, b: &LineField) -> Result<LineField, LineError> {
    if a.line != b.line {
        return Err(LineError::LineMismatch);
    }
    let n = a.line.n();
    let m = padded_axis(n, 2);
    let value_scale = (m as f64 / n as f64).sqrt();
    let embed = |f: &LineField| -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; m];
        for i in 0..n {
            let j = Grid2::mode_number(i, n);
            out[Grid2::mode_index(j, m)] = f.coeffs[i] * value_scale;
        }
        fft1_unitary(&mut out, false);
        out
    };
    let pa = embed(a);
    let pb = embed(b);
    let mut prod: Vec<Complex64> = pa.iter().zip(&pb).map(|(&x, &y)| x * y).collect();
    fft1_unitary(&mut prod, true);
    let mut coeffs = vec![Complex64::ZERO; n];
    for (i, slot) in coeffs.iter_mut().enumerate() {
        let j = Grid2::mode_number(i, n);
        *slot = prod[Grid2::mode_index(j, m)] / value_scale;
    }
    Ok(LineField {
        line: a.line,
        coeffs,
    })
}

/// Random real field with coefficient magnitudes
/// `(1 + xi^2)^(-decay_rate/2)` and seeded uniform phases. The phase of a
/// mode depends only on `(seed, mode number)`, so refining the line keeps
/// the shared low modes identical.
pub fn random_smooth_line(seed: u64, line: Line, decay_rate: f64) -> LineField {
    assert!(decay_rate > 1.0, "decay rate must exceed 1");
    let n = line.n();
    let mut coeffs = vec![Complex64::ZERO; n];
    for i in 1..n {
        if line.is_nyquist(i) {
            continue;
        }
        let j = Grid2::mode_number(i, n);
        if j <= 0 {
            continue;
        }
        let xi = line.xi(i);
        let mag = (1.0 + xi * xi).powf(-decay_rate / 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        let c = Complex64::from_polar(mag, phase);
        coeffs[i] = c;
        coeffs[Grid2::mode_index(-j, n)] = c.conj();
    }
    LineField { line, coeffs }
}

/// Smooth bump equal to 1 at the center and vanishing with all derivatives
/// at the interval ends, so windowed samples extend periodically as a
/// smooth function.
pub fn smooth_bump(line: Line, x: f64) -> f64 {
    let r = x / line.l();
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}
