//! Scalar field stored as Fourier coefficients on a grid.

use num_complex::Complex64;
use thiserror::Error;

use crate::grid::Grid2;
use crate::transform::{forward2, inverse2};

/// Relative tolerance for the conjugate-symmetry invariant of real fields.
pub const REALITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("array length {got} does not match grid size {want}")]
    ShapeMismatch { got: usize, want: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("coefficients contain NaN or Inf")]
    NotFinite,
    #[error("conjugate symmetry violated: relative defect {defect:e}")]
    NotConjugateSymmetric { defect: f64 },
}

/// A scalar field as complex Fourier coefficients on a [`Grid2`], tagged
/// with the physical time and a flag recording that the physical-space
/// field is real-valued.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid2,
    coeffs: Vec<Complex64>,
    time: f64,
    real: bool,
}

impl SpectralField {
    /// Zero field at time 0.
    pub fn zeros(grid: Grid2) -> Self {
        Self {
            coeffs: vec![Complex64::ZERO; grid.len()],
            grid,
            time: 0.0,
            real: true,
        }
    }

    /// Transform real physical samples (row-major, `idx = ix*ny + iy`).
    pub fn from_physical(grid: Grid2, samples: &[f64]) -> Result<Self, FieldError> {
        if samples.len() != grid.len() {
            return Err(FieldError::ShapeMismatch {
                got: samples.len(),
                want: grid.len(),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(FieldError::NotFinite);
        }
        let complex: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Ok(Self {
            coeffs: forward2(&grid, complex),
            grid,
            time: 0.0,
            real: true,
        })
    }

    /// Sample a real function of `(x, y)` on the grid and transform it.
    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut samples = vec![0.0; grid.len()];
        for ix in 0..grid.nx() {
            for iy in 0..grid.ny() {
                samples[grid.idx(ix, iy)] = f(grid.x(ix), grid.y(iy));
            }
        }
        Self::from_physical(grid, &samples).expect("sampled function must be finite")
    }

    /// Wrap raw coefficients; validates finiteness and, when `real` is
    /// claimed, conjugate symmetry to [`REALITY_TOL`] relative.
    pub fn from_coeffs(
        grid: Grid2,
        coeffs: Vec<Complex64>,
        time: f64,
        real: bool,
    ) -> Result<Self, FieldError> {
        if coeffs.len() != grid.len() {
            return Err(FieldError::ShapeMismatch {
                got: coeffs.len(),
                want: grid.len(),
            });
        }
        let field = Self {
            grid,
            coeffs,
            time,
            real,
        };
        if !field.is_finite() {
            return Err(FieldError::NotFinite);
        }
        if real {
            let defect = field.conjugate_symmetry_defect();
            if defect > REALITY_TOL {
                return Err(FieldError::NotConjugateSymmetric { defect });
            }
        }
        Ok(field)
    }

    /// Wrap coefficients without invariant checks (internal fast path for
    /// operators that preserve the invariants by construction).
    pub(crate) fn from_coeffs_unchecked(
        grid: Grid2,
        coeffs: Vec<Complex64>,
        time: f64,
        real: bool,
    ) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self {
            grid,
            coeffs,
            time,
            real,
        }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    /// True when the physical-space field is flagged real-valued.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    /// Physical samples (complex; imaginary parts are rounding noise for
    /// real fields).
    pub fn to_physical(&self) -> Vec<Complex64> {
        inverse2(&self.grid, self.coeffs.clone())
    }

    /// Physical samples of a real field, dropping rounding-level
    /// imaginary parts.
    pub fn to_physical_real(&self) -> Vec<f64> {
        self.to_physical().iter().map(|z| z.re).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest violation of `u(-xi,-eta) = conj u(xi,eta)`, relative to the
    /// largest coefficient magnitude. Zero for the zero field.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let scale = self
            .coeffs
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for ix in 0..self.grid.nx() {
            for iy in 0..self.grid.ny() {
                let (mx, my) = self.grid.mirror(ix, iy);
                let a = self.coeffs[self.grid.idx(ix, iy)];
                let b = self.coeffs[self.grid.idx(mx, my)];
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst / scale
    }

    /// Discrete `l2` norm of the coefficients (no quadrature weight).
    pub fn coeff_l2(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Mean of the field over the domain.
    pub fn mean(&self) -> f64 {
        (self.coeffs[0] / (self.grid.len() as f64).sqrt()).re
    }

    /// Relative `l2` mass carried by the `xi = 0` column (the x-mean
    /// content per transverse mode). Zero for the zero field.
    pub fn x_mean_mass(&self) -> f64 {
        let total: f64 = self.coeffs.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let column: f64 = (0..self.grid.ny())
            .map(|iy| self.coeffs[self.grid.idx(0, iy)].norm_sqr())
            .sum();
        (column / total).sqrt()
    }

    /// Zero the `xi = 0` column, projecting onto fields with zero x-mean.
    pub fn project_zero_x_mean(&mut self) {
        for iy in 0..self.grid.ny() {
            let idx = self.grid.idx(0, iy);
            self.coeffs[idx] = Complex64::ZERO;
        }
    }

    /// Rotate physical samples by whole cells: `u(x, y) -> u(x - sx*dx, y - sy*dy)`.
    pub fn translate_cells(&self, sx: usize, sy: usize) -> Self {
        let nx = self.grid.nx();
        let ny = self.grid.ny();
        let phys = self.to_physical();
        let mut shifted = vec![Complex64::ZERO; phys.len()];
        for ix in 0..nx {
            for iy in 0..ny {
                let src = ((ix + nx - sx % nx) % nx) * ny + (iy + ny - sy % ny) % ny;
                shifted[ix * ny + iy] = phys[src];
            }
        }
        let mut out = Self::from_coeffs_unchecked(
            self.grid,
            forward2(&self.grid, shifted),
            self.time,
            self.real,
        );
        // Translation cannot create imaginary content; keep the flag.
        out.real = self.real;
        out
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.zip(other, |a, b| a + b)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.zip(other, |a, b| a - b)
    }

    /// `self * c` for real `c`.
    pub fn scale(&self, c: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|z| z * c).collect();
        Self::from_coeffs_unchecked(self.grid, coeffs, self.time, self.real)
    }

    fn zip(
        &self,
        other: &Self,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, FieldError> {
        if self.grid != other.grid {
            return Err(FieldError::GridMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self::from_coeffs_unchecked(
            self.grid,
            coeffs,
            self.time,
            self.real && other.real,
        ))
    }
}
