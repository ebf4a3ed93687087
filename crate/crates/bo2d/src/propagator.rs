//! Exact linear flow of the dispersive part of the equation.
//!
//! Writing the linear equation as `u_t + A u = 0` with
//! `A = H dx^2 + alpha H dy^2 - gamma dx^{-1} dy^2`, the symbol of `A` is
//! `i*omega(xi, eta)` with the real odd dispersion relation `omega`, so the
//! solution operator `P(t) = exp(-t A)` acts on coefficients as the unit
//! multiplier `exp(-i omega t)`. The operator is unitary on every `H^s` and
//! forms a group: `P(t) P(s) = P(t + s)`, `P(0) = Id`.

use num_complex::Complex64;

use crate::dispersion::dispersion_table;
use crate::evolution::EquationParams;
use crate::field::SpectralField;
use crate::grid::Grid2;

/// Precomputed phase table for one `(grid, params)` pair. Reusable across
/// times: the phase at time `t` is `exp(-i omega t)` per mode.
pub struct Propagator {
    grid: Grid2,
    omega: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: Grid2, params: &EquationParams) -> Self {
        Self {
            grid,
            omega: dispersion_table(&grid, params),
        }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    /// Dispersion table (one `omega` per stored mode, zero on the mean
    /// column and the Nyquist rows).
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Apply `exp(-t A)` and advance the field clock by `t`.
    ///
    /// Panics if the field lives on a different grid; callers hold the
    /// grid fixed for the lifetime of a propagator.
    pub fn propagate(&self, u: &SpectralField, t: f64) -> SpectralField {
        assert_eq!(
            *u.grid(),
            self.grid,
            "propagator grid does not match field grid"
        );
        let coeffs: Vec<Complex64> = u
            .coeffs()
            .iter()
            .zip(&self.omega)
            .map(|(c, &w)| c * Complex64::from_polar(1.0, -w * t))
            .collect();
        SpectralField::from_coeffs_unchecked(*u.grid(), coeffs, u.time() + t, u.is_real())
    }

    /// Apply the half-step and full-step phase tables used by the
    /// integrating-factor stepper: returns `(exp(-i omega h/2), exp(-i omega h))`.
    pub fn step_phases(&self, h: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let half: Vec<Complex64> = self
            .omega
            .iter()
            .map(|&w| Complex64::from_polar(1.0, -w * h * 0.5))
            .collect();
        let full: Vec<Complex64> = self
            .omega
            .iter()
            .map(|&w| Complex64::from_polar(1.0, -w * h))
            .collect();
        (half, full)
    }
}

/// One-shot propagation without building a reusable table.
pub fn propagate(u: &SpectralField, t: f64, params: &EquationParams) -> SpectralField {
    Propagator::new(*u.grid(), params).propagate(u, t)
}
