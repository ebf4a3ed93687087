//! Dispersion relation of the linearized equation.

use crate::evolution::EquationParams;
use crate::grid::Grid2;

/// `omega(xi, eta) = sgn(xi)(xi^2 + alpha*eta^2) - gamma*eta^2/xi` for
/// `xi != 0`, and `omega(0, eta) = 0`.
///
/// The symbol is real and odd (`omega(-xi,-eta) = -omega(xi,eta)`), so the
/// group `e^{-i omega t}` preserves real fields.
pub fn dispersion_value(xi: f64, eta: f64, alpha: f64, gamma: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    xi.signum() * (xi * xi + alpha * eta * eta) - gamma * eta * eta / xi
}

/// `omega` at `(xi, eta)` for the given equation parameters.
pub fn dispersion_symbol(xi: f64, eta: f64, params: &EquationParams) -> f64 {
    dispersion_value(xi, eta, params.alpha(), params.gamma())
}

/// Tabulated `omega` over a grid, zeroed on the `xi = 0` column and on both
/// Nyquist rows so that the exponentiated symbol keeps real fields real.
pub fn dispersion_table(grid: &Grid2, params: &EquationParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx() {
        for iy in 0..grid.ny() {
            if grid.is_nyquist_x(ix) || grid.is_nyquist_y(iy) {
                out.push(0.0);
            } else {
                out.push(dispersion_value(grid.xi(ix), grid.eta(iy), params.alpha(), params.gamma()));
            }
        }
    }
    out
}
