//! Fourier-multiplier operators.

use num_complex::Complex64;
use thiserror::Error;

use crate::dispersion;
use crate::evolution::EquationParams;
use crate::field::SpectralField;
use crate::grid::Grid2;

#[derive(Debug, Error)]
pub enum MultiplierError {
    #[error("multiplier table length {got} does not match grid size {want}")]
    GridMismatch { got: usize, want: usize },
}

/// Symbol of a Fourier-multiplier operator.
///
/// Conventions, chosen so that real fields stay real and the x-mean is an
/// exact invariant:
/// * `HilbertX` is `-i sgn(xi)`, zero on the `xi = 0` column and on the
///   unpaired x-Nyquist row.
/// * `InvDx` divides by `i xi`, zero on the `xi = 0` column and at
///   x-Nyquist.
/// * `DerivX`/`DerivY` are `i xi` / `i eta` with the corresponding Nyquist
///   row zeroed.
/// * `LambdaS(s)` is `(1 + xi^2 + eta^2)^{s/2}`; real, even, >= 1 for
///   `s >= 0`, invertible by `LambdaS(-s)`.
/// * `LambdaHomog(s)` is `(xi^2 + eta^2)^{s/2}` with the zero mode
///   annihilated.
/// * `Dispersion` is `omega(xi, eta) * t` with
///   `omega = sgn(xi)(xi^2 + alpha*eta^2) - gamma*eta^2/xi`, zero on the
///   `xi = 0` column and on both Nyquist rows; the propagator exponentiates
///   it. As a plain multiplier it is a real odd symbol, so it does not
///   preserve reality.
/// * `Custom` applies a tabulated symbol.
#[derive(Debug, Clone)]
pub enum Multiplier {
    HilbertX,
    InvDx,
    DerivX,
    DerivY,
    LambdaS(f64),
    LambdaHomog(f64),
    Dispersion { t: f64, alpha: f64, gamma: f64 },
    Custom(Vec<Complex64>),
}

impl Multiplier {
    /// Dispersion symbol taken from equation parameters.
    pub fn dispersion(t: f64, params: &EquationParams) -> Self {
        Multiplier::Dispersion {
            t,
            alpha: params.alpha(),
            gamma: params.gamma(),
        }
    }

    /// Symbol value at storage indices `(ix, iy)`.
    pub fn value(&self, grid: &Grid2, ix: usize, iy: usize) -> Complex64 {
        let xi = grid.xi(ix);
        let eta = grid.eta(iy);
        match self {
            Multiplier::HilbertX => {
                if ix == 0 || grid.is_nyquist_x(ix) {
                    Complex64::ZERO
                } else {
                    Complex64::new(0.0, -xi.signum())
                }
            }
            Multiplier::InvDx => {
                if ix == 0 || grid.is_nyquist_x(ix) {
                    Complex64::ZERO
                } else {
                    Complex64::new(0.0, -1.0 / xi)
                }
            }
            Multiplier::DerivX => {
                if grid.is_nyquist_x(ix) {
                    Complex64::ZERO
                } else {
                    Complex64::new(0.0, xi)
                }
            }
            Multiplier::DerivY => {
                if grid.is_nyquist_y(iy) {
                    Complex64::ZERO
                } else {
                    Complex64::new(0.0, eta)
                }
            }
            Multiplier::LambdaS(s) => {
                Complex64::new((1.0 + xi * xi + eta * eta).powf(s / 2.0), 0.0)
            }
            Multiplier::LambdaHomog(s) => {
                if ix == 0 && iy == 0 {
                    Complex64::ZERO
                } else {
                    Complex64::new((xi * xi + eta * eta).powf(s / 2.0), 0.0)
                }
            }
            Multiplier::Dispersion { t, alpha, gamma } => {
                if grid.is_nyquist_x(ix) || grid.is_nyquist_y(iy) {
                    Complex64::ZERO
                } else {
                    Complex64::new(dispersion::dispersion_value(xi, eta, *alpha, *gamma) * t, 0.0)
                }
            }
            Multiplier::Custom(table) => table[grid.idx(ix, iy)],
        }
    }

    /// Tabulate the symbol over the grid.
    pub fn table(&self, grid: &Grid2) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx() {
            for iy in 0..grid.ny() {
                out.push(self.value(grid, ix, iy));
            }
        }
        out
    }

    /// Whether the symbol satisfies `m(-xi,-eta) = conj m(xi,eta)`, so that
    /// it maps real fields to real fields.
    pub fn preserves_reality(&self, grid: &Grid2) -> bool {
        match self {
            Multiplier::HilbertX
            | Multiplier::InvDx
            | Multiplier::DerivX
            | Multiplier::DerivY
            | Multiplier::LambdaS(_)
            | Multiplier::LambdaHomog(_) => true,
            Multiplier::Dispersion { t, .. } => *t == 0.0,
            Multiplier::Custom(table) => {
                let scale = table.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
                if scale == 0.0 {
                    return true;
                }
                for ix in 0..grid.nx() {
                    for iy in 0..grid.ny() {
                        let (mx, my) = grid.mirror(ix, iy);
                        let a = table[grid.idx(ix, iy)];
                        let b = table[grid.idx(mx, my)];
                        if (a - b.conj()).norm() > 1e-12 * scale {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

/// Apply a multiplier symbol coefficientwise.
pub fn apply_multiplier(
    u: &SpectralField,
    m: &Multiplier,
) -> Result<SpectralField, MultiplierError> {
    let grid = *u.grid();
    if let Multiplier::Custom(table) = m {
        if table.len() != grid.len() {
            return Err(MultiplierError::GridMismatch {
                got: table.len(),
                want: grid.len(),
            });
        }
    }
    let mut coeffs = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx() {
        for iy in 0..grid.ny() {
            coeffs.push(u.coeffs()[grid.idx(ix, iy)] * m.value(&grid, ix, iy));
        }
    }
    let real = u.is_real() && m.preserves_reality(&grid);
    Ok(SpectralField::from_coeffs_unchecked(
        grid,
        coeffs,
        u.time(),
        real,
    ))
}

/// Shorthand for `Lambda^s u`.
pub fn lambda_s(u: &SpectralField, s: f64) -> SpectralField {
    apply_multiplier(u, &Multiplier::LambdaS(s)).expect("built-in symbol")
}

/// Shorthand for the x-Hilbert transform.
pub fn hilbert_x(u: &SpectralField) -> SpectralField {
    apply_multiplier(u, &Multiplier::HilbertX).expect("built-in symbol")
}

/// Antiderivative in x (zero mode mapped to zero).
pub fn inv_dx(u: &SpectralField) -> SpectralField {
    apply_multiplier(u, &Multiplier::InvDx).expect("built-in symbol")
}

/// Derivative in x.
pub fn deriv_x(u: &SpectralField) -> SpectralField {
    apply_multiplier(u, &Multiplier::DerivX).expect("built-in symbol")
}

/// Derivative in y.
pub fn deriv_y(u: &SpectralField) -> SpectralField {
    apply_multiplier(u, &Multiplier::DerivY).expect("built-in symbol")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::l2_norm;
    use std::f64::consts::PI;

    fn grid() -> Grid2 {
        Grid2::new(16, 16, PI, PI).unwrap()
    }

    fn max_phys_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.to_physical()
            .iter()
            .zip(b.to_physical())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn hilbert_maps_cos_to_sin() {
        let g = grid();
        let u = SpectralField::from_fn(g, |x, _| x.cos());
        let hu = hilbert_x(&u);
        let want = SpectralField::from_fn(g, |x, _| x.sin());
        assert!(max_phys_diff(&hu, &want) < 1e-12);
        assert!(hu.is_real());
    }

    #[test]
    fn hilbert_squared_is_minus_identity_off_zero_mean() {
        let g = grid();
        let mut u = SpectralField::from_fn(g, |x, y| (2.0 * x).sin() * (y).cos() + (3.0 * x).cos());
        u.project_zero_x_mean();
        let hhu = hilbert_x(&hilbert_x(&u));
        let diff = hhu.add(&u).unwrap().coeff_l2() / u.coeff_l2();
        assert!(diff < 1e-12, "H^2 should be -Id, defect {diff}");
    }

    #[test]
    fn lambda_scales_single_mode_by_two_pow_half_s() {
        let g = grid();
        let u = SpectralField::from_fn(g, |x, _| x.cos());
        for s in [0.5, 1.0, 3.0] {
            let lu = lambda_s(&u, s);
            let expect = 2.0_f64.powf(s / 2.0);
            let ratio = l2_norm(&lu) / l2_norm(&u);
            assert!(
                (ratio - expect).abs() < 1e-12,
                "Lambda^{s} on |xi|=1 mode: got {ratio}, want {expect}"
            );
        }
    }

    #[test]
    fn lambda_is_invertible() {
        let g = grid();
        let u = SpectralField::from_fn(g, |x, y| (x + 0.3).sin() * (2.0 * y).cos());
        let back = lambda_s(&lambda_s(&u, 1.7), -1.7);
        let rel = back.sub(&u).unwrap().coeff_l2() / u.coeff_l2();
        assert!(rel < 1e-12, "Lambda^-s Lambda^s defect {rel}");
    }

    #[test]
    fn inv_dx_inverts_derivative_on_zero_mean_fields() {
        let g = grid();
        let u = SpectralField::from_fn(g, |x, _| x.cos());
        let v = inv_dx(&u);
        let want = SpectralField::from_fn(g, |x, _| x.sin());
        assert!(max_phys_diff(&v, &want) < 1e-12, "inv_dx(cos) should be sin");

        let mut w = SpectralField::from_fn(g, |x, y| (3.0 * x).sin() * y.cos() + (x).cos());
        w.project_zero_x_mean();
        let rel = deriv_x(&inv_dx(&w)).sub(&w).unwrap().coeff_l2() / w.coeff_l2();
        assert!(rel <= 1e-12, "dx o inv_dx defect {rel}");
    }

    #[test]
    fn inv_dx_kills_constants() {
        let g = grid();
        let u = SpectralField::from_fn(g, |_, _| 4.2);
        assert!(inv_dx(&u).coeff_l2() < 1e-14);
    }

    #[test]
    fn hilbert_is_skew_adjoint_on_zero_x_mean() {
        let g = grid();
        let mut f = SpectralField::from_fn(g, |x, y| (2.0 * x + 0.1).sin() * (y * 3.0).cos());
        let mut h = SpectralField::from_fn(g, |x, y| (x).cos() * (1.0 + 0.5 * (2.0 * y).sin()));
        f.project_zero_x_mean();
        h.project_zero_x_mean();
        let inner = |a: &SpectralField, b: &SpectralField| -> f64 {
            a.coeffs()
                .iter()
                .zip(b.coeffs())
                .map(|(x, y)| (x.conj() * y).re)
                .sum()
        };
        let lhs = inner(&hilbert_x(&f), &h);
        let rhs = -inner(&f, &hilbert_x(&h));
        let scale = f.coeff_l2() * h.coeff_l2();
        assert!(
            (lhs - rhs).abs() <= 1e-12 * scale,
            "skew-adjointness defect {}",
            (lhs - rhs).abs() / scale
        );
    }

    #[test]
    fn derivative_preserves_reality_flag_and_values() {
        let g = grid();
        let u = SpectralField::from_fn(g, |x, y| (2.0 * x).sin() + (3.0 * y).cos());
        let ux = deriv_x(&u);
        assert!(ux.is_real());
        assert!(ux.conjugate_symmetry_defect() <= 1e-12);
        let want = SpectralField::from_fn(g, |x, _| 2.0 * (2.0 * x).cos());
        assert!(max_phys_diff(&ux, &want) < 1e-12);
    }

    #[test]
    fn custom_table_grid_mismatch_is_rejected() {
        let g = grid();
        let u = SpectralField::zeros(g);
        let m = Multiplier::Custom(vec![Complex64::ZERO; 3]);
        assert!(apply_multiplier(&u, &m).is_err());
    }

    #[test]
    fn dispersion_symbol_is_odd_and_clears_reality() {
        let g = grid();
        let m = Multiplier::Dispersion {
            t: 1.0,
            alpha: 1.0,
            gamma: 0.5,
        };
        let table = m.table(&g);
        for ix in 0..g.nx() {
            for iy in 0..g.ny() {
                let (mx, my) = g.mirror(ix, iy);
                let a = table[g.idx(ix, iy)];
                let b = table[g.idx(mx, my)];
                if g.is_nyquist_x(ix) || g.is_nyquist_y(iy) {
                    assert_eq!(a, Complex64::ZERO);
                } else {
                    assert!((a + b).norm() < 1e-12, "omega must be odd");
                }
                assert!(a.im == 0.0, "omega must be real");
            }
        }
        let u = SpectralField::from_fn(g, |x, _| x.sin());
        assert!(!apply_multiplier(&u, &m).unwrap().is_real());
    }
}
