//! Alias-free pointwise products via zero-padded transforms.

use num_complex::Complex64;
use thiserror::Error;

use crate::field::SpectralField;
use crate::grid::Grid2;
use crate::transform::fft2_raw;

#[derive(Debug, Error)]
pub enum DealiasError {
    #[error("need at least 2 factors, got {0}")]
    TooFewFactors(usize),
    #[error("factors live on different grids")]
    GridMismatch,
}

/// Smallest even 5-smooth integer `>= target` (fast FFT sizes).
fn padded_size(target: usize) -> usize {
    let mut m = target.max(2);
    if m % 2 == 1 {
        m += 1;
    }
    loop {
        let mut r = m;
        for p in [2usize, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 2;
    }
}

/// Padded axis length for a degree-`d` product on `n` modes: the factor is
/// `(d+1)/2`, which keeps every coefficient of a degree-`d` polynomial
/// product exact on the retained band.
pub fn padded_axis(n: usize, d: usize) -> usize {
    padded_size(n * (d + 1) / 2 + (if (n * (d + 1)) % 2 != 0 { 1 } else { 0 }))
}

/// Embed value-normalized coefficients into a larger FFT-ordered array.
fn embed(
    coeffs: &[Complex64],
    nx: usize,
    ny: usize,
    mx: usize,
    my: usize,
    scale: f64,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; mx * my];
    for ix in 0..nx {
        let jx = Grid2::mode_number(ix, nx);
        let px = Grid2::mode_index(jx, mx);
        for iy in 0..ny {
            let jy = Grid2::mode_number(iy, ny);
            let py = Grid2::mode_index(jy, my);
            out[px * my + py] = coeffs[ix * ny + iy] * scale;
        }
    }
    out
}

/// Truncate a padded FFT-ordered array back to the retained band.
fn truncate(
    padded: &[Complex64],
    mx: usize,
    my: usize,
    nx: usize,
    ny: usize,
    scale: f64,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; nx * ny];
    for ix in 0..nx {
        let jx = Grid2::mode_number(ix, nx);
        let px = Grid2::mode_index(jx, mx);
        for iy in 0..ny {
            let jy = Grid2::mode_number(iy, ny);
            let py = Grid2::mode_index(jy, my);
            out[ix * ny + iy] = padded[px * my + py] * scale;
        }
    }
    out
}

/// Pointwise product of the factors, computed on a grid zero-padded by the
/// factor `(d+1)/2` per axis (`d` = number of factors) and truncated back,
/// so the result is exactly alias-free for the polynomial degree `d`.
pub fn dealias_product(factors: &[&SpectralField]) -> Result<SpectralField, DealiasError> {
    let d = factors.len();
    if d < 2 {
        return Err(DealiasError::TooFewFactors(d));
    }
    let grid = *factors[0].grid();
    if factors.iter().any(|f| *f.grid() != grid) {
        return Err(DealiasError::GridMismatch);
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let mx = padded_axis(nx, d);
    let my = padded_axis(ny, d);
    let to_value = 1.0 / (grid.len() as f64).sqrt();

    let mut product: Vec<Complex64> = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        let mut padded = embed(f.coeffs(), nx, ny, mx, my, to_value);
        fft2_raw(&mut padded, mx, my, false);
        if k == 0 {
            product = padded;
        } else {
            for (p, q) in product.iter_mut().zip(&padded) {
                *p *= q;
            }
        }
    }

    fft2_raw(&mut product, mx, my, true);
    let norm = 1.0 / (mx * my) as f64;
    let coeffs = truncate(&product, mx, my, nx, ny, norm * (grid.len() as f64).sqrt());
    let real = factors.iter().all(|f| f.is_real());
    Ok(SpectralField::from_coeffs_unchecked(
        grid,
        coeffs,
        factors[0].time(),
        real,
    ))
}
