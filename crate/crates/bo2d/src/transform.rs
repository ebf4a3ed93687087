//! Forward/inverse 2D transforms with unitary normalization.
//!
//! The forward transform uses the kernel `e^{-i<x,xi>}` and the inverse
//! `e^{+i<x,xi>}`, each scaled by `1/sqrt(n)` per axis, so a round trip is
//! the identity and the discrete `l2` norm of the coefficients equals the
//! discrete `l2` norm of the samples (Parseval).
//!
//! Samples are taken in storage order starting at `-Lx` (resp. `-Ly`), so a
//! stored coefficient of mode `j` carries the phase `(-1)^j` relative to the
//! coefficient of `e^{i xi_j x}` in the centered coordinate. Every operator
//! in this crate is diagonal in mode index or works through physical
//! samples, so the phase convention cancels; it only matters when reading a
//! raw coefficient as a continuum Fourier value.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::grid::Grid2;

struct PlanCache {
    planner: FftPlanner<f64>,
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

impl PlanCache {
    fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
            forward: HashMap::new(),
            inverse: HashMap::new(),
        }
    }

    fn forward_plan(&mut self, n: usize) -> Arc<dyn Fft<f64>> {
        let planner = &mut self.planner;
        self.forward
            .entry(n)
            .or_insert_with(|| planner.plan_fft_forward(n))
            .clone()
    }

    fn inverse_plan(&mut self, n: usize) -> Arc<dyn Fft<f64>> {
        let planner = &mut self.planner;
        self.inverse
            .entry(n)
            .or_insert_with(|| planner.plan_fft_inverse(n))
            .clone()
    }
}

thread_local! {
    static CACHE: RefCell<PlanCache> = RefCell::new(PlanCache::new());
}

fn transpose(data: &[Complex64], rows: usize, cols: usize, out: &mut Vec<Complex64>) {
    out.clear();
    out.resize(rows * cols, Complex64::ZERO);
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
}

fn fft_rows(data: &mut [Complex64], row_len: usize, forward: bool) {
    CACHE.with(|cache| {
        let plan = {
            let mut cache = cache.borrow_mut();
            if forward {
                cache.forward_plan(row_len)
            } else {
                cache.inverse_plan(row_len)
            }
        };
        for row in data.chunks_exact_mut(row_len) {
            plan.process(row);
        }
    });
}

/// Raw (unnormalized) 2D DFT over an `nx x ny` row-major array, in place.
pub fn fft2_raw(data: &mut Vec<Complex64>, nx: usize, ny: usize, forward: bool) {
    assert_eq!(data.len(), nx * ny, "array shape must match nx*ny");
    fft_rows(data, ny, forward);
    let mut scratch = Vec::new();
    transpose(data, nx, ny, &mut scratch);
    fft_rows(&mut scratch, nx, forward);
    transpose(&scratch, ny, nx, data);
}

/// Unitary forward transform of physical samples into coefficients.
pub fn forward2(grid: &Grid2, mut samples: Vec<Complex64>) -> Vec<Complex64> {
    assert_eq!(samples.len(), grid.len(), "array shape must match grid");
    fft2_raw(&mut samples, grid.nx(), grid.ny(), true);
    let scale = 1.0 / (grid.len() as f64).sqrt();
    for v in &mut samples {
        *v *= scale;
    }
    samples
}

/// Unitary inverse transform of coefficients into physical samples.
pub fn inverse2(grid: &Grid2, mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    assert_eq!(coeffs.len(), grid.len(), "array shape must match grid");
    fft2_raw(&mut coeffs, grid.nx(), grid.ny(), false);
    let scale = 1.0 / (grid.len() as f64).sqrt();
    for v in &mut coeffs {
        *v *= scale;
    }
    coeffs
}

/// Raw 1D DFT, in place.
pub fn fft1_raw(data: &mut [Complex64], forward: bool) {
    let n = data.len();
    CACHE.with(|cache| {
        let plan = {
            let mut cache = cache.borrow_mut();
            if forward {
                cache.forward_plan(n)
            } else {
                cache.inverse_plan(n)
            }
        };
        plan.process(data);
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_samples(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn l2(v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn round_trip_is_identity() {
        let grid = Grid2::new(16, 12, 1.7, 2.3).unwrap();
        let samples = random_samples(grid.len(), 1);
        let back = inverse2(&grid, forward2(&grid, samples.clone()));
        let diff: f64 = samples
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(
            diff / l2(&samples) <= 1e-12,
            "round trip relative error {diff}"
        );
    }

    #[test]
    fn parseval_holds() {
        let grid = Grid2::new(32, 8, 3.0, 1.0).unwrap();
        let samples = random_samples(grid.len(), 2);
        let coeffs = forward2(&grid, samples.clone());
        let rel = (l2(&samples) - l2(&coeffs)).abs() / l2(&samples);
        assert!(rel <= 1e-12, "Parseval relative defect {rel}");
    }

    #[test]
    fn constant_maps_to_zero_mode_only() {
        let grid = Grid2::new(8, 8, 1.0, 1.0).unwrap();
        let samples = vec![Complex64::new(1.0, 0.0); grid.len()];
        let coeffs = forward2(&grid, samples);
        assert!(
            (coeffs[0] - Complex64::new(8.0, 0.0)).norm() < 1e-12,
            "(0,0) mode of the constant 1 should be sqrt(nx*ny)"
        );
        for (i, c) in coeffs.iter().enumerate().skip(1) {
            assert!(c.norm() < 1e-12, "mode {i} should vanish, got {c}");
        }
    }

    #[test]
    fn single_mode_has_expected_storage_phase() {
        // e^{i x} sampled from -pi: stored coefficient carries (-1)^j = -1.
        let grid = Grid2::new(8, 8, std::f64::consts::PI, std::f64::consts::PI).unwrap();
        let samples: Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let ix = i / grid.ny();
                Complex64::new(0.0, grid.x(ix)).exp()
            })
            .collect();
        let coeffs = forward2(&grid, samples);
        let idx = grid.idx(1, 0);
        assert!(
            (coeffs[idx] - Complex64::new(-8.0, 0.0)).norm() < 1e-12,
            "mode (1,0) should be -sqrt(64), got {}",
            coeffs[idx]
        );
    }
}
