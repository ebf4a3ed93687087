//! Uniform periodic rectangle and its dual frequency lattice.

use thiserror::Error;

/// Smallest number of points allowed per axis.
pub const MIN_POINTS: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("{axis} must be even, got {value}")]
    OddSize { axis: &'static str, value: usize },
    #[error("{axis} must be at least {MIN_POINTS}, got {value}")]
    TooSmall { axis: &'static str, value: usize },
    #[error("{axis} must be positive, got {value}")]
    NonPositiveLength { axis: &'static str, value: f64 },
}

/// Uniform grid on `[-Lx, Lx) x [-Ly, Ly)` with `nx x ny` points.
///
/// Physical samples live at `x_i = -Lx + i*2Lx/nx`, `y_j = -Ly + j*2Ly/ny`.
/// The dual lattice is `xi_j = pi*j/Lx`, `eta_k = pi*k/Ly` with
/// `j in [-nx/2, nx/2)`, `k in [-ny/2, ny/2)`.
///
/// Mode storage order follows the FFT convention per axis: storage index
/// `i` holds mode number `j = i` for `i < n/2` and `j = i - n` for
/// `i >= n/2`; index `n/2` is the (unpaired) Nyquist mode `j = -n/2`.
/// A 2D coefficient array is row-major with the x index outermost:
/// `idx = ix*ny + iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid2 {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self, GridError> {
        for (axis, value) in [("nx", nx), ("ny", ny)] {
            if value % 2 != 0 {
                return Err(GridError::OddSize { axis, value });
            }
            if value < MIN_POINTS {
                return Err(GridError::TooSmall { axis, value });
            }
        }
        for (axis, value) in [("Lx", lx), ("Ly", ly)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(GridError::NonPositiveLength { axis, value });
            }
        }
        Ok(Self { nx, ny, lx, ly })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    /// Number of grid points (and of stored coefficients).
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing in x: `2Lx/nx`.
    pub fn dx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }

    /// Physical spacing in y: `2Ly/ny`.
    pub fn dy(&self) -> f64 {
        2.0 * self.ly / self.ny as f64
    }

    /// Quadrature weight of one grid cell, `dx*dy`.
    pub fn quad_weight(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Physical x coordinate of sample index `ix`.
    pub fn x(&self, ix: usize) -> f64 {
        -self.lx + ix as f64 * self.dx()
    }

    /// Physical y coordinate of sample index `iy`.
    pub fn y(&self, iy: usize) -> f64 {
        -self.ly + iy as f64 * self.dy()
    }

    /// Signed mode number for storage index `i` along an axis of size `n`.
    pub fn mode_number(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Storage index of signed mode number `j` along an axis of size `n`.
    pub fn mode_index(j: i64, n: usize) -> usize {
        if j >= 0 {
            j as usize
        } else {
            (j + n as i64) as usize
        }
    }

    /// Frequency `xi = pi*j/Lx` at storage index `ix`.
    pub fn xi(&self, ix: usize) -> f64 {
        std::f64::consts::PI * Self::mode_number(ix, self.nx) as f64 / self.lx
    }

    /// Frequency `eta = pi*k/Ly` at storage index `iy`.
    pub fn eta(&self, iy: usize) -> f64 {
        std::f64::consts::PI * Self::mode_number(iy, self.ny) as f64 / self.ly
    }

    /// Largest resolved `|xi|`, attained at the Nyquist index.
    pub fn xi_max(&self) -> f64 {
        std::f64::consts::PI * (self.nx / 2) as f64 / self.lx
    }

    /// Largest resolved `|eta|`.
    pub fn eta_max(&self) -> f64 {
        std::f64::consts::PI * (self.ny / 2) as f64 / self.ly
    }

    /// True when `ix` is the unpaired x-Nyquist index `nx/2`.
    pub fn is_nyquist_x(&self, ix: usize) -> bool {
        ix == self.nx / 2
    }

    /// True when `iy` is the unpaired y-Nyquist index `ny/2`.
    pub fn is_nyquist_y(&self, iy: usize) -> bool {
        iy == self.ny / 2
    }

    /// Flat storage index of mode `(ix, iy)`.
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    /// Storage index of the mode mirrored through the origin,
    /// `(j, k) -> (-j, -k)`; Nyquist indices are their own mirror.
    pub fn mirror(&self, ix: usize, iy: usize) -> (usize, usize) {
        let mx = if ix == 0 || ix == self.nx / 2 {
            ix
        } else {
            self.nx - ix
        };
        let my = if iy == 0 || iy == self.ny / 2 {
            iy
        } else {
            self.ny - iy
        };
        (mx, my)
    }

    /// Grid with the same spacing on a rectangle twice as long per axis.
    pub fn doubled(&self) -> Result<Self, GridError> {
        Self::new(self.nx * 2, self.ny * 2, self.lx * 2.0, self.ly * 2.0)
    }

    /// Grid with twice the resolution on the same rectangle.
    pub fn refined(&self) -> Result<Self, GridError> {
        Self::new(self.nx * 2, self.ny * 2, self.lx, self.ly)
    }
}
