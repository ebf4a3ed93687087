//! C interface to the bo2d laboratory.
//!
//! Grids and fields are opaque handles owned by this library: every
//! constructor has a matching `_free`, fallible calls return a
//! [`Bo2dStatus`] and deliver results through out-pointers, and an
//! out-pointer is written only on `BO2D_STATUS_OK`. Accessors that return
//! a `double` directly answer NaN when the handle is null. All functions
//! catch panics at the boundary and convert them to the `Internal` status,
//! so no unwinding ever crosses into C.
//!
//! The build script regenerates `include/bo2d.h` from this file.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bo2d::diagnostics::{hs_norm, j_integral, l2_norm, linf_norm};
use bo2d::evolution::{evolve, EquationParams, SolveSchedule};
use bo2d::fresnel::fresnel_tail;
use bo2d::grid::Grid2;
use bo2d::kernel::kernel_i;
use bo2d::propagator::propagate;
use bo2d::SpectralField;

/// Uniform periodic lattice on a centered rectangle.
pub struct Bo2dGrid(Grid2);

/// Real scalar field on a lattice, tagged with its simulation time.
pub struct Bo2dField(SpectralField);

/// Outcome of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bo2dStatus {
    /// The call succeeded and any out-pointer now holds a result.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A scalar argument was out of range or inconsistent with a handle.
    InvalidArgument = 2,
    /// The solver detected a blow-up before reaching the requested time.
    BlowUp = 3,
    /// An unexpected internal failure; out-pointers are untouched.
    Internal = 4,
}

/// Evolution keeps only the first and last states; intermediate snapshots
/// are an in-Rust concern and the C surface exposes endpoints only.
const ENDPOINTS_ONLY: usize = usize::MAX;

fn guarded(f: impl FnOnce() -> Bo2dStatus) -> Bo2dStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => Bo2dStatus::Internal,
    }
}

fn guarded_f64(f: impl FnOnce() -> f64) -> f64 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(_) => f64::NAN,
    }
}

unsafe fn grid_ref<'a>(grid: *const Bo2dGrid) -> Option<&'a Grid2> {
    grid.as_ref().map(|g| &g.0)
}

unsafe fn field_ref<'a>(field: *const Bo2dField) -> Option<&'a SpectralField> {
    field.as_ref().map(|f| &f.0)
}

unsafe fn deliver_field(out: *mut *mut Bo2dField, field: SpectralField) -> Bo2dStatus {
    *out = Box::into_raw(Box::new(Bo2dField(field)));
    Bo2dStatus::Ok
}

fn params_for(p: u32, alpha: f64, gamma: f64, s: f64) -> Result<EquationParams, Bo2dStatus> {
    EquationParams::new(p, alpha, gamma, s).map_err(|_| Bo2dStatus::InvalidArgument)
}

/// Version of the library as a static null-terminated string.
#[no_mangle]
pub extern "C" fn bo2d_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create an `nx` by `ny` lattice covering `[-lx, lx) x [-ly, ly)`.
/// Sizes must be even and at least 8; half-widths must be positive.
#[no_mangle]
pub unsafe extern "C" fn bo2d_grid_new(
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    out: *mut *mut Bo2dGrid,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        match Grid2::new(nx, ny, lx, ly) {
            Ok(grid) => {
                *out = Box::into_raw(Box::new(Bo2dGrid(grid)));
                Bo2dStatus::Ok
            }
            Err(_) => Bo2dStatus::InvalidArgument,
        }
    })
}

/// Release a grid handle. Null is a harmless no-op.
#[no_mangle]
pub unsafe extern "C" fn bo2d_grid_free(grid: *mut Bo2dGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of points along x, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_grid_nx(grid: *const Bo2dGrid) -> usize {
    grid_ref(grid).map_or(0, |g| g.nx())
}

/// Number of points along y, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_grid_ny(grid: *const Bo2dGrid) -> usize {
    grid_ref(grid).map_or(0, |g| g.ny())
}

/// Centered Gaussian bump `amplitude * exp(-(x^2+y^2)/(2 width^2))`.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_gaussian(
    grid: *const Bo2dGrid,
    amplitude: f64,
    width: f64,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(g) = grid_ref(grid) else {
            return Bo2dStatus::NullArgument;
        };
        if !(amplitude.is_finite() && width.is_finite() && width > 0.0) {
            return Bo2dStatus::InvalidArgument;
        }
        let w2 = width * width;
        let f = SpectralField::from_fn(*g, move |x, y| {
            amplitude * (-(x * x + y * y) / (2.0 * w2)).exp()
        });
        deliver_field(out, f)
    })
}

/// x-derivative of the centered Gaussian bump: mean-free data whose
/// x-antiderivative is square integrable.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_dx_gaussian(
    grid: *const Bo2dGrid,
    amplitude: f64,
    width: f64,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(g) = grid_ref(grid) else {
            return Bo2dStatus::NullArgument;
        };
        if !(amplitude.is_finite() && width.is_finite() && width > 0.0) {
            return Bo2dStatus::InvalidArgument;
        }
        let w2 = width * width;
        let f = SpectralField::from_fn(*g, move |x, y| {
            -(x / w2) * amplitude * (-(x * x + y * y) / (2.0 * w2)).exp()
        });
        deliver_field(out, f)
    })
}

/// Seeded random field with Sobolev-type spectral decay; the same seed on
/// the same grid reproduces the same field. `decay_rate` must exceed 1.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_random_smooth(
    grid: *const Bo2dGrid,
    seed: u64,
    decay_rate: f64,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(g) = grid_ref(grid) else {
            return Bo2dStatus::NullArgument;
        };
        if !(decay_rate.is_finite() && decay_rate > 1.0) {
            return Bo2dStatus::InvalidArgument;
        }
        deliver_field(out, bo2d::harness::random_smooth_field(seed, *g, decay_rate))
    })
}

/// Build a field from `len` row-major samples (`len` must equal nx * ny;
/// index `ix * ny + iy`, both axes ascending from the box corner).
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_from_samples(
    grid: *const Bo2dGrid,
    samples: *const f64,
    len: usize,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() || samples.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(g) = grid_ref(grid) else {
            return Bo2dStatus::NullArgument;
        };
        if len != g.len() {
            return Bo2dStatus::InvalidArgument;
        }
        let data = std::slice::from_raw_parts(samples, len);
        match SpectralField::from_physical(*g, data) {
            Ok(f) => deliver_field(out, f),
            Err(_) => Bo2dStatus::InvalidArgument,
        }
    })
}

/// Duplicate a field handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_clone(
    field: *const Bo2dField,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(f) = field_ref(field) else {
            return Bo2dStatus::NullArgument;
        };
        deliver_field(out, f.clone())
    })
}

/// Release a field handle. Null is a harmless no-op.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_free(field: *mut Bo2dField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of samples the field carries (nx * ny), or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_len(field: *const Bo2dField) -> usize {
    field_ref(field).map_or(0, |f| f.grid().len())
}

/// Copy the field's physical samples into `out_samples` in the row-major
/// order of `bo2d_field_from_samples`. `len` must equal nx * ny.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_samples(
    field: *const Bo2dField,
    out_samples: *mut f64,
    len: usize,
) -> Bo2dStatus {
    guarded(|| {
        if out_samples.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(f) = field_ref(field) else {
            return Bo2dStatus::NullArgument;
        };
        if len != f.grid().len() {
            return Bo2dStatus::InvalidArgument;
        }
        let values = f.to_physical_real();
        std::slice::from_raw_parts_mut(out_samples, len).copy_from_slice(&values);
        Bo2dStatus::Ok
    })
}

/// Simulation time the field is tagged with, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_field_time(field: *const Bo2dField) -> f64 {
    field_ref(field).map_or(f64::NAN, |f| f.time())
}

/// Apply the free linear flow for time `t` (negative `t` runs backwards).
/// Equation parameters: nonlinearity power `p >= 1`, transverse dispersion
/// weight `alpha`, mixed-derivative weight `gamma`, Sobolev index `s`.
#[no_mangle]
pub unsafe extern "C" fn bo2d_propagate(
    field: *const Bo2dField,
    t: f64,
    p: u32,
    alpha: f64,
    gamma: f64,
    s: f64,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(f) = field_ref(field) else {
            return Bo2dStatus::NullArgument;
        };
        if !t.is_finite() {
            return Bo2dStatus::InvalidArgument;
        }
        let params = match params_for(p, alpha, gamma, s) {
            Ok(p) => p,
            Err(status) => return status,
        };
        deliver_field(out, propagate(f, t, &params))
    })
}

/// Evolve the full nonlinear equation from the field's state to
/// `field time + t_end` with fixed step `dt`, delivering the final state.
/// Returns `BO2D_STATUS_BLOW_UP` if the solution leaves the resolvable
/// range before then.
#[no_mangle]
pub unsafe extern "C" fn bo2d_evolve(
    field: *const Bo2dField,
    p: u32,
    alpha: f64,
    gamma: f64,
    s: f64,
    dt: f64,
    t_end: f64,
    out: *mut *mut Bo2dField,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        let Some(f) = field_ref(field) else {
            return Bo2dStatus::NullArgument;
        };
        let params = match params_for(p, alpha, gamma, s) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let schedule = match SolveSchedule::new(dt, t_end, ENDPOINTS_ONLY, 0.9) {
            Ok(s) => s,
            Err(_) => return Bo2dStatus::InvalidArgument,
        };
        match evolve(f, &params, &schedule) {
            Ok(traj) if traj.blown_up().is_some() => Bo2dStatus::BlowUp,
            Ok(traj) => deliver_field(out, traj.last().clone()),
            Err(_) => Bo2dStatus::Internal,
        }
    })
}

/// L^2 norm of the field, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_l2_norm(field: *const Bo2dField) -> f64 {
    guarded_f64(|| field_ref(field).map_or(f64::NAN, l2_norm))
}

/// Sobolev H^s norm of the field, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_hs_norm(field: *const Bo2dField, s: f64) -> f64 {
    guarded_f64(|| field_ref(field).map_or(f64::NAN, |f| hs_norm(f, s)))
}

/// Sup norm of the field's physical samples, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bo2d_linf_norm(field: *const Bo2dField) -> f64 {
    guarded_f64(|| field_ref(field).map_or(f64::NAN, linf_norm))
}

/// Point value of the free-propagator kernel at time `t` and offset
/// `(x, y)`. `t` must be finite and nonzero; the kernel degenerates to a
/// delta at `t = 0`.
#[no_mangle]
pub unsafe extern "C" fn bo2d_kernel_point(
    t: f64,
    x: f64,
    y: f64,
    out: *mut f64,
) -> Bo2dStatus {
    guarded(|| {
        if out.is_null() {
            return Bo2dStatus::NullArgument;
        }
        if !(t.is_finite() && t != 0.0 && x.is_finite() && y.is_finite()) {
            return Bo2dStatus::InvalidArgument;
        }
        *out = kernel_i(t, x, y);
        Bo2dStatus::Ok
    })
}

/// Tail `integral_a^infinity exp(i s^2 / 4) ds` of the quadratic-phase
/// profile function, split into real and imaginary parts.
#[no_mangle]
pub unsafe extern "C" fn bo2d_fresnel_tail(
    a: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> Bo2dStatus {
    guarded(|| {
        if out_re.is_null() || out_im.is_null() {
            return Bo2dStatus::NullArgument;
        }
        if !a.is_finite() {
            return Bo2dStatus::InvalidArgument;
        }
        let v = fresnel_tail(a);
        *out_re = v.re;
        *out_im = v.im;
        Bo2dStatus::Ok
    })
}

/// Time-decay integral of the nonlinearity for power `p`: the integral of
/// `(1 + r)^(-p)` over `[0, t]`. Bounded in `t` exactly when `p >= 3`.
/// Returns NaN for `t < 0` or `p < 1`.
#[no_mangle]
pub extern "C" fn bo2d_j_integral(t: f64, p: u32) -> f64 {
    guarded_f64(|| {
        if !(t.is_finite() && t >= 0.0 && p >= 1) {
            return f64::NAN;
        }
        j_integral(t, p)
    })
}
