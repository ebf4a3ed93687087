/* C interface to the bo2d simulation laboratory. */

#ifndef BO2D_H
#define BO2D_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a fallible call.
typedef enum Bo2dStatus {
  // The call succeeded and any out-pointer now holds a result.
  BO2D_STATUS_OK = 0,
  // A required pointer argument was null.
  BO2D_STATUS_NULL_ARGUMENT = 1,
  // A scalar argument was out of range or inconsistent with a handle.
  BO2D_STATUS_INVALID_ARGUMENT = 2,
  // The solver detected a blow-up before reaching the requested time.
  BO2D_STATUS_BLOW_UP = 3,
  // An unexpected internal failure; out-pointers are untouched.
  BO2D_STATUS_INTERNAL = 4,
} Bo2dStatus;

// Real scalar field on a lattice, tagged with its simulation time.
typedef struct Bo2dField Bo2dField;

// Uniform periodic lattice on a centered rectangle.
typedef struct Bo2dGrid Bo2dGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static null-terminated string.
const char *bo2d_version(void);

// Create an `nx` by `ny` lattice covering `[-lx, lx) x [-ly, ly)`.
// Sizes must be even and at least 8; half-widths must be positive.
enum Bo2dStatus bo2d_grid_new(uintptr_t nx,
                              uintptr_t ny,
                              double lx,
                              double ly,
                              struct Bo2dGrid **out);

// Release a grid handle. Null is a harmless no-op.
void bo2d_grid_free(struct Bo2dGrid *grid);

// Number of points along x, or 0 for a null handle.
uintptr_t bo2d_grid_nx(const struct Bo2dGrid *grid);

// Number of points along y, or 0 for a null handle.
uintptr_t bo2d_grid_ny(const struct Bo2dGrid *grid);

// Centered Gaussian bump `amplitude * exp(-(x^2+y^2)/(2 width^2))`.
enum Bo2dStatus bo2d_field_gaussian(const struct Bo2dGrid *grid,
                                    double amplitude,
                                    double width,
                                    struct Bo2dField **out);

// x-derivative of the centered Gaussian bump: mean-free data whose
// x-antiderivative is square integrable.
enum Bo2dStatus bo2d_field_dx_gaussian(const struct Bo2dGrid *grid,
                                       double amplitude,
                                       double width,
                                       struct Bo2dField **out);

// Seeded random field with Sobolev-type spectral decay; the same seed on
// the same grid reproduces the same field. `decay_rate` must exceed 1.
enum Bo2dStatus bo2d_field_random_smooth(const struct Bo2dGrid *grid,
                                         uint64_t seed,
                                         double decay_rate,
                                         struct Bo2dField **out);

// Build a field from `len` row-major samples (`len` must equal nx * ny;
// index `ix * ny + iy`, both axes ascending from the box corner).
enum Bo2dStatus bo2d_field_from_samples(const struct Bo2dGrid *grid,
                                        const double *samples,
                                        uintptr_t len,
                                        struct Bo2dField **out);

// Duplicate a field handle.
enum Bo2dStatus bo2d_field_clone(const struct Bo2dField *field, struct Bo2dField **out);

// Release a field handle. Null is a harmless no-op.
void bo2d_field_free(struct Bo2dField *field);

// Number of samples the field carries (nx * ny), or 0 for a null handle.
uintptr_t bo2d_field_len(const struct Bo2dField *field);

// Copy the field's physical samples into `out_samples` in the row-major
// order of `bo2d_field_from_samples`. `len` must equal nx * ny.
enum Bo2dStatus bo2d_field_samples(const struct Bo2dField *field,
                                   double *out_samples,
                                   uintptr_t len);

// Simulation time the field is tagged with, or NaN for a null handle.
double bo2d_field_time(const struct Bo2dField *field);

// Apply the free linear flow for time `t` (negative `t` runs backwards).
// Equation parameters: nonlinearity power `p >= 1`, transverse dispersion
// weight `alpha`, mixed-derivative weight `gamma`, Sobolev index `s`.
enum Bo2dStatus bo2d_propagate(const struct Bo2dField *field,
                               double t,
                               uint32_t p,
                               double alpha,
                               double gamma,
                               double s,
                               struct Bo2dField **out);

// Evolve the full nonlinear equation from the field's state to
// `field time + t_end` with fixed step `dt`, delivering the final state.
// Returns `BO2D_STATUS_BLOW_UP` if the solution leaves the resolvable
// range before then.
enum Bo2dStatus bo2d_evolve(const struct Bo2dField *field,
                            uint32_t p,
                            double alpha,
                            double gamma,
                            double s,
                            double dt,
                            double t_end,
                            struct Bo2dField **out);

// L^2 norm of the field, or NaN for a null handle.
double bo2d_l2_norm(const struct Bo2dField *field);

// Sobolev H^s norm of the field, or NaN for a null handle.
double bo2d_hs_norm(const struct Bo2dField *field, double s);

// Sup norm of the field's physical samples, or NaN for a null handle.
double bo2d_linf_norm(const struct Bo2dField *field);

// Point value of the free-propagator kernel at time `t` and offset
// `(x, y)`. `t` must be finite and nonzero; the kernel degenerates to a
// delta at `t = 0`.
enum Bo2dStatus bo2d_kernel_point(double t, double x, double y, double *out);

// Tail `integral_a^infinity exp(i s^2 / 4) ds` of the quadratic-phase
// profile function, split into real and imaginary parts.
enum Bo2dStatus bo2d_fresnel_tail(double a, double *out_re, double *out_im);

// Time-decay integral of the nonlinearity for power `p`: the integral of
// `(1 + r)^(-p)` over `[0, t]`. Bounded in `t` exactly when `p >= 3`.
// Returns NaN for `t < 0` or `p < 1`.
double bo2d_j_integral(double t, uint32_t p);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BO2D_H */
