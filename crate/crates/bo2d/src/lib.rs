//! Pseudospectral laboratory for the two-dimensional generalized
//! Benjamin-Ono equation
//!
//! ```text
//! (u_t + u^p u_x + H dx^2 u + alpha H dy^2 u)_x - gamma u_yy = 0
//! ```
//!
//! on a periodic rectangle, where `H` is the Hilbert transform in `x`.
//! The crate provides the spectral substrate (transforms, Fourier
//! multipliers, dealiased products), the linear group realized both as a
//! multiplier and as an explicit oscillatory kernel built from Fresnel
//! integrals, an integrating-factor RK4 nonlinear solver with a Duhamel
//! residual check, norm/decay/Gronwall diagnostics, an empirical harness
//! for commutator and product inequalities, scattering-state extraction,
//! and a CLI with bit-specified snapshot and CSV formats.

pub mod config;
pub mod dealias;
pub mod diagnostics;
pub mod dispersion;
pub mod evolution;
pub mod field;
pub mod fresnel;
pub mod grid;
pub mod harness;
pub mod kernel;
pub mod line;
pub mod multiplier;
pub mod propagator;
pub mod report;
pub mod run;
pub mod scattering;
pub mod snapshot;
pub mod transform;

pub use field::SpectralField;
pub use grid::Grid2;
