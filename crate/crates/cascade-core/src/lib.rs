//! Spectral simulation toolkit for the periodically driven quantum harmonic
//! oscillator `i ∂t u = ½(−∂x² + x²)u + V(t, x, D)u` on the real line.
//!
//! The crate is organised around the objects one actually manipulates when
//! studying energy cascades of this equation at desk scale:
//!
//! * [`symbols`] — classical phase-space symbols as finite Fourier series in
//!   time and angle with canned radial profiles, plus the classical calculus:
//!   harmonic flow, resonant averaging, Poisson brackets with `h0`, the
//!   transporter condition and genericity constructions.
//! * [`quantization`] — Weyl and Anti-Wick quantization on the truncated
//!   Hermite basis, coherent states, and verification of the exact Egorov,
//!   composition and Gårding properties.
//! * [`normal_form`] — the homological equation and the first averaging step,
//!   at symbol and matrix level.
//! * [`spectral`] — essential-spectrum intervals, conjugate operators, Mourre
//!   positivity checks, spectral filtering and Weyl-sequence tests.
//! * [`propagator`] — unitary time stepping of the driven and effective
//!   equations, Sobolev-norm diagnostics, and power-law fits of growth/decay.
//!
//! Supporting numerics live in [`quadrature`] (Gaussian rules with stable
//! modified weights), [`basis`] (Hermite functions), [`operator`] (banded and
//! dense Hermitian matrices) and [`jet`] (truncated Taylor arithmetic used by
//! the symbol seminorms).

pub mod basis;
pub mod error;
pub mod jet;
pub mod normal_form;
pub mod operator;
pub mod propagator;
pub mod quadrature;
pub mod quantization;
pub mod spectral;
pub mod symbols;

pub use error::CoreError;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;

/// Complex scalar used everywhere (re-exported so downstream code does not
/// need to depend on `num-complex` directly).
pub type C64 = num_complex::Complex64;
