//! Numerical harmonic analysis on the quaternions.
//!
//! The crate evaluates the quaternionic Tate Gamma functions `Γ_N(s)`, their
//! logarithmic derivatives `h_N` and `k_N`, realizes the conductor operator
//! `H = log|x| + log|y|` as a spectral multiplier on isotypic test functions,
//! and computes the truncated trace `Tr(P̃_Λ P_Λ U_f)` by two
//! independent routes. A brute-force 4D Fourier transform serves as an
//! oracle for the multiplicative picture.
//!
//! Module map:
//!
//! | module | contents |
//! |---|---|
//! | [`quat`] | quaternion arithmetic, norms, polar form, additive character |
//! | [`su2`] | SU(2) characters, class-angle quadrature, angular Bessel integral |
//! | [`specfun`] | complex log-gamma, digamma, trigamma, `Γ_N`, `H_N`, `h_N`, `k_N` |
//! | [`spectral`] | log-Fourier (Mellin) transforms between `K(v)` and `ψ(τ)` |
//! | [`gamma_op`] | inversion, Gamma operator, Fourier transform, `A`, `B`, `H`, `K` |
//! | [`oracle`] | additive-picture oracles: 4D grid transform, distributions `G`, `Δ_s` |
//! | [`trace`] | truncated trace, residual sweeps and fits |

pub mod error;
pub mod gamma_op;
pub mod oracle;
pub mod quadrature;
pub mod quat;
pub mod specfun;
pub mod spectral;
pub mod su2;
pub mod trace;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// `2π²`, the volume of the unit 3-sphere and the constant of the basic isometry.
pub const TWO_PI_SQ: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
