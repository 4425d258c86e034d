//! Operators on isotypic functions in the multiplicative picture.
//!
//! An [`IsotypicFunction`] is `f(g) = χ_N(g₀)·K(log|g|)`, stored as its
//! log-profile `K` together with the spectral profile `ψ`. Every operator acts
//! on `ψ` by a scalar multiplier (or on `K` by multiplication with `v`):
//!
//! | operator | action |
//! |---|---|
//! | inversion `I` | `ψ(τ) ↦ ψ(-τ)` |
//! | Gamma `Γ` | `ψ ↦ γ_N ψ` |
//! | Fourier `F = Γ∘I` | `ψ(τ) ↦ γ_N(τ) ψ(-τ)` |
//! | `A` | `K(v) ↦ v K(v)`, i.e. `ψ ↦ Dψ` with `D = (1/i) d/dτ` |
//! | `B` | `ψ ↦ h_N ψ - Dψ` |
//! | `H = A + B` | `ψ ↦ h_N ψ` |
//! | `K = i[B, A]` | `ψ ↦ k_N ψ` |
//!
//! [`AdditiveFunction`] is the same function seen through the basic isometry
//! `f(g) = √(2π²|g|)·φ(g)`.

use std::f64::consts::PI;

use crate::quat::Quaternion;
use crate::specfun::{gamma_line, h_n, k_n, log_gamma};
use crate::spectral::{LogProfile, SpectralGrid, SpectralProfile};
use crate::su2::AngularMode;
use crate::{Error, Result, C64, TWO_PI_SQ};

/// Relative boundary level accepted by [`IsotypicFunction::new`].
pub const DECAY_TOL: f64 = 1e-10;

/// `f(g) = χ_N(g₀)·K(log|g|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotypicFunction {
    mode: AngularMode,
    profile: LogProfile,
    spectrum: SpectralProfile,
}

impl IsotypicFunction {
    /// Builds a test function from its log-profile, which must decay to
    /// [`DECAY_TOL`] (relative to its peak) at both ends of the window.
    pub fn new(mode: AngularMode, profile: LogProfile) -> Result<Self> {
        profile.check_decay(DECAY_TOL)?;
        let spectrum = profile.to_spectral();
        Ok(Self {
            mode,
            profile,
            spectrum,
        })
    }

    /// Builds a function from its spectral profile without a decay check;
    /// used for operator outputs, whose tails are governed by the input.
    pub fn from_spectrum(mode: AngularMode, spectrum: SpectralProfile) -> Self {
        let profile = spectrum.from_spectral();
        Self {
            mode,
            profile,
            spectrum,
        }
    }

    fn from_profile_unchecked(mode: AngularMode, profile: LogProfile) -> Self {
        let spectrum = profile.to_spectral();
        Self {
            mode,
            profile,
            spectrum,
        }
    }

    /// `K(v) = e^{-(v-c)²/(2w²)}`, with the closed-form spectrum
    /// `ψ(τ) = w√(2π)·e^{iτc}·e^{-w²τ²/2}`.
    pub fn gaussian(mode: AngularMode, grid: SpectralGrid, center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidArgument(format!("Gaussian width must be positive, got {width}")));
        }
        let profile = LogProfile::from_fn(grid, |v| C64::new((-(v - center).powi(2) / (2.0 * width * width)).exp(), 0.0));
        profile.check_decay(DECAY_TOL)?;
        let spectrum = SpectralProfile::from_fn(grid, |t| {
            C64::from_polar(width * (2.0 * PI).sqrt() * (-(width * t).powi(2) / 2.0).exp(), t * center)
        });
        Ok(Self {
            mode,
            profile,
            spectrum,
        })
    }

    /// The standard test function: `N = 0`, `K(v) = e^{-v²/2}`, standard grid.
    pub fn standard() -> Self {
        Self::gaussian(AngularMode(0), SpectralGrid::standard(), 0.0, 1.0).expect("standard profile")
    }

    /// Multiplicative image of `φ(x) = χ_N(x̂)·n(x)^{N/2}·(1 + b·n(x))·e^{-2πa·n(x)}`.
    ///
    /// `r^N χ_N(x̂)` is a harmonic polynomial of degree `N`, so `φ` is a
    /// Schwartz function on `ℍ`. The log-profile is
    /// `K(v) = √(2π²)·e^{(N+2)v/4}·(1 + b e^{v/2})·e^{-2πa e^{v/2}}`, and its
    /// spectrum follows from `∫e^{αv}e^{-βe^{v/2}}e^{iτv}dv = 2β^{-2(α+iτ)}Γ(2(α+iτ))`.
    pub fn harmonic_gaussian(mode: AngularMode, grid: SpectralGrid, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidArgument(format!("Gaussian rate must be positive, got {a}")));
        }
        let alpha = (mode.n() as f64 + 2.0) / 4.0;
        let beta = 2.0 * PI * a;
        let root = TWO_PI_SQ.sqrt();
        let profile = LogProfile::from_fn(grid, |v| {
            let u = (0.5 * v).exp();
            C64::new(root * (alpha * v).exp() * (1.0 + b * u) * (-beta * u).exp(), 0.0)
        });
        profile.check_decay(DECAY_TOL)?;
        let mellin = |exponent: f64, t: f64| -> C64 {
            let z = C64::new(2.0 * exponent, 2.0 * t);
            let lg = log_gamma(z).expect("positive real part");
            2.0 * (lg - z * beta.ln()).exp()
        };
        let spectrum = SpectralProfile::from_fn(grid, |t| root * (mellin(alpha, t) + b * mellin(alpha + 0.5, t)));
        Ok(Self {
            mode,
            profile,
            spectrum,
        })
    }

    /// The self-dual Gaussian `ω(x) = e^{-2π n(x)}`: `N = 0`, `a = 1`, `b = 0`.
    pub fn omega(grid: SpectralGrid) -> Self {
        Self::harmonic_gaussian(AngularMode(0), grid, 1.0, 0.0).expect("ω decays on any admissible grid")
    }

    pub fn zero(mode: AngularMode, grid: SpectralGrid) -> Self {
        Self {
            mode,
            profile: LogProfile::zeros(grid),
            spectrum: SpectralProfile::zeros(grid),
        }
    }

    pub fn mode(&self) -> AngularMode {
        self.mode
    }

    pub fn profile(&self) -> &LogProfile {
        &self.profile
    }

    pub fn spectrum(&self) -> &SpectralProfile {
        &self.spectrum
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.profile.grid()
    }

    /// `f(1) = χ_N(1)·K(0) = (N+1)·K(0)`.
    pub fn value_at_one(&self) -> C64 {
        self.profile.value_at_zero() * self.mode.dimension() as f64
    }

    /// `f(1)` computed from the spectrum, `(N+1)·(1/2π)∫ψ dτ`.
    pub fn value_at_one_spectral(&self) -> C64 {
        self.spectrum.evaluate_at_one() * self.mode.dimension() as f64
    }

    /// `f(g)` at a nonzero quaternion.
    pub fn evaluate(&self, g: Quaternion) -> Result<C64> {
        let chi = self.mode.character_at(g)?;
        Ok(self.profile.interpolate(g.module().ln()) * chi)
    }

    /// `(∫|K|² dv)^{1/2}`, the norm of `f` in `L²(ℍ^×, d*g)` with `d*g₀` normalized.
    pub fn norm(&self) -> f64 {
        self.profile.norm_sq().sqrt()
    }

    /// Largest difference of spectral samples.
    pub fn spectral_distance(&self, other: &Self) -> f64 {
        self.spectrum.max_abs_diff(&other.spectrum)
    }

    /// `a·self + b·other`, both in the same sector and on the same grid.
    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.mode != other.mode {
            return Err(Error::InvalidArgument(format!(
                "cannot combine sectors N = {} and N = {}",
                self.mode.n(),
                other.mode.n()
            )));
        }
        Ok(Self {
            mode: self.mode,
            profile: self.profile.lin_comb(a, &other.profile, b)?,
            spectrum: self.spectrum.lin_comb(a, &other.spectrum, b)?,
        })
    }

    fn with_multiplier<M: Fn(f64) -> C64 + Sync>(&self, m: M) -> Self {
        Self::from_spectrum(self.mode, self.spectrum.apply_multiplier(m))
    }

    /// `I`: `f(g) ↦ f(g⁻¹)`, i.e. `K(v) ↦ K(-v)`.
    pub fn inversion(&self) -> Self {
        Self {
            mode: self.mode,
            profile: self.profile.reflect(),
            spectrum: self.spectrum.reflect(),
        }
    }

    /// `Γ`: multiplication of the spectrum by `γ_N`.
    pub fn gamma_transform(&self) -> Self {
        let mode = self.mode;
        self.with_multiplier(|t| gamma_line(mode, t))
    }

    /// `Γ⁻¹`: multiplication by `conj(γ_N) = 1/γ_N`.
    pub fn gamma_inverse(&self) -> Self {
        let mode = self.mode;
        self.with_multiplier(|t| gamma_line(mode, t).conj())
    }

    /// The additive Fourier transform `F = Γ∘I`.
    pub fn fourier_transform(&self) -> Self {
        self.inversion().gamma_transform()
    }

    /// `A`: multiplication by `v = log|g|`.
    pub fn op_a(&self) -> Self {
        Self::from_profile_unchecked(self.mode, self.profile.multiply_by_v())
    }

    /// `B`: `ψ ↦ h_N ψ - Dψ`, with `Dψ` formed as the transform of `v·K`.
    pub fn op_b(&self) -> Self {
        let mode = self.mode;
        let h_psi = self.spectrum.apply_multiplier(|t| C64::new(h_n(mode, t), 0.0));
        let d_psi = self.profile.multiply_by_v().to_spectral();
        let spectrum = h_psi
            .lin_comb(C64::new(1.0, 0.0), &d_psi, C64::new(-1.0, 0.0))
            .expect("same grid");
        Self::from_spectrum(mode, spectrum)
    }

    /// `H = log|x| + log|y|`: multiplication of the spectrum by `h_N`.
    pub fn op_h(&self) -> Self {
        let mode = self.mode;
        self.with_multiplier(|t| C64::new(h_n(mode, t), 0.0))
    }

    /// `K = i[B, A]`: multiplication of the spectrum by `k_N`.
    pub fn op_k(&self) -> Self {
        let mode = self.mode;
        self.with_multiplier(|t| C64::new(k_n(mode, t), 0.0))
    }

    /// The additive-picture function `φ = f/√(2π²|x|)`.
    pub fn to_additive(&self) -> AdditiveFunction {
        AdditiveFunction { f: self.clone() }
    }
}

/// `φ(x) = f(x)/√(2π²|x|)` for an isotypic `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveFunction {
    f: IsotypicFunction,
}

impl AdditiveFunction {
    pub fn multiplicative(&self) -> &IsotypicFunction {
        &self.f
    }

    pub fn mode(&self) -> AngularMode {
        self.f.mode
    }

    /// `φ(x)`; the origin is excluded.
    pub fn eval(&self, x: Quaternion) -> Result<C64> {
        let module = x.module();
        if module == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.f.evaluate(x)? / (TWO_PI_SQ * module).sqrt())
    }

    /// `φ` at `x` with `n(x) = ρ²` and `cos θ = x₀/ρ`, for callers that already
    /// hold polar data.
    pub fn eval_polar(&self, rho: f64, cos_theta: f64) -> C64 {
        let module = rho.powi(4);
        let k = self.f.profile.interpolate(module.ln());
        if k == C64::new(0.0, 0.0) {
            // Outside the log window (including the origin) the profile is zero.
            return k;
        }
        k * (self.f.mode.character_cos(cos_theta) / (TWO_PI_SQ * module).sqrt())
    }
}
