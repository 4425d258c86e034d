//! The log-Fourier layer between radial log-profiles and spectral profiles.
//!
//! An isotypic function `f(g) = χ_N(g₀)·K(log|g|)` is described either by its
//! log-profile `K(v)` or by the spectral profile
//!
//! ```text
//! ψ(τ) = ∫ K(v) e^{iτv} dv,        K(v) = (1/2π) ∫ ψ(τ) e^{-iτv} dτ.
//! ```
//!
//! Both live on symmetric uniform grids. The transforms are trapezoid sums,
//! computed with a chirp-z (Bluestein) factorization on top of an FFT; a
//! direct-summation reference is kept for testing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::quadrature::trapezoid_weight;
use crate::{Error, Result, C64};

/// Default bound on the reciprocity products `Δτ·V` and `Δv·T`.
///
/// The discrete transform of `K` is `2π/Δv`-periodic in `τ` and the inverse
/// is `2π/Δτ`-periodic in `v`; a product of at most `π/4` keeps every period
/// at least four times the window it has to cover.
pub const ALIASING_BOUND: f64 = PI / 4.0;

/// The points `m·spacing` for `|m| ≤ half_count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    spacing: f64,
    half_count: usize,
}

impl UniformGrid {
    /// Grid covering `[-half_width, half_width]`; the half-width must be an
    /// integer multiple of the spacing.
    pub fn symmetric(half_width: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite() && half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "half-width {half_width} and spacing {spacing} must be positive and finite"
            )));
        }
        let ratio = half_width / spacing;
        let half_count = ratio.round();
        if (ratio - half_count).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width {half_width} is not a multiple of the spacing {spacing}"
            )));
        }
        Ok(Self {
            spacing,
            half_count: half_count as usize,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn half_width(&self) -> f64 {
        self.half_count as f64 * self.spacing
    }

    pub fn len(&self) -> usize {
        2 * self.half_count + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the node `0`.
    pub fn center(&self) -> usize {
        self.half_count
    }

    pub fn point(&self, index: usize) -> f64 {
        (index as i64 - self.half_count as i64) as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn weight(&self, index: usize) -> f64 {
        trapezoid_weight(index, self.len(), self.spacing)
    }

    /// Same window, half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            spacing: 0.5 * self.spacing,
            half_count: 2 * self.half_count,
        }
    }
}

/// A matched pair of `v`- and `τ`-grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    pub v: UniformGrid,
    pub tau: UniformGrid,
}

impl SpectralGrid {
    /// Checks both reciprocity products against [`ALIASING_BOUND`].
    pub fn new(v: UniformGrid, tau: UniformGrid) -> Result<Self> {
        Self::with_bound(v, tau, ALIASING_BOUND)
    }

    pub fn with_bound(v: UniformGrid, tau: UniformGrid, bound: f64) -> Result<Self> {
        let grid = Self { v, tau };
        let (forward, backward) = grid.reciprocity();
        if forward > bound {
            return Err(Error::Aliasing {
                product: forward,
                bound,
                detail: "Δτ·V: the inverse transform would wrap the v-window",
            });
        }
        if backward > bound {
            return Err(Error::Aliasing {
                product: backward,
                bound,
                detail: "Δv·T: the forward transform would wrap the τ-window",
            });
        }
        Ok(grid)
    }

    /// `v ∈ [-60, 60]` with `Δv = 1/64` and `τ ∈ [-48, 48]` with `Δτ = 1/80`.
    ///
    /// The wide `v`-window accommodates the `e^{v/2}` tails that every
    /// Fourier image carries as `v → -∞`.
    pub fn standard() -> Self {
        let v = UniformGrid::symmetric(60.0, 1.0 / 64.0).expect("static grid");
        let tau = UniformGrid::symmetric(48.0, 1.0 / 80.0).expect("static grid");
        Self::new(v, tau).expect("static grid satisfies the reciprocity bound")
    }

    /// `(Δτ·V, Δv·T)`.
    pub fn reciprocity(&self) -> (f64, f64) {
        (
            self.tau.spacing() * self.v.half_width(),
            self.v.spacing() * self.tau.half_width(),
        )
    }

    /// Both spacings halved over the same windows.
    pub fn refined(&self) -> Self {
        Self {
            v: self.v.refined(),
            tau: self.tau.refined(),
        }
    }
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self::standard()
    }
}

/// How a transform is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformMethod {
    /// Chirp-z factorization over an FFT.
    #[default]
    Fast,
    /// Direct `O(n²)` summation.
    Direct,
}

/// Samples of a log-profile `K(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProfile {
    grid: SpectralGrid,
    values: Vec<C64>,
}

/// Samples of a spectral profile `ψ(τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    grid: SpectralGrid,
    values: Vec<C64>,
}

/// Number of nodes of the local interpolant used by [`LogProfile::interpolate`].
pub const INTERPOLATION_NODES: usize = 12;

macro_rules! shared_profile_methods {
    ($ty:ident, $axis:ident) => {
        impl $ty {
            pub fn from_fn<F: Fn(f64) -> C64 + Sync>(grid: SpectralGrid, f: F) -> Self {
                let axis = grid.$axis;
                let values = (0..axis.len()).into_par_iter().map(|i| f(axis.point(i))).collect();
                Self { grid, values }
            }

            pub fn from_values(grid: SpectralGrid, values: Vec<C64>) -> Result<Self> {
                if values.len() != grid.$axis.len() {
                    return Err(Error::InvalidGrid(format!(
                        "{} samples for a grid of {} points",
                        values.len(),
                        grid.$axis.len()
                    )));
                }
                Ok(Self { grid, values })
            }

            pub fn zeros(grid: SpectralGrid) -> Self {
                Self {
                    grid,
                    values: vec![C64::new(0.0, 0.0); grid.$axis.len()],
                }
            }

            pub fn grid(&self) -> &SpectralGrid {
                &self.grid
            }

            pub fn axis(&self) -> &UniformGrid {
                &self.grid.$axis
            }

            pub fn values(&self) -> &[C64] {
                &self.values
            }

            pub fn into_values(self) -> Vec<C64> {
                self.values
            }

            /// Sample at the node `0`.
            pub fn center_value(&self) -> C64 {
                self.values[self.grid.$axis.center()]
            }

            /// Reflection of the argument, `x ↦ -x`.
            pub fn reflect(&self) -> Self {
                let mut values = self.values.clone();
                values.reverse();
                Self {
                    grid: self.grid,
                    values,
                }
            }

            /// Pointwise `a·self + b·other` on a common grid.
            pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
                if self.grid != other.grid {
                    return Err(Error::InvalidGrid("profiles live on different grids".into()));
                }
                let values = self
                    .values
                    .iter()
                    .zip(&other.values)
                    .map(|(x, y)| a * x + b * y)
                    .collect();
                Ok(Self {
                    grid: self.grid,
                    values,
                })
            }

            pub fn scale(&self, a: C64) -> Self {
                Self {
                    grid: self.grid,
                    values: self.values.iter().map(|x| a * x).collect(),
                }
            }

            /// Pointwise multiplication by `m` evaluated at the grid points.
            pub fn map_with_point<F: Fn(f64, C64) -> C64 + Sync>(&self, m: F) -> Self {
                let axis = self.grid.$axis;
                let values = self
                    .values
                    .par_iter()
                    .enumerate()
                    .map(|(i, &x)| m(axis.point(i), x))
                    .collect();
                Self {
                    grid: self.grid,
                    values,
                }
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|x| x.norm()).fold(0.0, f64::max)
            }

            /// Largest modulus among the four outermost samples at either end,
            /// relative to the largest modulus overall (0 for the zero profile).
            pub fn boundary_ratio(&self) -> f64 {
                let peak = self.max_abs();
                if peak == 0.0 {
                    return 0.0;
                }
                let n = self.values.len();
                let edge = 4.min(n);
                let boundary = self.values[..edge]
                    .iter()
                    .chain(&self.values[n - edge..])
                    .map(|x| x.norm())
                    .fold(0.0, f64::max);
                boundary / peak
            }

            /// [`Error::NoDecay`] if [`Self::boundary_ratio`] exceeds `tol`.
            pub fn check_decay(&self, tol: f64) -> Result<()> {
                let ratio = self.boundary_ratio();
                if ratio > tol {
                    Err(Error::NoDecay { boundary: ratio })
                } else {
                    Ok(())
                }
            }

            /// Largest pointwise difference from another profile on the same grid.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.values
                    .iter()
                    .zip(&other.values)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max)
            }
        }
    };
}

shared_profile_methods!(LogProfile, v);
shared_profile_methods!(SpectralProfile, tau);

impl LogProfile {
    /// `K(0)`.
    pub fn value_at_zero(&self) -> C64 {
        self.center_value()
    }

    /// `ψ(τ) = ∫K(v)e^{iτv}dv` on the `τ`-grid.
    pub fn to_spectral(&self) -> SpectralProfile {
        self.to_spectral_with(TransformMethod::Fast)
    }

    pub fn to_spectral_with(&self, method: TransformMethod) -> SpectralProfile {
        let weighted = weighted(&self.values, &self.grid.v);
        let values = transform(&weighted, &self.grid.v, &self.grid.tau, 1.0, method);
        SpectralProfile {
            grid: self.grid,
            values,
        }
    }

    /// `ψ(τ)` at an arbitrary `τ`, by direct summation.
    pub fn spectrum_at(&self, tau: f64) -> C64 {
        let axis = self.grid.v;
        self.values
            .iter()
            .enumerate()
            .map(|(i, &k)| k * C64::from_polar(axis.weight(i), tau * axis.point(i)))
            .sum()
    }

    /// `v·K(v)`, the operator `A` in the log picture.
    pub fn multiply_by_v(&self) -> Self {
        self.map_with_point(|v, k| v * k)
    }

    /// `∫|K|² dv`.
    pub fn norm_sq(&self) -> f64 {
        let axis = self.grid.v;
        self.values
            .iter()
            .enumerate()
            .map(|(i, k)| k.norm_sqr() * axis.weight(i))
            .sum()
    }

    /// `K(v)` between grid points: local Lagrange interpolation through the
    /// [`INTERPOLATION_NODES`] nearest samples; zero outside the window.
    pub fn interpolate(&self, v: f64) -> C64 {
        let axis = self.grid.v;
        let h = axis.spacing();
        let x = v / h + axis.center() as f64;
        let n = self.values.len();
        if !(x > -0.5 && x < n as f64 - 0.5) {
            return C64::new(0.0, 0.0);
        }
        let nearest = x.round();
        if (x - nearest).abs() < 1e-12 {
            return self.values[nearest as usize];
        }
        let p = INTERPOLATION_NODES;
        let start = ((x.floor() as i64) - (p as i64 / 2 - 1)).clamp(0, (n - p) as i64) as usize;
        // Barycentric weights for equispaced nodes: (-1)^j C(p-1, j).
        let mut binom = 1.0;
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..p {
            let w = if j % 2 == 0 { binom } else { -binom };
            let t = w / (x - (start + j) as f64);
            num += self.values[start + j] * t;
            den += t;
            binom = binom * (p - 1 - j) as f64 / (j + 1) as f64;
        }
        num / den
    }
}

impl SpectralProfile {
    /// `K(v) = (1/2π)∫ψ(τ)e^{-iτv}dτ` on the `v`-grid.
    pub fn from_spectral(&self) -> LogProfile {
        self.from_spectral_with(TransformMethod::Fast)
    }

    pub fn from_spectral_with(&self, method: TransformMethod) -> LogProfile {
        let mut weighted = weighted(&self.values, &self.grid.tau);
        let norm = 1.0 / (2.0 * PI);
        weighted.iter_mut().for_each(|x| *x *= norm);
        let values = transform(&weighted, &self.grid.tau, &self.grid.v, -1.0, method);
        LogProfile {
            grid: self.grid,
            values,
        }
    }

    /// Pointwise product with a multiplier `m(τ)`.
    pub fn apply_multiplier<M: Fn(f64) -> C64 + Sync>(&self, m: M) -> Self {
        self.map_with_point(|t, psi| m(t) * psi)
    }

    /// `(1/2π)∫ψ(τ)dτ`, the value `K(0)` of the underlying log-profile.
    pub fn evaluate_at_one(&self) -> C64 {
        let axis = self.grid.tau;
        let sum: C64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &p)| p * axis.weight(i))
            .sum();
        sum / (2.0 * PI)
    }

    /// `K(v)` at an arbitrary `v`, by direct summation.
    pub fn profile_at(&self, v: f64) -> C64 {
        let axis = self.grid.tau;
        let sum: C64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &p)| p * C64::from_polar(axis.weight(i), -axis.point(i) * v))
            .sum();
        sum / (2.0 * PI)
    }

    /// `(1/2π)∫|ψ|² dτ`, equal to `∫|K|² dv` by Parseval.
    pub fn norm_sq(&self) -> f64 {
        let axis = self.grid.tau;
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, p)| p.norm_sqr() * axis.weight(i))
            .sum();
        sum / (2.0 * PI)
    }
}

fn weighted(values: &[C64], axis: &UniformGrid) -> Vec<C64> {
    values
        .iter()
        .enumerate()
        .map(|(i, &x)| x * axis.weight(i))
        .collect()
}

/// `y_k = Σ_m x_m e^{iσ·t_k·s_m}` for grids `s` (input) and `t` (output).
fn transform(x: &[C64], input: &UniformGrid, output: &UniformGrid, sign: f64, method: TransformMethod) -> Vec<C64> {
    match method {
        TransformMethod::Direct => (0..output.len())
            .into_par_iter()
            .map(|k| {
                let t = output.point(k);
                x.iter()
                    .enumerate()
                    .map(|(m, &xm)| xm * C64::from_polar(1.0, sign * t * input.point(m)))
                    .sum()
            })
            .collect(),
        TransformMethod::Fast => ChirpPlan::cached(input, output, sign).apply(x),
    }
}

/// Bluestein factorization `e^{iαkm} = e^{iαk²/2} e^{iαm²/2} e^{-iα(k-m)²/2}`
/// with `α = σ·Δs·Δt`, turning the transform into one linear convolution.
struct ChirpPlan {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    pre: Vec<C64>,
    post: Vec<C64>,
    kernel: Vec<C64>,
}

type PlanKey = (usize, usize, u64, i8);

impl ChirpPlan {
    fn cached(input: &UniformGrid, output: &UniformGrid, sign: f64) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<ChirpPlan>>>> = OnceLock::new();
        let alpha = input.spacing() * output.spacing();
        let key = (input.half_count(), output.half_count(), alpha.to_bits(), sign.signum() as i8);
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(plan) = cache.lock().expect("plan cache poisoned").get(&key) {
            return plan.clone();
        }
        let plan = Arc::new(Self::new(input.half_count(), output.half_count(), sign * alpha));
        cache
            .lock()
            .expect("plan cache poisoned")
            .entry(key)
            .or_insert(plan)
            .clone()
    }

    fn new(half_in: usize, half_out: usize, alpha: f64) -> Self {
        let n_in = 2 * half_in + 1;
        let n_out = 2 * half_out + 1;
        let size = (n_in + n_out - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        // e^{iα j²/2} = e^{2πi·β j²} with β = α/(4π); the fractional part of
        // β j² is formed with an exact product so that large j keep full
        // phase accuracy.
        let beta = alpha / (4.0 * PI);
        let chirp = |j: i64| -> C64 {
            let jj = (j * j) as f64;
            let hi = beta * jj;
            let lo = beta.mul_add(jj, -hi);
            let frac = (hi - hi.round()) + lo;
            C64::from_polar(1.0, 2.0 * PI * frac)
        };
        let pre: Vec<C64> = (0..n_in).map(|m| chirp(m as i64 - half_in as i64)).collect();
        let post: Vec<C64> = (0..n_out)
            .map(|k| chirp(k as i64 - half_out as i64) / size as f64)
            .collect();
        // Convolution index d = k - m covers [-(n_in - 1), n_out - 1]; the
        // chirp argument is k' - m' = d + half_in - half_out.
        let mut kernel = vec![C64::new(0.0, 0.0); size];
        let offset = half_in as i64 - half_out as i64;
        for d in -(n_in as i64 - 1)..=(n_out as i64 - 1) {
            kernel[d.rem_euclid(size as i64) as usize] = chirp(d + offset).conj();
        }
        forward.process(&mut kernel);
        Self {
            size,
            forward,
            inverse,
            pre,
            post,
            kernel,
        }
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); self.size];
        for ((b, &xm), &p) in buf.iter_mut().zip(x).zip(&self.pre) {
            *b = xm * p;
        }
        self.forward.process(&mut buf);
        for (b, &k) in buf.iter_mut().zip(&self.kernel) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        buf.iter().zip(&self.post).map(|(&b, &p)| b * p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_grid() -> SpectralGrid {
        SpectralGrid::new(
            UniformGrid::symmetric(16.0, 1.0 / 32.0).unwrap(),
            UniformGrid::symmetric(24.0, 1.0 / 40.0).unwrap(),
        )
        .unwrap()
    }

    fn gaussian(grid: SpectralGrid, center: f64, width: f64) -> LogProfile {
        LogProfile::from_fn(grid, |v| C64::new((-(v - center).powi(2) / (2.0 * width * width)).exp(), 0.0))
    }

    /// Closed-form `ψ` of the Gaussian above.
    fn gaussian_spectrum(center: f64, width: f64, tau: f64) -> C64 {
        C64::from_polar(
            width * (2.0 * PI).sqrt() * (-(width * tau).powi(2) / 2.0).exp(),
            tau * center,
        )
    }

    #[test]
    fn grid_construction() {
        let g = UniformGrid::symmetric(2.0, 0.25).unwrap();
        assert_eq!(g.len(), 17);
        assert_eq!(g.point(0), -2.0);
        assert_eq!(g.point(8), 0.0);
        assert_eq!(g.point(16), 2.0);
        assert!(UniformGrid::symmetric(2.0, 0.3).is_err());
        assert!(UniformGrid::symmetric(-1.0, 0.25).is_err());
        let s = SpectralGrid::standard();
        assert_eq!(s.v.len(), 7681);
        assert_eq!(s.tau.len(), 7681);
        let (a, b) = s.reciprocity();
        assert!(a <= ALIASING_BOUND && b <= ALIASING_BOUND);
    }

    #[test]
    fn aliasing_is_signalled() {
        let v = UniformGrid::symmetric(16.0, 1.0 / 8.0).unwrap();
        let tau = UniformGrid::symmetric(16.0, 1.0 / 8.0).unwrap();
        let err = SpectralGrid::new(v, tau).unwrap_err();
        assert!(matches!(err, Error::Aliasing { .. }));
        assert!(SpectralGrid::with_bound(v, tau, 2.0 * PI).is_ok());
    }

    #[test]
    fn gaussian_pair() {
        let grid = small_grid();
        let psi = gaussian(grid, 0.0, 1.0).to_spectral();
        for (i, t) in grid.tau.points().into_iter().enumerate() {
            assert!((psi.values()[i] - gaussian_spectrum(0.0, 1.0, t)).norm() < 1e-12);
        }
        let back = SpectralProfile::from_fn(grid, |t| gaussian_spectrum(0.0, 1.0, t)).from_spectral();
        assert!(back.max_abs_diff(&gaussian(grid, 0.0, 1.0)) < 1e-12);
        assert!((psi.evaluate_at_one() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_profiles() {
        let grid = small_grid();
        assert_eq!(LogProfile::zeros(grid).to_spectral().max_abs(), 0.0);
        assert_eq!(SpectralProfile::zeros(grid).from_spectral().max_abs(), 0.0);
        assert_eq!(SpectralProfile::zeros(grid).evaluate_at_one(), C64::new(0.0, 0.0));
        assert_eq!(LogProfile::zeros(grid).boundary_ratio(), 0.0);
    }

    #[test]
    fn shift_theorem() {
        let grid = small_grid();
        let base = gaussian(grid, 0.0, 0.8).to_spectral();
        let shifted = gaussian(grid, 1.0, 0.8).to_spectral();
        let expected = base.apply_multiplier(|t| C64::from_polar(1.0, t));
        assert!(shifted.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn fast_matches_direct() {
        let grid = small_grid();
        let k = LogProfile::from_fn(grid, |v| C64::new((-(v - 0.3f64).powi(2)).exp(), 0.2 * (-(v * v) / 3.0).exp()));
        let fast = k.to_spectral();
        let direct = k.to_spectral_with(TransformMethod::Direct);
        assert!(fast.max_abs_diff(&direct) < 1e-12, "{}", fast.max_abs_diff(&direct));
        let fast_back = fast.from_spectral();
        let direct_back = fast.from_spectral_with(TransformMethod::Direct);
        assert!(fast_back.max_abs_diff(&direct_back) < 1e-12);
        assert!((k.spectrum_at(fast.axis().point(1234)) - fast.values()[1234]).norm() < 1e-12);
        assert!((fast.profile_at(k.axis().point(77)) - fast_back.values()[77]).norm() < 1e-12);
    }

    #[test]
    fn standard_grid_fast_matches_direct_at_samples() {
        let grid = SpectralGrid::standard();
        let k = gaussian(grid, 0.5, 2.0);
        let psi = k.to_spectral();
        for idx in [0, 1000, 3840, 5000, 7680] {
            let t = grid.tau.point(idx);
            assert!((psi.values()[idx] - k.spectrum_at(t)).norm() < 1e-11);
            assert!((psi.values()[idx] - gaussian_spectrum(0.5, 2.0, t)).norm() < 1e-11);
        }
    }

    #[test]
    fn multiplier_examples() {
        let grid = small_grid();
        let psi = gaussian(grid, 0.2, 1.0).to_spectral();
        assert_eq!(psi.apply_multiplier(|_| C64::new(1.0, 0.0)), psi);
        let unimodular = psi.apply_multiplier(|t| crate::specfun::gamma_line(crate::su2::AngularMode(0), t));
        for (a, b) in psi.values().iter().zip(unimodular.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
        let twice = psi.apply_multiplier(|t| C64::new(t, 0.0)).apply_multiplier(|t| C64::new(t, 0.0));
        let once = psi.apply_multiplier(|t| C64::new(t * t, 0.0));
        assert!(twice.max_abs_diff(&once) < 1e-12);
    }

    #[test]
    fn evaluate_at_one_consistent_with_inverse() {
        let grid = small_grid();
        let psi = gaussian(grid, -0.7, 1.3).to_spectral();
        let k = psi.from_spectral();
        assert!((psi.evaluate_at_one() - k.value_at_zero()).norm() < 1e-10);
    }

    #[test]
    fn grid_halving_convergence() {
        let grid = SpectralGrid::standard();
        let coarse = gaussian(grid, 0.0, 1.0).to_spectral().evaluate_at_one();
        let fine_grid = grid.refined();
        let fine = gaussian(fine_grid, 0.0, 1.0).to_spectral().evaluate_at_one();
        assert!((coarse - fine).norm() <= 1e-10);
    }

    #[test]
    fn multiplication_by_v_is_spectral_derivative() {
        let grid = small_grid();
        let k = gaussian(grid, 0.4, 0.9);
        let av = k.multiply_by_v();
        let delta = 1e-4;
        for t in [-3.0, -0.5, 0.0, 0.77, 2.5] {
            let d = (k.spectrum_at(t + delta) - k.spectrum_at(t - delta)) / (2.0 * delta) / C64::new(0.0, 1.0);
            assert!((d - av.spectrum_at(t)).norm() < 1e-6);
        }
    }

    #[test]
    fn interpolation() {
        let grid = small_grid();
        let k = gaussian(grid, 0.1, 1.5);
        for v in [-3.3, -0.011, 0.0, 0.123_456, 2.71] {
            let want = (-(v - 0.1f64).powi(2) / 4.5).exp();
            assert!((k.interpolate(v).re - want).abs() < 1e-12, "v = {v}");
        }
        assert_eq!(k.interpolate(100.0), C64::new(0.0, 0.0));
        assert!((k.interpolate(15.99).re - (-(15.89f64).powi(2) / 4.5).exp()).abs() < 1e-12);
    }

    #[test]
    fn decay_check() {
        let grid = small_grid();
        assert!(gaussian(grid, 0.0, 1.0).check_decay(1e-12).is_ok());
        let slow = LogProfile::from_fn(grid, |v| C64::new((-v.abs() / 4.0).exp(), 0.0));
        assert!(matches!(slow.check_decay(1e-12), Err(Error::NoDecay { .. })));
    }

    #[test]
    fn reflect_is_involution() {
        let grid = small_grid();
        let k = gaussian(grid, 1.0, 1.0);
        let r = k.reflect();
        assert!((r.interpolate(-1.0).re - 1.0).abs() < 1e-14);
        assert_eq!(r.reflect(), k);
    }

    /// A random smooth bump: a short sum of Gaussians.
    fn bump(grid: SpectralGrid, params: &[(f64, f64, f64, f64)]) -> LogProfile {
        LogProfile::from_fn(grid, |v| {
            params
                .iter()
                .map(|&(c, w, a, b)| C64::new(a, b) * (-(v - c).powi(2) / (2.0 * w * w)).exp())
                .sum()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip_and_parseval(params in prop::collection::vec((-3.0f64..3.0, 0.5f64..2.0, -1.0f64..1.0, -1.0f64..1.0), 1..4)) {
            let grid = small_grid();
            let k = bump(grid, &params);
            let psi = k.to_spectral();
            let back = psi.from_spectral();
            prop_assert!(back.max_abs_diff(&k) <= 1e-8 * k.max_abs().max(1e-300));
            let lhs = k.norm_sq();
            let rhs = psi.norm_sq();
            prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.max(1e-300));
        }

        #[test]
        fn transform_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
            let grid = small_grid();
            let k1 = gaussian(grid, c1, 1.0);
            let k2 = gaussian(grid, c2, 0.7);
            let combo = k1.lin_comb(C64::new(a, 0.0), &k2, C64::new(0.0, b)).unwrap().to_spectral();
            let split = k1.to_spectral().lin_comb(C64::new(a, 0.0), &k2.to_spectral(), C64::new(0.0, b)).unwrap();
            prop_assert!(combo.max_abs_diff(&split) < 1e-12);
        }
    }
}
