//! Additive-picture oracles.
//!
//! Everything here works with functions on `ℍ` directly, independently of the
//! log-Fourier machinery of [`crate::spectral`]:
//!
//! * [`brute_fourier`]: Riemann sums of `𝓕φ(y) = ∫φ(x)e^{4πi Re(xy)}dx`
//!   with `dx = 4dx₀dx₁dx₂dx₃` on a 4D grid.
//! * [`radial_fourier`]: the same transform for `χ_N(x̂)·R(r)`, reduced to a
//!   radial integral against the angular Bessel integral.
//! * [`distribution_g`]: the regularization of `𝓕(-log|y|)`, for zonal test
//!   functions, and the convolution [`convolution_b_at_one`].
//! * [`HomogeneousDistribution`]: `Δ_s(φ)`, the continuation of `∫φ|x|^{s-1}dx`.
//! * [`gaussian_moment`]: the moments behind the local functional equation.
//! * [`homogeneity_check`]: `∫H(φ)F|x|^{-s}dx` against `H_N(s)∫φF|x|^{-s}dx`.
//!
//! A *zonal* function depends on `x` only through `ρ = n(x)^{1/2}` and
//! `cos θ = x₀/ρ`; central isotypic functions and their translates by real
//! numbers are zonal.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::gamma_op::{AdditiveFunction, IsotypicFunction};
use crate::quadrature::{adaptive, CompositeRule};
use crate::quat::Quaternion;
use crate::specfun::{big_h_n, g_constant, gamma, gamma_n, CriticalStripPoint};
use crate::su2::{angular_bessel, AngularMode, AngularQuadrature, ANGULAR_TOL};
use crate::{Error, Result, C64, TWO_PI_SQ};

/// A cube `[-L, L]⁴` sampled with `M` points per axis (`M` odd, so `0` is a node).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid4D {
    half_extent: f64,
    points: usize,
}

impl Grid4D {
    pub fn new(half_extent: f64, points: usize) -> Result<Self> {
        if !(half_extent > 0.0 && half_extent.is_finite()) {
            return Err(Error::InvalidGrid(format!("half-extent must be positive, got {half_extent}")));
        }
        if points < 3 || points % 2 == 0 {
            return Err(Error::InvalidGrid(format!("points per axis must be odd and at least 3, got {points}")));
        }
        Ok(Self { half_extent, points })
    }

    /// `L = 2`, `M = 33`: `h = 1/8`, and `ω` is `e^{-8π} ≈ 10⁻¹¹` on the faces.
    pub fn standard() -> Self {
        Self::new(2.0, 33).expect("static grid")
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / (self.points - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.points.pow(4)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coordinate(&self, index: usize) -> f64 {
        let half = (self.points / 2) as i64;
        (index as i64 - half) as f64 * self.spacing()
    }

    /// The node with axis indices `idx`, flattened as `((i₀M + i₁)M + i₂)M + i₃`.
    pub fn node(&self, flat: usize) -> Quaternion {
        let m = self.points;
        let i3 = flat % m;
        let i2 = (flat / m) % m;
        let i1 = (flat / (m * m)) % m;
        let i0 = flat / (m * m * m);
        Quaternion::new(
            self.coordinate(i0),
            self.coordinate(i1),
            self.coordinate(i2),
            self.coordinate(i3),
        )
    }

    fn on_boundary(&self, flat: usize) -> bool {
        let m = self.points;
        let mut rest = flat;
        for _ in 0..4 {
            let i = rest % m;
            if i == 0 || i == m - 1 {
                return true;
            }
            rest /= m;
        }
        false
    }
}

impl Default for Grid4D {
    fn default() -> Self {
        Self::standard()
    }
}

/// Samples of a function on a [`Grid4D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid4D,
    values: Vec<C64>,
}

/// Largest boundary modulus accepted by [`GridFunction::check_decay`] by default.
pub const GRID_DECAY_TOL: f64 = 1e-8;

impl GridFunction {
    pub fn from_fn<F: Fn(Quaternion) -> C64 + Sync>(grid: Grid4D, f: F) -> Self {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.node(i))).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Grid4D) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid4D {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn boundary_max(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.on_boundary(*i))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// [`Error::NoDecay`] if a boundary sample exceeds `tol` in modulus.
    pub fn check_decay(&self, tol: f64) -> Result<()> {
        let b = self.boundary_max();
        if b > tol {
            Err(Error::NoDecay { boundary: b })
        } else {
            Ok(())
        }
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grid functions on different grids".into()));
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        })
    }
}

/// `𝓕φ(y) ≈ Σ_x φ(x)·e^{4πi Re(xy)}·4h⁴` at each probe.
///
/// The phase factorizes over the four axes (`Re(xy) = x₀y₀ - x₁y₁ - x₂y₂ -
/// x₃y₃`), so per probe only `4M` exponentials are formed. Slices of fixed
/// `i₀` are summed in parallel and then combined in index order, which keeps
/// the result independent of the thread count.
pub fn brute_fourier(phi: &GridFunction, probes: &[Quaternion]) -> Vec<C64> {
    let grid = phi.grid;
    let m = grid.points();
    let h = grid.spacing();
    let measure = 4.0 * h.powi(4);
    probes
        .iter()
        .map(|y| {
            let axis_phase = |sign: f64, yc: f64| -> Vec<C64> {
                (0..m)
                    .map(|i| C64::from_polar(1.0, 4.0 * PI * sign * grid.coordinate(i) * yc))
                    .collect()
            };
            let p0 = axis_phase(1.0, y.x0);
            let p1 = axis_phase(-1.0, y.x1);
            let p2 = axis_phase(-1.0, y.x2);
            let p3 = axis_phase(-1.0, y.x3);
            let slices: Vec<C64> = (0..m)
                .into_par_iter()
                .map(|i0| {
                    let mut slice = C64::new(0.0, 0.0);
                    let base0 = i0 * m * m * m;
                    for i1 in 0..m {
                        let base1 = base0 + i1 * m * m;
                        let ph01 = p0[i0] * p1[i1];
                        for i2 in 0..m {
                            let base2 = base1 + i2 * m;
                            let ph012 = ph01 * p2[i2];
                            let row: C64 = phi.values[base2..base2 + m]
                                .iter()
                                .zip(&p3)
                                .map(|(v, p)| v * p)
                                .sum();
                            slice += row * ph012;
                        }
                    }
                    slice
                })
                .collect();
            slices.into_iter().sum::<C64>() * measure
        })
        .collect()
}

/// `𝓕φ` at the probes for `φ(x) = χ_N(x̂)·R(r)`, `r = n(x)^{1/2}`:
///
/// ```text
/// 𝓕φ(ρh₀) = χ_N(h₀)/(N+1) · 8π² ∫₀^{r_max} R(r)·conj(J_N(rρ))·r³ dr,
/// ```
///
/// with `J_N` the [`angular_bessel`] integral. Gauss–Legendre panels no
/// wider than a quarter of the local oscillation period; the rule is doubled
/// once and the two results must agree within `tol` (relative to the largest
/// probe value).
pub fn radial_fourier<R: Fn(f64) -> C64 + Sync>(
    mode: AngularMode,
    radial: R,
    r_max: f64,
    probes: &[Quaternion],
    tol: f64,
) -> Result<Vec<C64>> {
    let evaluate = |panels_per_unit: f64, y: &Quaternion| -> Result<C64> {
        let rho = y.reduced_norm().sqrt();
        let cos = if rho == 0.0 { 1.0 } else { (y.x0 / rho).clamp(-1.0, 1.0) };
        let oscillation = 4.0 * PI * rho + 1.0;
        let panels = ((r_max * oscillation * panels_per_unit).ceil() as usize).max(8);
        let rule = CompositeRule::uniform_panels(0.0, r_max, panels, 16);
        let mut sum = C64::new(0.0, 0.0);
        for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
            let ab = angular_bessel(mode, r * rho, ANGULAR_TOL)?;
            sum += radial(r) * ab.conj() * (w * r.powi(3));
        }
        Ok(sum * (8.0 * PI * PI) * (mode.character_cos(cos) / mode.dimension() as f64))
    };
    let coarse = probes
        .par_iter()
        .map(|y| evaluate(1.0, y))
        .collect::<Result<Vec<C64>>>()?;
    let fine = probes
        .par_iter()
        .map(|y| evaluate(2.0, y))
        .collect::<Result<Vec<C64>>>()?;
    let scale = fine.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let diff = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if diff > tol * scale {
        return Err(Error::Resolution {
            what: "radial Fourier integral",
            diff: diff / scale,
            tol,
        });
    }
    Ok(fine)
}

/// `χ_N(x̂)·n(x)^{N/2}·(1 + b·n(x))·e^{-2πa·n(x)}` evaluated directly.
///
/// The harmonic polynomial `P_N(x) = r^N χ_N(x̂)` obeys
/// `P_{k+1} = 2x₀P_k - n(x)P_{k-1}`, which needs no division by `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicGaussian {
    pub mode: AngularMode,
    pub a: f64,
    pub b: f64,
}

impl HarmonicGaussian {
    pub fn new(mode: AngularMode, a: f64, b: f64) -> Self {
        Self { mode, a, b }
    }

    /// `ω_a(x) = e^{-2πa·n(x)}`.
    pub fn omega(a: f64) -> Self {
        Self::new(AngularMode(0), a, 0.0)
    }

    pub fn harmonic_polynomial(mode: AngularMode, x0: f64, n: f64) -> f64 {
        let mut prev = 1.0;
        if mode.n() == 0 {
            return prev;
        }
        let mut cur = 2.0 * x0;
        for _ in 1..mode.n() {
            let next = 2.0 * x0 * cur - n * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn eval(&self, x: Quaternion) -> C64 {
        let n = x.reduced_norm();
        let p = Self::harmonic_polynomial(self.mode, x.x0, n);
        C64::new(p * (1.0 + self.b * n) * (-2.0 * PI * self.a * n).exp(), 0.0)
    }

    /// The zonal form, `ρ = n(x)^{1/2}` and `cos θ = x₀/ρ`.
    pub fn eval_zonal(&self, rho: f64, cos_theta: f64) -> C64 {
        let n = rho * rho;
        let p = Self::harmonic_polynomial(self.mode, rho * cos_theta, n);
        C64::new(p * (1.0 + self.b * n) * (-2.0 * PI * self.a * n).exp(), 0.0)
    }

    /// The radial factor `r^N (1 + b r²) e^{-2πa r²}` multiplying `χ_N(x̂)`.
    pub fn radial(&self, r: f64) -> C64 {
        let n = r * r;
        C64::new(
            r.powi(self.mode.n() as i32) * (1.0 + self.b * n) * (-2.0 * PI * self.a * n).exp(),
            0.0,
        )
    }

    /// Samples on a 4D grid.
    pub fn sample(&self, grid: Grid4D) -> GridFunction {
        GridFunction::from_fn(grid, |x| self.eval(x))
    }

    /// The isotypic function `I(f)` whose additive form is this function.
    pub fn multiplicative(&self, grid: crate::spectral::SpectralGrid) -> Result<IsotypicFunction> {
        IsotypicFunction::harmonic_gaussian(self.mode, grid, self.a, self.b)
    }
}

/// Tolerances for the nested adaptive integrals of this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedTolerance {
    pub radial: f64,
    pub angular: f64,
}

impl Default for NestedTolerance {
    fn default() -> Self {
        Self {
            radial: 1e-11,
            angular: 1e-13,
        }
    }
}

/// Mean of a zonal function over the sphere `n(x) = ρ²`:
/// `(2/π)∫₀^π φ(ρ, cos θ) sin²θ dθ`.
pub fn spherical_mean<F: Fn(f64, f64) -> C64>(phi: &F, rho: f64, tol: f64) -> Result<C64> {
    adaptive(
        |t| phi(rho, t.cos()) * ((2.0 / PI) * t.sin().powi(2)),
        0.0,
        PI,
        tol,
        tol,
    )
}

/// `∫_{|x|≤1}(φ(x) - φ(0))·w(r) dx + ∫_{|x|>1} φ(x)·w(r) dx` written radially as
/// `∫₀¹(φ̄(r) - φ(0))·k(r) dr + ∫₀¹ φ̄(1/t)·k(1/t) dt/t²`, where `k` already
/// contains the polar measure.
fn regularized_radial<F, K>(phi: &F, phi0: C64, kernel: K, tol: NestedTolerance) -> Result<C64>
where
    F: Fn(f64, f64) -> C64,
    K: Fn(f64) -> C64,
{
    let mean = |r: f64| spherical_mean(phi, r, tol.angular);
    let inner_err = std::cell::Cell::new(None);
    let outer_err = std::cell::Cell::new(None);
    let inner = adaptive(
        |r| match mean(r) {
            Ok(m) => (m - phi0) * kernel(r),
            Err(e) => {
                inner_err.set(Some(e));
                C64::new(0.0, 0.0)
            }
        },
        0.0,
        1.0,
        tol.radial,
        tol.radial,
    )?;
    let outer = adaptive(
        |t| {
            if t == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let r = 1.0 / t;
            match mean(r) {
                Ok(m) => m * kernel(r) / (t * t),
                Err(e) => {
                    outer_err.set(Some(e));
                    C64::new(0.0, 0.0)
                }
            }
        },
        0.0,
        1.0,
        tol.radial,
        tol.radial,
    )?;
    if let Some(e) = inner_err.take().or(outer_err.take()) {
        return Err(e);
    }
    Ok(inner + outer)
}

/// The distribution `G = 𝓕(-log|y|)` on a zonal test function:
///
/// ```text
/// G(φ) = ∫_{|x|≤1}(φ(x) - φ(0)) dx/(2π²|x|) + ∫_{|x|>1} φ(x) dx/(2π²|x|)
///        + (4 log 2π + 4γ_e - 2)·φ(0).
/// ```
///
/// In polar form `dx/(2π²|x|) = 4 dr/r · d*g₀`.
pub fn distribution_g<F: Fn(f64, f64) -> C64>(phi: &F, tol: NestedTolerance) -> Result<C64> {
    let phi0 = phi(0.0, 1.0);
    let regular = regularized_radial(phi, phi0, |r| C64::new(4.0 / r, 0.0), tol)?;
    Ok(regular + phi0 * g_constant())
}

/// `B(φ)(1) = -(φ ∗ G)(1) = -G(y ↦ φ(1 - y))` for a central additive function.
///
/// With `n(y) = ρ²` and `Re y = ρ cos θ`, the translate has
/// `n(1 - y) = 1 - 2ρ cos θ + ρ²` and `Re(1 - y) = 1 - ρ cos θ`.
pub fn convolution_b_at_one(phi: &AdditiveFunction, tol: NestedTolerance) -> Result<C64> {
    let shifted = |rho: f64, cos: f64| {
        let n = (1.0 - 2.0 * rho * cos + rho * rho).max(0.0);
        let r = n.sqrt();
        if r == 0.0 {
            return C64::new(0.0, 0.0);
        }
        phi.eval_polar(r, ((1.0 - rho * cos) / r).clamp(-1.0, 1.0))
    };
    Ok(-distribution_g(&shifted, tol)?)
}

/// The homogeneous distribution `Δ_s`, the continuation of `φ ↦ ∫φ(x)|x|^{s-1}dx`
/// to `Re(s) > -1/4`, `s ≠ 0`:
///
/// ```text
/// Δ_s(φ) = ∫_{|x|≤1}(φ(x) - φ(0))|x|^{s-1}dx + ∫_{|x|>1}φ(x)|x|^{s-1}dx + (2π²/s)φ(0).
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousDistribution {
    s: C64,
}

impl HomogeneousDistribution {
    pub fn new(s: C64) -> Result<Self> {
        if !(s.re > -0.25) || s == C64::new(0.0, 0.0) || !s.is_finite() {
            return Err(Error::domain("homogeneous distribution", format!("need Re(s) > -1/4 and s ≠ 0, got {s}")));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> C64 {
        self.s
    }

    /// `Δ_s(φ)` for a zonal `φ`; in polar form `|x|^{s-1}dx = 8π² r^{4s-1} dr d*g₀`.
    pub fn evaluate<F: Fn(f64, f64) -> C64>(&self, phi: &F, tol: NestedTolerance) -> Result<C64> {
        let s = self.s;
        let phi0 = phi(0.0, 1.0);
        let kernel = |r: f64| 8.0 * PI * PI * C64::new(r, 0.0).powc(4.0 * s - 1.0);
        let regular = regularized_radial(phi, phi0, kernel, tol)?;
        Ok(regular + phi0 * (TWO_PI_SQ / s))
    }

    /// `∫φ(x)|x|^{s-1}dx` without regularization (`Re s > 0`), for cross-checks.
    pub fn evaluate_direct<F: Fn(f64, f64) -> C64>(&self, phi: &F, tol: NestedTolerance) -> Result<C64> {
        if self.s.re <= 0.0 {
            return Err(Error::domain("direct homogeneous integral", "needs Re(s) > 0"));
        }
        let s = self.s;
        let kernel = |r: f64| 8.0 * PI * PI * C64::new(r, 0.0).powc(4.0 * s - 1.0);
        regularized_radial(phi, C64::new(0.0, 0.0), kernel, tol)
    }
}

/// `∫ n(x)^N e^{-2π n(x)} |x|^{s-1-N/4} dx = 4π²(2π)^{-(2s+N/2)} Γ(2s + N/2)`.
pub fn gaussian_moment(mode: AngularMode, s: CriticalStripPoint) -> C64 {
    let z = 2.0 * s.s() + mode.half();
    4.0 * PI * PI * (-(z * (2.0 * PI).ln())).exp() * gamma(z).expect("Re z > 0 in the strip")
}

/// The same moment by quadrature: `8π²∫₀^∞ r^{N+4s-1} e^{-2πr²} dr` after
/// `r = e^w`, with Gauss–Legendre panels on `[-20, 3]` and the analytic tail
/// `∫_{-∞}^{-20} e^{aw}(1 - 2πe^{2w}) dw` below, `a = N + 4s`.
pub fn gaussian_moment_quadrature(mode: AngularMode, s: CriticalStripPoint) -> C64 {
    let a = C64::new(mode.n() as f64, 0.0) + 4.0 * s.s();
    let (lo, hi) = (-20.0, 3.0);
    let panels = ((hi - lo) * (1.0 + a.im.abs() / 4.0) * 4.0).ceil() as usize;
    let rule = CompositeRule::uniform_panels(lo, hi, panels, 20);
    let body = rule.integrate(|w| (a * w).exp() * (-2.0 * PI * (2.0 * w).exp()).exp());
    let tail = (a * lo).exp() / a - 2.0 * PI * ((a + 2.0) * lo).exp() / (a + 2.0);
    8.0 * PI * PI * (body + tail)
}

/// One row of the moment functional-equation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub mode: AngularMode,
    pub s: C64,
    /// `|i^N·m(s) - Γ_N(s)·m(1-s)| / |i^N·m(s)|`.
    pub functional_residual: f64,
    /// `|m_quad(s) - m(s)| / |m(s)|`.
    pub quadrature_residual: f64,
}

/// Checks `i^N·m(s) = Γ_N(s)·m(1 - s)` and the closed form against quadrature.
pub fn moment_check(mode: AngularMode, s: CriticalStripPoint) -> MomentCheck {
    let i_n = C64::new(0.0, 1.0).powu(mode.n());
    let lhs = i_n * gaussian_moment(mode, s);
    let rhs = gamma_n(mode, s) * gaussian_moment(mode, s.mirror());
    let closed = gaussian_moment(mode, s);
    let quad = gaussian_moment_quadrature(mode, s);
    MomentCheck {
        mode,
        s: s.s(),
        functional_residual: (lhs - rhs).norm() / lhs.norm(),
        quadrature_residual: (quad - closed).norm() / closed.norm(),
    }
}

/// `n × n` grid of strip points: `Re s` at the midpoints of `n` equal cells
/// of `(0, 1)`, `Im s` uniform on `[-im_max, im_max]`.
pub fn strip_grid(n: usize, im_max: f64) -> Vec<CriticalStripPoint> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let re = (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let im = if n == 1 { 0.0 } else { -im_max + 2.0 * im_max * j as f64 / (n - 1) as f64 };
            out.push(CriticalStripPoint::new(C64::new(re, im)).expect("midpoints lie inside the strip"));
        }
    }
    out
}

/// Both sides of `∫H(φ)F|x|^{-s}dx = H_N(s)∫φF|x|^{-s}dx` for `F = χ_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneityResidual {
    pub lhs: C64,
    pub rhs: C64,
    /// `|lhs - rhs| / max(|rhs|, |lhs|)` (0 when both vanish).
    pub residual: f64,
}

/// Evaluates the homogeneity identity for the central function `f`.
///
/// `H(f)` comes from the spectral multiplier. Both integrals are done in
/// polar coordinates `x = r g₀`: the angular factor `∫χ_N(g₀)² d*g₀` by
/// Gauss–Legendre in the class angle, the radial integral by composite
/// Gauss–Legendre in `v = 4 log r` across the profile window, where
/// `φ(x)|x|^{-s}dx = √(2π²)·χ_N(g₀)·K(v)·e^{(1/2-s)v} dv d*g₀`.
pub fn homogeneity_check(f: &IsotypicFunction, s: CriticalStripPoint) -> Result<HomogeneityResidual> {
    let mode = f.mode();
    let hf = f.op_h();
    let angular = AngularQuadrature::gauss(32 + 2 * mode.n() as usize)
        .integrate_cos(|c| C64::new(mode.character_cos(c).powi(2), 0.0));
    let window = f.grid().v.half_width();
    let rule = CompositeRule::uniform_panels(-window, window, (8.0 * window).ceil() as usize, 16);
    let weight = 0.5 - s.s();
    let radial = |g: &IsotypicFunction| {
        rule.integrate(|v| g.profile().interpolate(v) * (weight * v).exp()) * TWO_PI_SQ.sqrt()
    };
    let lhs = radial(&hf) * angular;
    let rhs = big_h_n(mode, s) * radial(f) * angular;
    let scale = lhs.norm().max(rhs.norm());
    let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale };
    Ok(HomogeneityResidual { lhs, rhs, residual })
}
