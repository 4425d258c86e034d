//! Complex special functions and the closed-form spectral objects.
//!
//! * [`log_gamma`], [`digamma`], [`trigamma`] on the right half-plane.
//! * The quaternionic Tate Gamma function
//!   `Γ_N(s) = i^N (2π)^{2-4s} Γ(2s + N/2) / Γ(2 - 2s + N/2)`
//!   and its restriction `γ_N(τ) = Γ_N(1/2 + iτ)` to the critical line.
//! * The logarithmic derivative `H_N(s) = d/ds log Γ_N(s)`, its critical-line
//!   form `h_N(τ)`, and `k_N(τ) = -h_N'(τ)`.
//! * The `ε`-expansion of `2π² Γ₀(1 - ε)` by Richardson extrapolation.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::su2::AngularMode;
use crate::{Error, Result, C64, EULER_GAMMA};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `½ log(2π)`.
const HALF_LOG_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn require_right_half_plane(function: &'static str, z: C64) -> Result<()> {
    if z.re > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, format!("Re(z) must be positive, got z = {z}")))
    }
}

/// Principal branch of `log Γ(z)` for `Re z > 0` (Lanczos, `g = 7`, nine terms).
pub fn log_gamma(z: C64) -> Result<C64> {
    require_right_half_plane("log_gamma", z)?;
    if z.re < 1.0 {
        // Keep the rational part away from its pole at the origin.
        return Ok(lanczos(z + 1.0) - z.ln());
    }
    Ok(lanczos(z))
}

fn lanczos(z: C64) -> C64 {
    let z = z - 1.0;
    let mut series = C64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LOG_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// `Γ(z)` for `Re z > 0`.
pub fn gamma(z: C64) -> Result<C64> {
    Ok(log_gamma(z)?.exp())
}

/// Below this modulus the argument is shifted up by the recurrence before
/// the asymptotic series is applied.
const ASYMPTOTIC_RADIUS: f64 = 15.0;

/// `ψ(z) = Γ'(z)/Γ(z)` for `Re z > 0`.
pub fn digamma(z: C64) -> Result<C64> {
    require_right_half_plane("digamma", z)?;
    let mut z = z;
    let mut shift = C64::new(0.0, 0.0);
    while z.norm() < ASYMPTOTIC_RADIUS {
        shift -= z.inv();
        z += 1.0;
    }
    let w = z.inv();
    let w2 = w * w;
    // Bernoulli terms B_{2k}/(2k) for k = 1..7, evaluated by Horner in w².
    let tail = w2
        * (-1.0 / 12.0
            + w2 * (1.0 / 120.0
                + w2 * (-1.0 / 252.0
                    + w2 * (1.0 / 240.0
                        + w2 * (-1.0 / 132.0 + w2 * (691.0 / 32_760.0 + w2 * (-1.0 / 12.0)))))));
    Ok(shift + z.ln() - 0.5 * w + tail)
}

/// `ψ'(z)` for `Re z > 0`.
pub fn trigamma(z: C64) -> Result<C64> {
    require_right_half_plane("trigamma", z)?;
    let mut z = z;
    let mut shift = C64::new(0.0, 0.0);
    while z.norm() < ASYMPTOTIC_RADIUS {
        shift += (z * z).inv();
        z += 1.0;
    }
    let w = z.inv();
    let w2 = w * w;
    // Bernoulli terms B_{2k} for k = 1..7.
    let tail = w
        * w2
        * (1.0 / 6.0
            + w2 * (-1.0 / 30.0
                + w2 * (1.0 / 42.0
                    + w2 * (-1.0 / 30.0 + w2 * (5.0 / 66.0 + w2 * (-691.0 / 2_730.0 + w2 * (7.0 / 6.0)))))));
    Ok(shift + w + 0.5 * w2 + tail)
}

/// A point of the open critical strip `0 < Re(s) < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalStripPoint(C64);

impl CriticalStripPoint {
    pub fn new(s: C64) -> Result<Self> {
        if s.re > 0.0 && s.re < 1.0 && s.im.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::domain("critical strip", format!("0 < Re(s) < 1 required, got s = {s}")))
        }
    }

    /// `s = 1/2 + iτ`.
    pub fn on_line(tau: f64) -> Self {
        Self(C64::new(0.5, tau))
    }

    pub fn s(self) -> C64 {
        self.0
    }

    /// `1 - s`, again in the strip.
    pub fn mirror(self) -> Self {
        Self(1.0 - self.0)
    }
}

fn i_pow(n: u32) -> C64 {
    match n % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `log Γ_N(s)` without the `i^N` phase, for any `s` where both Gamma arguments
/// lie in the right half-plane.
fn log_gamma_n_body(mode: AngularMode, s: C64) -> Result<C64> {
    let half = mode.half();
    let log_two_pi = (2.0 * PI).ln();
    Ok((2.0 - 4.0 * s) * log_two_pi + log_gamma(2.0 * s + half)? - log_gamma(2.0 - 2.0 * s + half)?)
}

/// `Γ_N(s)` on the open critical strip.
pub fn gamma_n(mode: AngularMode, s: CriticalStripPoint) -> C64 {
    gamma_n_extended(mode, s.s()).expect("Gamma arguments are in the right half-plane inside the strip")
}

/// `Γ_N(s)` wherever `Re(2s + N/2) > 0` and `Re(2 - 2s + N/2) > 0`.
///
/// For `N ≥ 1` this reaches slightly beyond the strip.
pub fn gamma_n_extended(mode: AngularMode, s: C64) -> Result<C64> {
    Ok(i_pow(mode.n()) * log_gamma_n_body(mode, s)?.exp())
}

/// `Γ_N(1 - ε)`, with the Gamma arguments `2 - 2ε + N/2` and `2ε + N/2` formed
/// from `ε` directly. Passing `s = 1 - ε` to [`gamma_n_extended`] would lose
/// the low digits of `ε` in `2 - 2s`.
pub fn gamma_n_near_one(mode: AngularMode, eps: C64) -> Result<C64> {
    let half = mode.half();
    let body = (-2.0 + 4.0 * eps) * (2.0 * PI).ln() + log_gamma(2.0 - 2.0 * eps + half)? - log_gamma(2.0 * eps + half)?;
    Ok(i_pow(mode.n()) * body.exp())
}

/// `γ_N(τ) = Γ_N(1/2 + iτ)`, a unimodular function of `τ`.
pub fn gamma_line(mode: AngularMode, tau: f64) -> C64 {
    gamma_n(mode, CriticalStripPoint::on_line(tau))
}

/// `H_N(s) = d/ds log Γ_N(s) = -4 log 2π + 2ψ(2s + N/2) + 2ψ(2 - 2s + N/2)`.
pub fn big_h_n(mode: AngularMode, s: CriticalStripPoint) -> C64 {
    let s = s.s();
    let half = mode.half();
    let psi = |z: C64| digamma(z).expect("digamma argument in the right half-plane");
    -4.0 * (2.0 * PI).ln() + 2.0 * psi(2.0 * s + half) + 2.0 * psi(2.0 - 2.0 * s + half)
}

/// `h_N(τ) = -i γ_N'(τ)/γ_N(τ) = -4 log 2π + 4 Re ψ(1 + N/2 + 2iτ)`.
pub fn h_n(mode: AngularMode, tau: f64) -> f64 {
    let z = C64::new(1.0 + mode.half(), 2.0 * tau);
    -4.0 * (2.0 * PI).ln() + 4.0 * digamma(z).expect("Re z ≥ 1").re
}

/// `k_N(τ) = -h_N'(τ) = 8 Im ψ'(1 + N/2 + 2iτ)`.
pub fn k_n(mode: AngularMode, tau: f64) -> f64 {
    let z = C64::new(1.0 + mode.half(), 2.0 * tau);
    8.0 * trigamma(z).expect("Re z ≥ 1").im
}

/// `γ_N`, `h_N`, `k_N` sampled on a symmetric uniform `τ`-grid.
#[derive(Debug, Clone)]
pub struct SpectralFunctionTable {
    pub mode: AngularMode,
    pub spacing: f64,
    pub half_width: f64,
    pub taus: Vec<f64>,
    pub gamma: Vec<C64>,
    pub h: Vec<f64>,
    pub k: Vec<f64>,
}

impl SpectralFunctionTable {
    /// Samples at `τ_m = m·spacing` for `|m| ≤ round(half_width/spacing)`.
    pub fn new(mode: AngularMode, spacing: f64, half_width: f64) -> Result<Self> {
        if !(spacing > 0.0) || !(half_width >= 0.0) || !spacing.is_finite() || !half_width.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "spacing {spacing} and half-width {half_width} must be positive and finite"
            )));
        }
        let half = (half_width / spacing).round() as i64;
        let taus: Vec<f64> = (-half..=half).map(|m| m as f64 * spacing).collect();
        let rows: Vec<(C64, f64, f64)> = taus
            .par_iter()
            .map(|&t| (gamma_line(mode, t), h_n(mode, t), k_n(mode, t)))
            .collect();
        let (gamma, (h, k)) = rows.into_iter().map(|(g, h, k)| (g, (h, k))).unzip();
        Ok(Self {
            mode,
            spacing,
            half_width: half as f64 * spacing,
            taus,
            gamma,
            h,
            k,
        })
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Largest violation of `|γ_N| = 1`, `h_N` even and `k_N` odd on the grid.
    pub fn invariant_defect(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let j = n - 1 - i;
                let unit = (self.gamma[i].norm() - 1.0).abs();
                let even = (self.h[i] - self.h[j]).abs();
                let odd = (self.k[i] + self.k[j]).abs();
                unit.max(even).max(odd)
            })
            .fold(0.0, f64::max)
    }
}

/// Extremes of `h_N` and `|k_N|` over a rectangular `(N, τ)` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralExtrema {
    pub min_h: f64,
    pub argmin_h: (u32, f64),
    pub max_abs_k: f64,
    pub argmax_k: (u32, f64),
}

/// Scans `0 ≤ N ≤ n_max`, `τ = m·step` with `|τ| ≤ tau_max`.
pub fn scan_extrema(n_max: u32, tau_max: f64, step: f64) -> Result<SpectralExtrema> {
    if !(step > 0.0) || !(tau_max >= 0.0) {
        return Err(Error::InvalidGrid(format!("step {step} and range {tau_max} must be positive")));
    }
    let half = (tau_max / step).floor() as i64;
    let points: Vec<(u32, f64)> = (0..=n_max)
        .flat_map(|n| (-half..=half).map(move |m| (n, m as f64 * step)))
        .collect();
    let values: Vec<(u32, f64, f64, f64)> = points
        .par_iter()
        .map(|&(n, t)| (n, t, h_n(AngularMode(n), t), k_n(AngularMode(n), t).abs()))
        .collect();
    let mut ext = SpectralExtrema {
        min_h: f64::INFINITY,
        argmin_h: (0, 0.0),
        max_abs_k: 0.0,
        argmax_k: (0, 0.0),
    };
    for (n, t, h, k) in values {
        if h < ext.min_h {
            ext.min_h = h;
            ext.argmin_h = (n, t);
        }
        if k > ext.max_abs_k {
            ext.max_abs_k = k;
            ext.argmax_k = (n, t);
        }
    }
    Ok(ext)
}

/// `4 log 2π + 4γ_e - 2`, the point-mass coefficient of the distribution `G`.
pub fn g_constant() -> f64 {
    4.0 * (2.0 * PI).ln() + 4.0 * EULER_GAMMA - 2.0
}

/// Coefficients of `2π² Γ₀(1 - ε) = c₁ε + c₂ε² + c₃ε³ + …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamma0Expansion {
    /// `c₁, c₂, …` in order.
    pub coefficients: Vec<f64>,
    /// Difference between the last two diagonal Richardson entries, per coefficient.
    pub error_estimates: Vec<f64>,
}

/// Largest sampling step of the expansion.
pub const EXPANSION_EPS0: f64 = 1e-2;
/// Number of Richardson levels (`ε` halves between levels).
pub const EXPANSION_LEVELS: usize = 6;

/// Extracts the `ε`-series of `2π² Γ₀(1 - ε)` up to `order ∈ {2, 3}` with the
/// default sampling ([`EXPANSION_EPS0`], [`EXPANSION_LEVELS`]).
pub fn gamma0_expansion(order: usize, tol: f64) -> Result<Gamma0Expansion> {
    gamma0_expansion_with(order, tol, EXPANSION_EPS0, EXPANSION_LEVELS)
}

/// Extracts the `ε`-series of `2π² Γ₀(1 - ε)` up to `order ∈ {2, 3}`.
///
/// Let `g(ε) = 2π² Γ₀(1 - ε)/ε = c₁ + c₂ε + c₃ε² + …`. The `m`-th coefficient
/// is the divided difference of `g` on the nodes `ε, ε/2, …, ε/2^{m-1}`, up to
/// a power series in `ε`; that series is extrapolated to `ε = 0` with `levels`
/// Richardson levels starting from `ε = eps0`. Returns
/// [`Error::Nonconvergence`] if the last two extrapolants of any coefficient
/// differ by more than `tol`.
pub fn gamma0_expansion_with(order: usize, tol: f64, eps0: f64, levels: usize) -> Result<Gamma0Expansion> {
    if !(eps0 > 0.0 && eps0 < 0.25) || levels < 2 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps0 < 1/4 and at least two levels, got eps0 = {eps0}, levels = {levels}"
        )));
    }
    if !(2..=3).contains(&order) {
        return Err(Error::InvalidArgument(format!("expansion order must be 2 or 3, got {order}")));
    }
    let g = |eps: f64| -> Result<f64> {
        let v = gamma_n_near_one(AngularMode(0), C64::new(eps, 0.0))?;
        Ok(2.0 * PI * PI * v.re / eps)
    };
    // Samples at ε₀/2^j for every node any level needs.
    let count = levels + order - 1;
    let nodes: Vec<f64> = (0..count).map(|j| eps0 / f64::powi(2.0, j as i32)).collect();
    let samples = nodes.iter().map(|&e| g(e)).collect::<Result<Vec<f64>>>()?;

    let mut coefficients = Vec::with_capacity(order);
    let mut error_estimates = Vec::with_capacity(order);
    for m in 1..=order {
        let sequence: Vec<f64> = (0..levels)
            .map(|level| divided_difference(&nodes[level..level + m], &samples[level..level + m]))
            .collect();
        let (value, err) = richardson(&sequence);
        if !(err <= tol) {
            return Err(Error::Nonconvergence { diff: err, tol });
        }
        coefficients.push(value);
        error_estimates.push(err);
    }
    Ok(Gamma0Expansion {
        coefficients,
        error_estimates,
    })
}

/// Newton divided difference `f[x₀, …, x_{n-1}]`.
fn divided_difference(x: &[f64], y: &[f64]) -> f64 {
    let mut table = y.to_vec();
    for level in 1..x.len() {
        for i in 0..x.len() - level {
            table[i] = (table[i + 1] - table[i]) / (x[i + level] - x[i]);
        }
    }
    table[0]
}

/// Richardson extrapolation of `a(ε₀ 2^{-k})` assuming an expansion in integer
/// powers of `ε`. Returns the final diagonal entry and its difference from the
/// previous one.
fn richardson(sequence: &[f64]) -> (f64, f64) {
    let mut row = sequence.to_vec();
    let n = row.len();
    let mut before_last_column = row[n - 1];
    for j in 1..n {
        let factor = f64::powi(2.0, j as i32) - 1.0;
        before_last_column = row[n - 1];
        // Descending so that row[k - 1] still holds the previous column.
        for k in (j..n).rev() {
            row[k] += (row[k] - row[k - 1]) / factor;
        }
    }
    // The last row now holds T[n-1][n-1]; the error estimate is its
    // distance from T[n-1][n-2].
    let last = row[n - 1];
    (last, (last - before_last_column).abs())
}
