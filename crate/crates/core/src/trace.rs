//! The truncated trace `Tr(P̃_Λ P_Λ U_f)` and its expansion
//! `2 log Λ·f(1) - H(f)(1) + o(1)`.
//!
//! Two independent evaluations:
//!
//! * [`trace_direct`] integrates `(2 log Λ - log|Y|)·λ(Y)·Γ(f)_a(Y)` over
//!   `|Y| ≤ Λ²`. In polar coordinates `Y = r g₀` the angular integral is the
//!   [`angular_bessel`] integral `J_N(r)`, and with `v = log|Y|`,
//!
//!   ```text
//!   Tr = 2π² ∫_{-∞}^{c} (c - v)·J_N(e^{v/4})·K₂(v)·e^{v/2} dv,   c = 2 log Λ,
//!   ```
//!
//!   where `K₂` is the log-profile of `Γ(f)`.
//!
//! * [`trace_spectral`] evaluates `((2 log Λ - B)_+ I(f))(1)` through
//!   `2 log Λ - B = Γ(2 log Λ + A)Γ⁻¹`: the profile `K₁` of `Γ⁻¹I(f)` is
//!   multiplied by `(c + v)_+`, then `Γ` is applied and the result evaluated
//!   at `1`. The weight is split as `(c + v)_+ = (c + v) + (-c - v)_+`; the
//!   linear part is smooth and goes through the grid operators, while the
//!   remainder, supported on `v ≤ -c` with a kink there, is integrated by
//!   Gauss–Legendre panels ending exactly at the kink. The remainder is
//!   `-R(Λ)`, so the residual comes out without cancellation.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::gamma_op::IsotypicFunction;
use crate::quadrature::CompositeRule;
use crate::specfun::gamma_line;
use crate::su2::{angular_bessel, ANGULAR_TOL};
use crate::{Error, Result, C64, TWO_PI_SQ};

/// Default sweep `Λ ∈ {2, 4, 8, 16, 32, 64}`.
pub const DEFAULT_LAMBDAS: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

/// Gauss–Legendre order of every panel used here.
const PANEL_ORDER: usize = 16;

/// Inputs of a trace sweep.
#[derive(Debug, Clone)]
pub struct TraceConfig {
    f: IsotypicFunction,
    lambdas: Vec<f64>,
    /// Panel width in `v` for both routes, before any oscillation refinement.
    pub panel_width: f64,
    /// Relative agreement demanded between a rule and its refinement.
    pub tol: f64,
}

impl TraceConfig {
    pub fn new(f: IsotypicFunction, lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidArgument("empty Λ list".into()));
        }
        if let Some(bad) = lambdas.iter().find(|l| !(**l > 1.0 && l.is_finite())) {
            return Err(Error::InvalidArgument(format!("Λ must exceed 1, got {bad}")));
        }
        if lambdas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("Λ list must be strictly increasing".into()));
        }
        Ok(Self {
            f,
            lambdas,
            panel_width: 0.125,
            tol: 1e-8,
        })
    }

    /// The standard `N = 0` Gaussian profile over [`DEFAULT_LAMBDAS`].
    pub fn standard() -> Self {
        Self::new(IsotypicFunction::standard(), DEFAULT_LAMBDAS.to_vec()).expect("static sweep")
    }

    pub fn function(&self) -> &IsotypicFunction {
        &self.f
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceResult {
    pub lambda: f64,
    /// `Tr(Λ)` by the polar-coordinate route.
    pub direct: C64,
    /// `Tr(Λ)` by the spectral route.
    pub spectral: C64,
    /// `2 log Λ·f(1)`.
    pub leading: C64,
    /// `H(f)(1)`.
    pub h_at_one: C64,
    /// `R(Λ) = Tr(Λ) - 2 log Λ·f(1) + H(f)(1)`, from the spectral route.
    pub residual: C64,
}

impl TraceResult {
    /// `|direct - spectral| / |spectral|`.
    pub fn route_discrepancy(&self) -> f64 {
        (self.direct - self.spectral).norm() / self.spectral.norm()
    }
}

fn check_lambda(lambda: f64) -> Result<f64> {
    if lambda > 1.0 && lambda.is_finite() {
        Ok(2.0 * lambda.ln())
    } else {
        Err(Error::InvalidArgument(format!("Λ must exceed 1, got {lambda}")))
    }
}

/// Panel breaks on `[a, b]` no wider than `width`, and no wider than a
/// quarter radian of phase for a local angular frequency `freq(v)`.
fn breaks<W: Fn(f64) -> f64>(a: f64, b: f64, width: f64, freq: W) -> Vec<f64> {
    let mut out = vec![a];
    let mut x = a;
    while x < b {
        let step = width.min(4.0 / freq(x).max(1e-300));
        x = (x + step).min(b);
        out.push(x);
    }
    out
}

fn relative_gap(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn direct_with(f: &IsotypicFunction, c: f64, width: f64) -> Result<C64> {
    let mode = f.mode();
    let k2 = f.gamma_transform();
    let profile = k2.profile();
    let lo = -f.grid().v.half_width();
    if c <= lo {
        return Ok(C64::new(0.0, 0.0));
    }
    // J_N(e^{v/4}) oscillates at angular frequency d/dv(4π e^{v/4}) = π e^{v/4}.
    let cuts = breaks(lo, c, width, |v| PI * (v / 4.0).exp() / 4.0);
    let rule = CompositeRule::from_breaks(&cuts, PANEL_ORDER);
    let terms = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(&v, &w)| -> Result<C64> {
            let k = profile.interpolate(v);
            if k == C64::new(0.0, 0.0) {
                return Ok(k);
            }
            let j = angular_bessel(mode, (v / 4.0).exp(), ANGULAR_TOL)?;
            Ok(j * k * (w * (c - v) * (v / 2.0).exp()))
        })
        .collect::<Result<Vec<C64>>>()?;
    Ok(terms.into_iter().sum::<C64>() * TWO_PI_SQ)
}

/// `Tr(Λ)` by the polar-coordinate route, with the panel rule checked against
/// its halving at relative `tol`.
pub fn trace_direct_with(f: &IsotypicFunction, lambda: f64, width: f64, tol: f64) -> Result<C64> {
    let c = check_lambda(lambda)?;
    let coarse = direct_with(f, c, width)?;
    let fine = direct_with(f, c, width / 2.0)?;
    let gap = relative_gap(coarse, fine);
    if gap > tol {
        return Err(Error::Resolution {
            what: "direct trace integral",
            diff: gap,
            tol,
        });
    }
    Ok(fine)
}

/// `Tr(Λ)` by the polar-coordinate route with default resolution.
pub fn trace_direct(lambda: f64, f: &IsotypicFunction) -> Result<C64> {
    trace_direct_with(f, lambda, 0.125, 1e-8)
}

/// `Γ[(-c - v)_+ K₁](1)`, the part of the truncated weight below the kink.
fn tail_term(k1: &IsotypicFunction, c: f64, width: f64) -> C64 {
    let mode = k1.mode();
    let grid = *k1.grid();
    let lo = -grid.v.half_width();
    if -c <= lo {
        return C64::new(0.0, 0.0);
    }
    let tau_max = grid.tau.half_width();
    // Panels resolve e^{iτv} up to the largest τ on the grid.
    let cuts = breaks(lo, -c, width, |_| tau_max);
    let rule = CompositeRule::from_breaks(&cuts, PANEL_ORDER);
    let samples: Vec<(f64, C64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&v, &w)| (v, k1.profile().interpolate(v) * (w * (-c - v))))
        .filter(|(_, x)| *x != C64::new(0.0, 0.0))
        .collect();
    let axis = grid.tau;
    let dt = axis.spacing();
    // Within a chunk of τ nodes the phases e^{iτv} advance by the recurrence
    // p ← p·e^{iΔτ v}; chunks are short enough that rounding stays negligible.
    const CHUNK: usize = 64;
    let starts: Vec<usize> = (0..axis.len()).step_by(CHUNK).collect();
    let sum: C64 = starts
        .par_iter()
        .map(|&start| {
            let end = (start + CHUNK).min(axis.len());
            let mut spectra = [C64::new(0.0, 0.0); CHUNK];
            let t0 = axis.point(start);
            for &(v, x) in &samples {
                let step = C64::from_polar(1.0, dt * v);
                let mut p = x * C64::from_polar(1.0, t0 * v);
                for s in spectra.iter_mut().take(end - start) {
                    *s += p;
                    p *= step;
                }
            }
            (start..end)
                .zip(spectra)
                .map(|(j, s)| gamma_line(mode, axis.point(j)) * s * axis.weight(j))
                .sum::<C64>()
        })
        .collect::<Vec<C64>>()
        .into_iter()
        .sum();
    sum * (mode.dimension() as f64 / (2.0 * PI))
}

/// The spectral route split into its smooth part `c·f(1) + (ΓAΓ⁻¹I f)(1)` and
/// the kink remainder; returns `(Tr, remainder)`.
fn spectral_parts(f: &IsotypicFunction, c: f64, width: f64) -> (C64, C64) {
    let k1 = f.inversion().gamma_inverse();
    let smooth = k1.gamma_transform().value_at_one_spectral() * c + k1.op_a().gamma_transform().value_at_one_spectral();
    let remainder = tail_term(&k1, c, width);
    (smooth + remainder, remainder)
}

/// `Tr(Λ)` by the spectral route, with the kink quadrature checked against its
/// halving at relative `tol` (relative to the trace).
pub fn trace_spectral_with(f: &IsotypicFunction, lambda: f64, width: f64, tol: f64) -> Result<C64> {
    let c = check_lambda(lambda)?;
    let (coarse, _) = spectral_parts(f, c, width);
    let (fine, _) = spectral_parts(f, c, width / 2.0);
    let gap = relative_gap(coarse, fine);
    if gap > tol {
        return Err(Error::Resolution {
            what: "spectral trace remainder",
            diff: gap,
            tol,
        });
    }
    Ok(fine)
}

/// `Tr(Λ)` by the spectral route with default resolution.
pub fn trace_spectral(lambda: f64, f: &IsotypicFunction) -> Result<C64> {
    trace_spectral_with(f, lambda, 0.125, 1e-8)
}

/// Both routes and the residual at every `Λ` of the sweep.
pub fn residual_sweep(config: &TraceConfig) -> Result<Vec<TraceResult>> {
    let f = &config.f;
    let f_one = f.value_at_one();
    let h_one = f.op_h().value_at_one_spectral();
    config
        .lambdas
        .iter()
        .map(|&lambda| {
            let c = check_lambda(lambda)?;
            let direct = trace_direct_with(f, lambda, config.panel_width, config.tol)?;
            let (spectral, remainder) = spectral_parts(f, c, config.panel_width / 2.0);
            let (coarse, _) = spectral_parts(f, c, config.panel_width);
            let gap = relative_gap(coarse, spectral);
            if gap > config.tol {
                return Err(Error::Resolution {
                    what: "spectral trace remainder",
                    diff: gap,
                    tol: config.tol,
                });
            }
            // Tr - c f(1) + H(f)(1): the smooth part cancels exactly up to the
            // identity (B I f)(1) = H(f)(1), leaving the remainder.
            let smooth_defect = spectral - remainder - (f_one * c - h_one);
            Ok(TraceResult {
                lambda,
                direct,
                spectral,
                leading: f_one * c,
                h_at_one: h_one,
                residual: remainder + smooth_defect,
            })
        })
        .collect()
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Fits `Re Tr(Λ)` against `2 log Λ`.
pub fn fit_leading_term(rows: &[TraceResult]) -> Result<LinearFit> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (2.0 * r.lambda.ln(), r.spectral.re)).collect();
    linear_fit(&points)
}

/// Ordinary least squares through `(x, y)` pairs.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("a line needs at least two points".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}
