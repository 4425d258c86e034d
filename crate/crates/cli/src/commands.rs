//! One function per subcommand: validate, compute, emit, then apply `--tol`.
//!
//! Tables are always written before a tolerance failure is reported, so a
//! failing run still leaves its evidence behind.

use std::time::Instant;

use qgamma::gamma_op::IsotypicFunction;
use qgamma::oracle::{brute_fourier, moment_check, Grid4D, HarmonicGaussian};
use qgamma::quat::Quaternion;
use qgamma::specfun::{self, gamma0_expansion, gamma_n, h_n, k_n, CriticalStripPoint};
use qgamma::spectral::SpectralGrid;
use qgamma::su2::AngularMode;
use qgamma::trace::{fit_leading_term, residual_sweep, TraceConfig};
use qgamma::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{emit_report, emit_table, float, num, CliError, RunManifest, Table};
use crate::{FunctionalEqArgs, GConstantArgs, GammaTableArgs, ModeRange, OracleCheckArgs, SpectralScanArgs, TauRange, TraceSweepArgs};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn modes(range: &ModeRange) -> Result<Vec<AngularMode>, CliError> {
    if range.n_min > range.n_max {
        return Err(usage(format!("--n-min {} exceeds --n-max {}", range.n_min, range.n_max)));
    }
    Ok((range.n_min..=range.n_max).map(AngularMode).collect())
}

/// `τ_min, τ_min + Δ, …` up to `τ_max`; the last point snaps to `τ_max` when
/// the range is a whole number of steps, and points are formed by linear
/// interpolation so symmetric ranges contain `τ = 0` exactly.
fn tau_points(range: &TauRange) -> Result<Vec<f64>, CliError> {
    let TauRange { tau_min, tau_max, tau_step } = *range;
    if !(tau_min.is_finite() && tau_max.is_finite()) || tau_min > tau_max {
        return Err(usage(format!("invalid τ range [{tau_min}, {tau_max}]")));
    }
    if !(tau_step > 0.0 && tau_step.is_finite()) {
        return Err(usage(format!("--tau-step must be positive, got {tau_step}")));
    }
    let steps = ((tau_max - tau_min) / tau_step + 1e-9).floor() as usize;
    let end = if ((tau_min + steps as f64 * tau_step) - tau_max).abs() <= 1e-9 * tau_step {
        tau_max
    } else {
        tau_min + steps as f64 * tau_step
    };
    if steps == 0 {
        return Ok(vec![tau_min]);
    }
    Ok((0..=steps)
        .map(|i| (tau_min * (steps - i) as f64 + end * i as f64) / steps as f64)
        .collect())
}

/// `K × K` strip points: `Re s` at cell midpoints of `(0, 1)`, `Im s` uniform
/// on `[im_min, im_max]`.
fn strip_points(k: usize, im_min: f64, im_max: f64) -> Result<Vec<CriticalStripPoint>, CliError> {
    if !(im_min.is_finite() && im_max.is_finite()) || im_min > im_max {
        return Err(usage(format!("invalid Im s range [{im_min}, {im_max}]")));
    }
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        let re = (i as f64 + 0.5) / k as f64;
        for j in 0..k {
            let im = if k == 1 { 0.5 * (im_min + im_max) } else { im_min + (im_max - im_min) * j as f64 / (k - 1) as f64 };
            out.push(CriticalStripPoint::new(C64::new(re, im))?);
        }
    }
    Ok(out)
}

fn check_tol(what: &str, value: f64, tol: Option<f64>) -> Result<(), CliError> {
    match tol {
        Some(t) if !(t > 0.0) => Err(usage(format!("--tol must be positive, got {t}"))),
        Some(t) if !(value <= t) => Err(CliError::Numerical(format!("{what} = {value:.3e} exceeds tolerance {t:.3e}"))),
        _ => Ok(()),
    }
}

pub fn gamma_table(args: &GammaTableArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let modes = modes(&args.modes)?;
    if let Some(t) = args.tol {
        check_tol("tolerance", 0.0, Some(t))?;
    }
    let mut manifest = RunManifest::new("gamma-table")
        .param("n_min", args.modes.n_min)
        .param("n_max", args.modes.n_max)
        .param("tau_min", args.tau.tau_min)
        .param("tau_max", args.tau.tau_max);
    let points: Vec<CriticalStripPoint> = match args.s_grid {
        Some(k) => {
            manifest = manifest.param("s_grid", k);
            strip_points(k, args.tau.tau_min, args.tau.tau_max)?
        }
        None => {
            manifest = manifest.param("tau_step", args.tau.tau_step);
            tau_points(&args.tau)?.into_iter().map(CriticalStripPoint::on_line).collect()
        }
    };
    let mut table = Table::new(&["N", "re_s", "im_s", "re_gamma", "im_gamma", "abs_gamma"]);
    let mut line_defect = 0.0f64;
    for &mode in &modes {
        let values: Vec<C64> = points.par_iter().map(|&s| gamma_n(mode, s)).collect();
        for (s, g) in points.iter().zip(values) {
            if s.s().re == 0.5 {
                line_defect = line_defect.max((g.norm() - 1.0).abs());
            }
            table.push(vec![
                mode.n().to_string(),
                float(s.s().re),
                float(s.s().im),
                float(g.re),
                float(g.im),
                float(g.norm()),
            ]);
        }
    }
    let summary = json!({ "rows": modes.len() * points.len(), "max_critical_line_modulus_defect": num(line_defect) });
    emit_table(args.output.out.as_deref(), &manifest, &table, summary, start.elapsed())?;
    check_tol("max ||γ_N| - 1|", line_defect, args.tol)
}

pub fn spectral_scan(args: &SpectralScanArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let modes = modes(&args.modes)?;
    let taus = tau_points(&args.tau)?;
    let manifest = RunManifest::new("spectral-scan")
        .param("n_min", args.modes.n_min)
        .param("n_max", args.modes.n_max)
        .param("tau_min", args.tau.tau_min)
        .param("tau_max", args.tau.tau_max)
        .param("tau_step", args.tau.tau_step);
    let mut table = Table::new(&["N", "tau", "h", "k"]);
    let (mut min_h, mut argmin_h) = (f64::INFINITY, (0, 0.0));
    let (mut max_k, mut argmax_k) = (0.0f64, (0, 0.0));
    for &mode in &modes {
        let values: Vec<(f64, f64)> = taus.par_iter().map(|&t| (h_n(mode, t), k_n(mode, t))).collect();
        for (&t, (h, k)) in taus.iter().zip(values) {
            if h < min_h {
                min_h = h;
                argmin_h = (mode.n(), t);
            }
            if k.abs() > max_k {
                max_k = k.abs();
                argmax_k = (mode.n(), t);
            }
            table.push(vec![mode.n().to_string(), float(t), float(h), float(k)]);
        }
    }
    let summary = json!({
        "min_h": num(min_h),
        "argmin_h": { "N": argmin_h.0, "tau": num(argmin_h.1) },
        "max_abs_k": num(max_k),
        "argmax_abs_k": { "N": argmax_k.0, "tau": num(argmax_k.1) },
    });
    emit_table(args.output.out.as_deref(), &manifest, &table, summary, start.elapsed())
}

pub fn functional_eq(args: &FunctionalEqArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let modes = modes(&args.modes)?;
    let points = strip_points(args.s_grid, args.tau_min, args.tau_max)?;
    if let Some(t) = args.tol {
        check_tol("tolerance", 0.0, Some(t))?;
    }
    let manifest = RunManifest::new("functional-eq")
        .param("n_min", args.modes.n_min)
        .param("n_max", args.modes.n_max)
        .param("s_grid", args.s_grid)
        .param("tau_min", args.tau_min)
        .param("tau_max", args.tau_max);
    let mut table = Table::new(&["N", "re_s", "im_s", "functional_residual", "quadrature_residual"]);
    let (mut fe, mut quad) = (0.0f64, 0.0f64);
    for &mode in &modes {
        let checks: Vec<_> = points.par_iter().map(|&s| moment_check(mode, s)).collect();
        for c in checks {
            fe = fe.max(c.functional_residual);
            quad = quad.max(c.quadrature_residual);
            table.push(vec![
                mode.n().to_string(),
                float(c.s.re),
                float(c.s.im),
                float(c.functional_residual),
                float(c.quadrature_residual),
            ]);
        }
    }
    let summary = json!({
        "rows": modes.len() * points.len(),
        "max_functional_residual": num(fe),
        "max_quadrature_residual": num(quad),
    });
    emit_table(args.output.out.as_deref(), &manifest, &table, summary, start.elapsed())?;
    check_tol("max residual", fe.max(quad), args.tol)
}

/// Probes uniform in the Euclidean ball of radius 1, avoiding a small
/// neighbourhood of the origin.
fn probes(count: usize, seed: u64) -> Vec<Quaternion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.euclidean_norm();
        if n > 0.2 && n <= 1.0 {
            out.push(q);
        }
    }
    out
}

pub fn oracle_check(args: &OracleCheckArgs) -> Result<(), CliError> {
    let start = Instant::now();
    if args.probes == 0 {
        return Err(usage("--probes must be at least 1"));
    }
    if let Some(t) = args.tol {
        check_tol("tolerance", 0.0, Some(t))?;
    }
    let grid = Grid4D::new(args.grid_l, args.grid_m)?;
    let manifest = RunManifest::new("oracle-check")
        .param("grid_l", args.grid_l)
        .param("grid_m", args.grid_m)
        .param("probes", args.probes)
        .param("seed", args.seed);
    let ys = probes(args.probes, args.seed);

    let omega = HarmonicGaussian::omega(1.0);
    let omega_hat = brute_fourier(&omega.sample(grid), &ys);
    let self_dual = ys
        .iter()
        .zip(&omega_hat)
        .map(|(y, v)| (v - omega.eval(*y)).norm() / omega.eval(*y).norm())
        .fold(0.0f64, f64::max);

    let mut per_mode = Vec::new();
    let mut worst = self_dual;
    for n in 0..=2 {
        // The additive form of g; with f = I(g), Γ(f) = 𝓕(I f) = 𝓕φ.
        let phi = HarmonicGaussian::new(AngularMode(n), 1.0, 0.5);
        let g = phi.multiplicative(SpectralGrid::standard())?;
        let gamma_f = g.inversion().gamma_transform().to_additive();
        let brute = brute_fourier(&phi.sample(grid), &ys);
        let scale = brute.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut err = 0.0f64;
        for (y, b) in ys.iter().zip(&brute) {
            err = err.max((gamma_f.eval(*y)? - b).norm() / scale);
        }
        worst = worst.max(err);
        per_mode.push(json!({ "N": n, "max_relative_error": num(err) }));
    }
    let report = json!({
        "self_dual_max_relative_error": num(self_dual),
        "multiplier_vs_brute_force": per_mode,
        "grid_boundary_max_omega": num(omega.sample(grid).boundary_max()),
    });
    emit_report(args.output.out.as_deref(), &manifest, report, start.elapsed())?;
    check_tol("max oracle error", worst, args.tol)
}

fn parse_lambdas(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("cannot parse Λ value {t:?}")))
        })
        .collect()
}

pub fn trace_sweep(args: &TraceSweepArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let modes = modes(&ModeRange { n_min: args.n_min, n_max: args.n_max })?;
    let lambdas = parse_lambdas(&args.lambda_list)?;
    if let Some(t) = args.tol {
        check_tol("tolerance", 0.0, Some(t))?;
    }
    let manifest = RunManifest::new("trace-sweep")
        .param("n_min", args.n_min)
        .param("n_max", args.n_max)
        .param("lambda_list", lambdas.clone())
        .param("center", args.center)
        .param("width", args.width)
        .param("amplitude", args.amplitude);
    let grid = SpectralGrid::standard();
    let mut table = Table::new(&[
        "N",
        "lambda",
        "tr_direct_re",
        "tr_direct_im",
        "tr_spectral_re",
        "tr_spectral_im",
        "residual_re",
        "residual_im",
    ]);
    let mut summaries = Vec::new();
    let mut worst_route = 0.0f64;
    for &mode in &modes {
        let base = IsotypicFunction::gaussian(mode, grid, args.center, args.width)?;
        let f = base.lin_comb(C64::new(args.amplitude, 0.0), &base, C64::new(0.0, 0.0))?;
        let config = TraceConfig::new(f, lambdas.clone())?;
        let rows = residual_sweep(&config)?;
        let mut route = 0.0f64;
        for r in &rows {
            let d = if r.spectral.norm() > 0.0 { r.route_discrepancy() } else { r.direct.norm() };
            route = route.max(d);
            table.push(vec![
                mode.n().to_string(),
                float(r.lambda),
                float(r.direct.re),
                float(r.direct.im),
                float(r.spectral.re),
                float(r.spectral.im),
                float(r.residual.re),
                float(r.residual.im),
            ]);
        }
        worst_route = worst_route.max(route);
        let fit = if rows.len() >= 2 { Some(fit_leading_term(&rows)?) } else { None };
        let decay: Vec<Value> = rows
            .windows(2)
            .map(|w| num(w[1].residual.norm() / w[0].residual.norm()))
            .collect();
        summaries.push(json!({
            "N": mode.n(),
            "f_at_one": num(config.function().value_at_one().re),
            "h_at_one": num(rows[0].h_at_one.re),
            "slope": fit.map(|f| num(f.slope)),
            "intercept": fit.map(|f| num(f.intercept)),
            "max_route_discrepancy": num(route),
            "residual_ratios": decay,
        }));
    }
    let summary = json!({ "sectors": summaries, "max_route_discrepancy": num(worst_route) });
    emit_table(args.output.out.as_deref(), &manifest, &table, summary, start.elapsed())?;
    check_tol("max route discrepancy", worst_route, args.tol)
}

pub fn g_constant(args: &GConstantArgs) -> Result<(), CliError> {
    let start = Instant::now();
    if !(args.tol >= 1e-10) {
        return Err(usage(format!("--tol must be at least 1e-10, got {}", args.tol)));
    }
    let manifest = RunManifest::new("g-constant").param("tol", args.tol);
    let e = gamma0_expansion(2, args.tol)?;
    let closed = specfun::g_constant();
    let report = json!({
        "linear_coefficient": num(e.coefficients[0]),
        "quadratic_coefficient": num(e.coefficients[1]),
        "closed_form": num(closed),
        "difference": num(e.coefficients[1] - closed),
        "error_estimates": e.error_estimates.iter().map(|x| num(*x)).collect::<Vec<_>>(),
    });
    emit_report(args.output.out.as_deref(), &manifest, report, start.elapsed())
}
