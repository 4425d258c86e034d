//! End-to-end acceptance checks. Each criterion prints one `PASS`/`FAIL` line
//! with the measured figure of merit and wall time; the process exits nonzero
//! if any criterion fails. The runtime budgets assume an optimized test
//! profile.

use std::time::{Duration, Instant};

use qgamma::gamma_op::IsotypicFunction;
use qgamma::oracle::{
    brute_fourier, convolution_b_at_one, homogeneity_check, moment_check, strip_grid, Grid4D, HarmonicGaussian,
    NestedTolerance,
};
use qgamma::quat::Quaternion;
use qgamma::specfun::{gamma0_expansion, gamma_line, g_constant, h_n, k_n, CriticalStripPoint};
use qgamma::spectral::SpectralGrid;
use qgamma::su2::AngularMode;
use qgamma::trace::{fit_leading_term, residual_sweep, trace_direct, trace_spectral, TraceConfig};
use qgamma::{C64, TWO_PI_SQ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: String, elapsed: Duration, budget: Duration) -> bool {
    let within = elapsed <= budget;
    let ok = pass && within;
    let status = if ok { "PASS" } else { "FAIL" };
    let late = if within { "" } else { " (over budget)" };
    println!(
        "{status} criterion {id:>2} {name}: {detail} [{:.2}s of {:.0}s{late}]",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    ok
}

/// Probes with `0.2 < |y|_E ≤ max_norm`, drawn from a fixed seed.
fn probes(count: usize, max_norm: f64, seed: u64) -> Vec<Quaternion> {
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
        if n > 0.2 && n <= max_norm {
            out.push(q);
        }
    }
    out
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn criterion_01_unitarity() -> bool {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 0..=10 {
        for i in 0..=10_000 {
            let tau = -50.0 + 0.01 * i as f64;
            worst = worst.max((gamma_line(AngularMode(n), tau).norm() - 1.0).abs());
        }
    }
    report(
        1,
        "|γ_N(τ)| = 1",
        worst <= 1e-10,
        format!("max ||γ_N| - 1| = {worst:.2e} (N ≤ 10, |τ| ≤ 50)"),
        start.elapsed(),
        Duration::from_secs(5),
    )
}

fn criterion_02_functional_equation() -> bool {
    let start = Instant::now();
    let (mut fe, mut quad) = (0.0f64, 0.0f64);
    for s in strip_grid(20, 3.0) {
        for n in 0..=6 {
            let c = moment_check(AngularMode(n), s);
            fe = fe.max(c.functional_residual);
            quad = quad.max(c.quadrature_residual);
        }
    }
    report(
        2,
        "Gaussian-moment functional equation",
        fe <= 1e-10 && quad <= 1e-9,
        format!("functional residual {fe:.2e}, quadrature residual {quad:.2e} (20×20 strip, N ≤ 6)"),
        start.elapsed(),
        Duration::from_secs(10),
    )
}

fn criterion_03_self_dual_gaussian() -> bool {
    let start = Instant::now();
    let grid = Grid4D::standard();
    let omega = HarmonicGaussian::omega(1.0);
    let ys = probes(10, 1.0, 2024);
    let values = brute_fourier(&omega.sample(grid), &ys);
    let worst = ys
        .iter()
        .zip(&values)
        .map(|(y, v)| {
            let want = omega.eval(*y);
            (v - want).norm() / want.norm()
        })
        .fold(0.0f64, f64::max);
    report(
        3,
        "brute-force 𝓕ω = ω",
        worst <= 1e-3,
        format!("max relative error {worst:.2e} at 10 probes (L = 2, M = 33)"),
        start.elapsed(),
        Duration::from_secs(120),
    )
}

fn criterion_04_multiplier_vs_oracle() -> bool {
    let start = Instant::now();
    let grid4 = Grid4D::standard();
    let ys = probes(5, 1.0, 4);
    let mut worst = 0.0f64;
    for n in 0..=2 {
        // φ is the additive form of g; I(f) = g for f = I(g), so Γ(f) = 𝓕(I f) = 𝓕φ.
        let phi = HarmonicGaussian::new(AngularMode(n), 1.0, 0.5);
        let g = phi.multiplicative(SpectralGrid::standard()).unwrap();
        let gamma_f = g.inversion().gamma_transform().to_additive();
        let brute = brute_fourier(&phi.sample(grid4), &ys);
        let scale = brute.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (y, b) in ys.iter().zip(&brute) {
            worst = worst.max((gamma_f.eval(*y).unwrap() - b).norm() / scale);
        }
    }
    report(
        4,
        "Γ multiplier vs brute-force 𝓕",
        worst <= 1e-2,
        format!("max relative error {worst:.2e} (N ∈ {{0, 1, 2}}, 5 probes)"),
        start.elapsed(),
        Duration::from_secs(300),
    )
}

fn criterion_05_spectral_derivatives() -> bool {
    let start = Instant::now();
    let step = 1e-4;
    let (mut dh, mut dk) = (0.0f64, 0.0f64);
    for n in 0..=5 {
        let mode = AngularMode(n);
        for i in 0..=4000 {
            let tau = -20.0 + 0.01 * i as f64;
            let arg_diff = (gamma_line(mode, tau + step) / gamma_line(mode, tau - step)).arg() / (2.0 * step);
            dh = dh.max((h_n(mode, tau) - arg_diff).abs());
            let h_diff = (h_n(mode, tau + step) - h_n(mode, tau - step)) / (2.0 * step);
            dk = dk.max((k_n(mode, tau) + h_diff).abs());
        }
    }
    report(
        5,
        "h_N = (arg γ_N)', k_N = -h_N'",
        dh <= 1e-6 && dk <= 1e-6,
        format!("max |h - FD| = {dh:.2e}, max |k - FD| = {dk:.2e} (N ≤ 5, |τ| ≤ 20)"),
        start.elapsed(),
        Duration::from_secs(30),
    )
}

fn criterion_06_distribution_constant() -> bool {
    let start = Instant::now();
    let expansion = gamma0_expansion(2, 1e-6).unwrap();
    let c2 = expansion.coefficients[1];
    let want = 7.660_370_925_2;
    report(
        6,
        "ε²-coefficient of 2π²Γ₀(1-ε)",
        (c2 - want).abs() <= 1e-6 && (g_constant() - want).abs() < 1e-10,
        format!("c₂ = {c2:.10} (target {want}), |Δ| = {:.2e}", (c2 - want).abs()),
        start.elapsed(),
        Duration::from_secs(10),
    )
}

fn criterion_07_operator_identities() -> bool {
    let start = Instant::now();
    let grid = SpectralGrid::standard();
    let mut worst = 0.0f64;
    for n in 0..=3 {
        for (center, width) in [(0.0, 1.0), (0.3, 0.8), (-0.5, 1.5)] {
            let f = IsotypicFunction::gaussian(AngularMode(n), grid, center, width).unwrap();
            let sum = f.op_a().lin_comb(one(), &f.op_b(), one()).unwrap();
            worst = worst.max(sum.spectral_distance(&f.op_h()));
            let comm = f
                .op_a()
                .op_b()
                .lin_comb(C64::new(0.0, 1.0), &f.op_b().op_a(), C64::new(0.0, -1.0))
                .unwrap();
            worst = worst.max(comm.spectral_distance(&f.op_k()));
            worst = worst.max(f.inversion().op_h().spectral_distance(&f.op_h().inversion()));
            let ik = f.op_k().inversion().spectrum().scale(C64::new(-1.0, 0.0));
            worst = worst.max(f.inversion().op_k().spectrum().max_abs_diff(&ik));
        }
    }
    report(
        7,
        "H = A + B, i[B, A] = K, HI = IH, KI = -IK",
        worst <= 1e-6,
        format!("max spectral discrepancy {worst:.2e} (N ≤ 3, three Gaussian profiles)"),
        start.elapsed(),
        Duration::from_secs(60),
    )
}

fn criterion_08_homogeneity() -> bool {
    let start = Instant::now();
    let grid = SpectralGrid::standard();
    let mut worst = 0.0f64;
    for n in 0..=1 {
        let f = IsotypicFunction::gaussian(AngularMode(n), grid, 0.0, 1.0).unwrap();
        for tau in [0.0, 0.5, 1.0, 2.0] {
            let r = homogeneity_check(&f, CriticalStripPoint::on_line(tau)).unwrap();
            worst = worst.max(r.residual);
        }
    }
    report(
        8,
        "∫H(φ)F|x|^{-s} = H_N(s)∫φF|x|^{-s}",
        worst <= 1e-4,
        format!("max relative residual {worst:.2e} (N ∈ {{0, 1}}, τ ∈ {{0, 0.5, 1, 2}})"),
        start.elapsed(),
        Duration::from_secs(60),
    )
}

fn criterion_09_dual_route_b() -> bool {
    let start = Instant::now();
    let grid = SpectralGrid::standard();
    let mut worst = 0.0f64;
    for n in 0..=1 {
        let f = IsotypicFunction::gaussian(AngularMode(n), grid, 0.0, 1.0).unwrap();
        let spectral = f.op_b().value_at_one() / TWO_PI_SQ.sqrt();
        let conv = convolution_b_at_one(&f.to_additive(), NestedTolerance { radial: 1e-9, angular: 1e-11 }).unwrap();
        worst = worst.max((conv - spectral).norm() / spectral.norm());
    }
    report(
        9,
        "B(φ)(1) spectral vs convolution with G",
        worst <= 1e-3,
        format!("max relative error {worst:.2e} (N ∈ {{0, 1}})"),
        start.elapsed(),
        Duration::from_secs(120),
    )
}

fn criterion_10_truncated_trace() -> bool {
    let start = Instant::now();
    let grid = SpectralGrid::standard();

    let mut route = 0.0f64;
    for n in 0..=1 {
        let f = IsotypicFunction::gaussian(AngularMode(n), grid, 0.0, 1.0).unwrap();
        for lambda in [2.0, 4.0, 8.0] {
            let d = trace_direct(lambda, &f).unwrap();
            let s = trace_spectral(lambda, &f).unwrap();
            route = route.max((d - s).norm() / s.norm());
        }
    }

    let config = TraceConfig::standard();
    let rows = residual_sweep(&config).unwrap();
    let first: Vec<_> = rows.iter().filter(|r| r.lambda <= 16.0).collect();
    let decreasing = first.windows(2).all(|w| w[1].residual.norm() < w[0].residual.norm());
    let r16 = first.last().unwrap();
    let r16_ratio = r16.residual.norm() / r16.h_at_one.norm();

    let f = config.function();
    let f_one = f.value_at_one().re;
    let h_one = rows[0].h_at_one.re;
    let fit = fit_leading_term(&rows).unwrap();
    let slope_err = (fit.slope - f_one).abs() / f_one.abs();
    let intercept_err = (fit.intercept + h_one).abs() / h_one.abs();

    let pass = route <= 1e-4 && decreasing && r16_ratio <= 1e-3 && slope_err <= 5e-3 && intercept_err <= 1e-2;
    let residuals: Vec<String> = first.iter().map(|r| format!("{:.1e}", r.residual.norm())).collect();
    report(
        10,
        "truncated trace 2logΛ·f(1) - H(f)(1) + o(1)",
        pass,
        format!(
            "routes {route:.1e}; |R| over Λ = 2..16: [{}]; |R(16)|/|H(f)(1)| = {r16_ratio:.1e}; \
             slope err {slope_err:.1e}, intercept err {intercept_err:.1e}",
            residuals.join(", ")
        ),
        start.elapsed(),
        Duration::from_secs(180),
    )
}

fn main() {
    let criteria: [(u32, fn() -> bool); 10] = [
        (1, criterion_01_unitarity),
        (2, criterion_02_functional_equation),
        (3, criterion_03_self_dual_gaussian),
        (4, criterion_04_multiplier_vs_oracle),
        (5, criterion_05_spectral_derivatives),
        (6, criterion_06_distribution_constant),
        (7, criterion_07_operator_identities),
        (8, criterion_08_homogeneity),
        (9, criterion_09_dual_route_b),
        (10, criterion_10_truncated_trace),
    ];
    let mut failed = Vec::new();
    for (id, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(true) => {}
            Ok(false) => failed.push(id),
            Err(_) => {
                println!("FAIL criterion {id:>2}: computation aborted");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
