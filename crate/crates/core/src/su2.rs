//! The angular layer: unit quaternions `G₀ ≅ SU(2)`.
//!
//! Class functions on `G₀` depend only on the class angle `θ ∈ [0, π]`,
//! `cos θ = Re(g₀)`. Against normalized Haar measure the class angle has
//! density `(2/π) sin²θ`, which is how every angular integral in the crate
//! is realized. The irreducible characters are `χ_N(θ) = sin((N+1)θ)/sin θ`,
//! evaluated through the Chebyshev recurrence `U_N(cos θ)` so that the
//! endpoints need no special casing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::quadrature::gauss_legendre;
use crate::quat::Quaternion;
use crate::{Error, Result, C64};

/// Index `N ≥ 0` of the Peter–Weyl sector `W_N`; the representation `V_N` has dimension `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AngularMode(pub u32);

impl AngularMode {
    pub fn n(self) -> u32 {
        self.0
    }

    pub fn dimension(self) -> u32 {
        self.0 + 1
    }

    /// `N / 2`, the shift appearing in every Gamma-function argument.
    pub fn half(self) -> f64 {
        0.5 * self.0 as f64
    }

    /// `χ_N(θ)` for a class angle `θ ∈ [0, π]`.
    pub fn character(self, theta: f64) -> f64 {
        self.character_cos(theta.cos())
    }

    /// `χ_N` as a function of `cos θ = Re(g₀)`: the Chebyshev polynomial `U_N`.
    pub fn character_cos(self, c: f64) -> f64 {
        let mut prev = 1.0;
        if self.0 == 0 {
            return prev;
        }
        let mut cur = 2.0 * c;
        for _ in 1..self.0 {
            let next = 2.0 * c * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `χ_N(x/|x|^{1/4})` for a nonzero quaternion, extended constant along radial lines.
    pub fn character_at(self, x: Quaternion) -> Result<f64> {
        Ok(self.character_cos(x.class_cos()?))
    }

    /// The monomial `a^j b^{N-j}` of the basis of `V_N`, at a unit quaternion.
    pub fn monomial(self, j: u32, g0: Quaternion) -> Result<C64> {
        if j > self.0 {
            return Err(Error::InvalidArgument(format!(
                "monomial index {j} exceeds N = {}",
                self.0
            )));
        }
        let norm = g0.reduced_norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnit { norm });
        }
        let (a, b) = g0.complex_pair();
        Ok(a.powu(j) * b.powu(self.0 - j))
    }
}

impl From<u32> for AngularMode {
    fn from(n: u32) -> Self {
        AngularMode(n)
    }
}

/// Quadrature for class functions against `(2/π) sin²θ dθ` on `(0, π)`.
///
/// Nodes are Gauss–Legendre in `θ`; the weights already include the density,
/// so they sum to the total mass 1.
#[derive(Debug, Clone)]
pub struct AngularQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    cosines: Vec<f64>,
}

impl AngularQuadrature {
    pub fn gauss(n: usize) -> Self {
        let rule = gauss_legendre(n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (theta, w) in rule.mapped(0.0, PI) {
            let s = theta.sin();
            nodes.push(theta);
            weights.push(w * (2.0 / PI) * s * s);
        }
        let cosines = nodes.iter().map(|t| t.cos()).collect();
        Self {
            nodes,
            weights,
            cosines,
        }
    }

    /// Shared instance of [`AngularQuadrature::gauss`].
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<AngularQuadrature>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("angular cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(Self::gauss(n)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> C64>(&self, f: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| f(t) * w)
            .sum()
    }

    /// Integrates a function of `cos θ`.
    pub fn integrate_cos<F: Fn(f64) -> C64>(&self, f: F) -> C64 {
        self.cosines
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| f(c) * w)
            .sum()
    }

    /// `⟨χ_N, χ_M⟩` under this rule.
    pub fn character_inner(&self, n: AngularMode, m: AngularMode) -> f64 {
        self.cosines
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| n.character_cos(c) * m.character_cos(c) * w)
            .sum()
    }
}

/// Default absolute tolerance for [`angular_bessel`].
pub const ANGULAR_TOL: f64 = 1e-13;

const MAX_ANGULAR_NODES: usize = 1 << 14;

/// `∫_{G₀} λ(ρ g₀) χ_N(g₀) d*g₀ = (2/π) ∫₀^π e^{-4πiρ cos θ} χ_N(θ) sin²θ dθ`.
///
/// Gauss–Legendre in `θ`, doubling the node count until two successive
/// resolutions agree within `tol`. The result is real for even `N` and
/// purely imaginary for odd `N`.
pub fn angular_bessel(mode: AngularMode, rho: f64, tol: f64) -> Result<C64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::domain("angular_bessel", format!("rho = {rho}")));
    }
    let z = 4.0 * PI * rho;
    let bandwidth = z + mode.n() as f64 + 16.0;
    let mut n = (bandwidth.ceil() as usize).next_power_of_two().max(32);
    if 2 * n > MAX_ANGULAR_NODES {
        return Err(Error::Resolution {
            what: "angular Bessel integral",
            diff: f64::INFINITY,
            tol,
        });
    }
    let eval = |n: usize| {
        let quad = AngularQuadrature::cached(n);
        quad.integrate_cos(|c| C64::from_polar(mode.character_cos(c), -z * c))
    };
    let mut coarse = eval(n);
    loop {
        let fine = eval(2 * n);
        let diff = (fine - coarse).norm();
        if diff <= tol {
            return Ok(fine);
        }
        n *= 2;
        if 2 * n > MAX_ANGULAR_NODES {
            return Err(Error::Resolution {
                what: "angular Bessel integral",
                diff,
                tol,
            });
        }
        coarse = fine;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::trapezoid_weight;

    /// Dense trapezoid rule in θ: the integrand is smooth and its even
    /// periodic extension makes the rule spectrally accurate.
    fn trapezoid_oracle(mode: AngularMode, rho: f64, nodes: usize) -> C64 {
        let h = PI / (nodes - 1) as f64;
        (0..nodes)
            .map(|i| {
                let t = i as f64 * h;
                let s = t.sin();
                C64::from_polar(mode.character(t) * (2.0 / PI) * s * s, -4.0 * PI * rho * t.cos())
                    * trapezoid_weight(i, nodes, h)
            })
            .sum()
    }

    /// Power series for `J_n(z)`, adequate for `z ≲ 10`.
    fn bessel_j(n: u32, z: f64) -> f64 {
        let mut term = (0.5 * z).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..80 {
            term *= -(0.25 * z * z) / (k as f64 * (k + n) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn character_values() {
        for t in [0.0, 0.3, 1.0, 2.5, PI] {
            assert_eq!(AngularMode(0).character(t), 1.0);
            assert!((AngularMode(1).character(t) - 2.0 * t.cos()).abs() < 1e-14);
        }
        for n in 0..10u32 {
            assert!((AngularMode(n).character(0.0) - (n + 1) as f64).abs() < 1e-12);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((AngularMode(n).character(PI) - sign * (n + 1) as f64).abs() < 1e-10);
            let t = 0.77;
            let direct = ((n + 1) as f64 * t).sin() / t.sin();
            assert!((AngularMode(n).character(t) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_mass_and_orthonormality() {
        let q = AngularQuadrature::gauss(64);
        let mass: f64 = q.weights.iter().sum();
        assert!((mass - 1.0).abs() < 1e-12, "{mass}");
        for n in 0..=12 {
            for m in 0..=12 {
                let got = q.character_inner(AngularMode(n), AngularMode(m));
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((got - want).abs() < 1e-10, "<χ_{n}, χ_{m}> = {got}");
            }
        }
    }

    #[test]
    fn monomials() {
        let g = Quaternion::new(0.3, -0.4, 0.5, 0.5f64.sqrt());
        let g = g.scale(1.0 / g.euclidean_norm());
        assert_eq!(AngularMode(0).monomial(0, g).unwrap(), C64::new(1.0, 0.0));
        let s = 0.5f64.sqrt();
        let h = Quaternion::new(s, 0.0, s, 0.0);
        let v = AngularMode(2).monomial(1, h).unwrap();
        assert!((v - C64::new(0.5, 0.0)).norm() < 1e-15);
        for n in 0..6 {
            for j in 0..=n {
                assert!(AngularMode(n).monomial(j, g).unwrap().norm() <= 1.0 + 1e-14);
            }
        }
        assert!(matches!(
            AngularMode(1).monomial(0, Quaternion::new(2.0, 0.0, 0.0, 0.0)),
            Err(Error::NotUnit { .. })
        ));
        assert!(AngularMode(1).monomial(2, g).is_err());
    }

    #[test]
    fn angular_bessel_at_origin() {
        let v = angular_bessel(AngularMode(0), 0.0, ANGULAR_TOL).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-14);
        for n in 1..8 {
            let v = angular_bessel(AngularMode(n), 0.0, ANGULAR_TOL).unwrap();
            assert!(v.norm() < 1e-13, "N = {n}: {v}");
        }
    }

    #[test]
    fn angular_bessel_matches_dense_trapezoid() {
        let got = angular_bessel(AngularMode(0), 0.5, ANGULAR_TOL).unwrap();
        let want = trapezoid_oracle(AngularMode(0), 0.5, 100_001);
        assert!((got - want).norm() <= 1e-10, "{got} vs {want}");
        for (n, rho) in [(1u32, 0.37), (2, 1.3), (5, 4.0), (3, 20.0)] {
            let got = angular_bessel(AngularMode(n), rho, ANGULAR_TOL).unwrap();
            let want = trapezoid_oracle(AngularMode(n), rho, 100_001);
            assert!((got - want).norm() <= 1e-10, "N = {n}, ρ = {rho}: {got} vs {want}");
        }
    }

    #[test]
    fn angular_bessel_matches_bessel_closed_form() {
        // 2 (-i)^N (N+1) J_{N+1}(z)/z with z = 4πρ.
        let minus_i = C64::new(0.0, -1.0);
        for n in 0..5u32 {
            for rho in [0.05, 0.2, 0.6] {
                let z = 4.0 * PI * rho;
                let want = minus_i.powu(n) * (2.0 * (n + 1) as f64 * bessel_j(n + 1, z) / z);
                let got = angular_bessel(AngularMode(n), rho, ANGULAR_TOL).unwrap();
                assert!((got - want).norm() < 1e-11, "N = {n}, ρ = {rho}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn angular_bessel_parity_bound_and_decay() {
        for n in 0..6u32 {
            for rho in [0.1, 0.9, 3.3, 12.0] {
                let v = angular_bessel(AngularMode(n), rho, ANGULAR_TOL).unwrap();
                if n % 2 == 0 {
                    assert!(v.im.abs() < 1e-13);
                } else {
                    assert!(v.re.abs() < 1e-13);
                }
                assert!(v.norm() <= (n + 1) as f64);
            }
        }
        for n in 0..=4u32 {
            let near = angular_bessel(AngularMode(n), 1.0, ANGULAR_TOL).unwrap().norm();
            let far = angular_bessel(AngularMode(n), 50.0, ANGULAR_TOL).unwrap().norm();
            assert!(far < near, "N = {n}: |J(50)| = {far} ≥ |J(1)| = {near}");
        }
    }

    #[test]
    fn angular_bessel_rejects_negative_radius() {
        assert!(angular_bessel(AngularMode(0), -1.0, ANGULAR_TOL).is_err());
        assert!(angular_bessel(AngularMode(0), f64::NAN, ANGULAR_TOL).is_err());
    }

    #[test]
    fn resolution_failure_is_reported() {
        let err = angular_bessel(AngularMode(0), 1e6, ANGULAR_TOL).unwrap_err();
        assert!(matches!(err, Error::Resolution { .. }));
    }
}
