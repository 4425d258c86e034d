//! Quaternion arithmetic in the basis `{1, i, j, k}`.
//!
//! Besides the algebra this module carries the two scalars the analysis is
//! built on: the reduced norm `n(x) = x x̄` and the module `|x| = n(x)²`,
//! which is the factor by which multiplication by `x` scales additive Haar
//! measure on `ℍ ≅ ℝ⁴`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result, C64};

/// `2×2` complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn real(x0: f64) -> Self {
        Self::new(x0, 0.0, 0.0, 0.0)
    }

    /// Builds `a + b·j` from the two complex coordinates.
    pub fn from_complex_pair(a: C64, b: C64) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    /// Complex coordinates `(a, b)` with `x = a + b·j`, `a = x0 + x1 i`, `b = x2 + x3 i`.
    pub fn complex_pair(&self) -> (C64, C64) {
        (C64::new(self.x0, self.x1), C64::new(self.x2, self.x3))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(c * self.x0, c * self.x1, c * self.x2, c * self.x3)
    }

    /// `n(x) = x x̄ = x0² + x1² + x2² + x3²`.
    pub fn reduced_norm(&self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Euclidean length `√n(x)`; this is the polar radius `r = |x|^{1/4}`.
    pub fn euclidean_norm(&self) -> f64 {
        self.reduced_norm().sqrt()
    }

    /// The module `|x| = n(x)²`.
    pub fn module(&self) -> f64 {
        let n = self.reduced_norm();
        n * n
    }

    /// Multiplicative inverse `x̄ / n(x)`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.reduced_norm();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    /// Polar decomposition `x = r·g₀` with `r > 0` and `n(g₀) = 1`.
    pub fn polar(&self) -> Result<PolarForm> {
        let r = self.euclidean_norm();
        if r == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(PolarForm {
            r,
            unit: self.scale(1.0 / r),
        })
    }

    /// Cosine of the SU(2) class angle of `x/|x|^{1/4}`, i.e. `Re(g₀)`.
    pub fn class_cos(&self) -> Result<f64> {
        let r = self.euclidean_norm();
        if r == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok((self.x0 / r).clamp(-1.0, 1.0))
    }

    /// The additive character `λ(x) = e^{-2πi(x + x̄)} = e^{-4πi·x0}`.
    pub fn character_lambda(&self) -> C64 {
        C64::from_polar(1.0, -4.0 * PI * self.x0)
    }

    /// Left and right regular representations `(L_x, R_x)`.
    ///
    /// `L_x = [[a, b], [-b̄, ā]]` is the action `α(y) ↦ α(yx)` on the linear
    /// forms `A, B`; `R_x = [[a, -b̄], [b, ā]]` is right multiplication in the
    /// basis `{1, j}`. Both have determinant `n(x)`.
    pub fn matrix_reps(&self) -> (Mat2, Mat2) {
        let (a, b) = self.complex_pair();
        let left = [[a, b], [-b.conj(), a.conj()]];
        let right = [[a, -b.conj()], [b, a.conj()]];
        (left, right)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
            p.x0 * q.x1 + p.x1 * q.x0 + p.x2 * q.x3 - p.x3 * q.x2,
            p.x0 * q.x2 - p.x1 * q.x3 + p.x2 * q.x0 + p.x3 * q.x1,
            p.x0 * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.x0,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.x0 + q.x0, self.x1 + q.x1, self.x2 + q.x2, self.x3 + q.x3)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.x0 - q.x0, self.x1 - q.x1, self.x2 - q.x2, self.x3 - q.x3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.x0, self.x1, self.x2, self.x3)
    }
}

/// `g = r·g₀` with `r = n(g)^{1/2} = |g|^{1/4}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarForm {
    pub r: f64,
    pub unit: Quaternion,
}

impl PolarForm {
    pub fn reconstruct(&self) -> Quaternion {
        self.unit.scale(self.r)
    }

    /// `log|g| = 4 log r`, the coordinate of the multiplicative radial line.
    pub fn log_module(&self) -> f64 {
        4.0 * self.r.ln()
    }
}

pub fn mat2_mul(p: &Mat2, q: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    out
}

pub fn mat2_det(m: &Mat2) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}
