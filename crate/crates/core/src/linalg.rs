//! Closed-form 2×2 linear algebra and bivariate normal helpers.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Plain 2-vector.
pub type Vec2 = [f64; 2];

/// A 2×2 matrix stored row-major: `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn diag(d0: f64, d1: f64) -> Self {
        Self::new(d0, 0.0, 0.0, d1)
    }

    pub const fn symmetric(a: f64, off: f64, d: f64) -> Self {
        Self::new(a, off, off, d)
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn to_rows(self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn transpose(self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// `vᵀ M v`.
    pub fn quad_form(self, v: Vec2) -> f64 {
        let mv = self.mul_vec(v);
        v[0] * mv[0] + v[1] * mv[1]
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn is_symmetric(self, tol: f64) -> bool {
        (self.b - self.c).abs() <= tol * (1.0 + self.b.abs().max(self.c.abs()))
    }

    /// Largest absolute entry.
    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// Inverse of a symmetric positive-definite matrix, via its Cholesky factor.
    pub fn inverse_spd(self) -> Result<Self> {
        let l = cholesky_factor(self)?;
        // L⁻¹ is lower-triangular; M⁻¹ = L⁻ᵀ L⁻¹.
        let i00 = 1.0 / l.a;
        let i11 = 1.0 / l.d;
        let i10 = -l.c * i00 * i11;
        let linv = Matrix2::new(i00, 0.0, i10, i11);
        let inv = linv.transpose() * linv;
        Ok(Matrix2::symmetric(inv.a, 0.5 * (inv.b + inv.c), inv.d))
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Lower-triangular `L` with `L Lᵀ = m`. Only the lower triangle of `m` is read.
pub fn cholesky_factor(m: Matrix2) -> Result<Matrix2> {
    if !m.is_finite() || !(m.a > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let l00 = m.a.sqrt();
    let l10 = m.c / l00;
    let pivot = m.d - l10 * l10;
    if !(pivot > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(Matrix2::new(l00, 0.0, l10, pivot.sqrt()))
}

/// Solves `m w = v` for symmetric positive-definite `m`.
pub fn solve_spd(m: Matrix2, v: Vec2) -> Result<Vec2> {
    let l = cholesky_factor(m)?;
    Ok(solve_with_factor(l, v))
}

/// Forward then back substitution against a Cholesky factor.
pub(crate) fn solve_with_factor(l: Matrix2, v: Vec2) -> Vec2 {
    let z0 = v[0] / l.a;
    let z1 = (v[1] - l.c * z0) / l.d;
    let w1 = z1 / l.d;
    let w0 = (z0 - l.c * w1) / l.a;
    [w0, w1]
}

/// `mean + L z` with `z` two independent standard normal draws.
pub fn mvn_sample(mean: Vec2, cov_chol: Matrix2, rng: &mut RngStream) -> Vec2 {
    let z0 = rng.standard_normal();
    let z1 = rng.standard_normal();
    [
        mean[0] + cov_chol.a * z0 + cov_chol.b * z1,
        mean[1] + cov_chol.c * z0 + cov_chol.d * z1,
    ]
}

/// Log-density of the bivariate normal `N(mean, cov)` at `v`.
pub fn mvn_logpdf(v: Vec2, mean: Vec2, cov: Matrix2) -> Result<f64> {
    let l = cholesky_factor(cov)?;
    Ok(mvn_logpdf_with_factor(v, mean, l))
}

pub(crate) fn mvn_logpdf_with_factor(v: Vec2, mean: Vec2, l: Matrix2) -> f64 {
    let r0 = v[0] - mean[0];
    let r1 = v[1] - mean[1];
    // Whitened residual L⁻¹ r.
    let z0 = r0 / l.a;
    let z1 = (r1 - l.c * z0) / l.d;
    let half_log_det = l.a.ln() + l.d.ln();
    -(2.0 * PI).ln() - half_log_det - 0.5 * (z0 * z0 + z1 * z1)
}
