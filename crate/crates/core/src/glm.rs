//! Bernoulli-logit model mathematics and the IRLS maximum-likelihood fitter.
//!
//! The model is `logit P(y_i = 1) = β0 + β1 x_i` with design matrix
//! `X = (1, x)`. Log-densities are un-normalized: constants that depend only
//! on the prior are dropped, which every consumer tolerates because samplers
//! only ever use differences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_factor, solve_with_factor, Matrix2, Vec2};

/// Norm beyond which IRLS iterates are declared divergent.
pub const DIVERGENCE_BOUND: f64 = 1e3;

/// Paired covariate/response observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<f64>,
    sum_y: f64,
    sum_xy: f64,
}

impl Dataset {
    /// Validates and builds a dataset. Responses must be exactly 0 or 1.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInput(
                "dataset must contain at least one observation".into(),
            ));
        }
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "covariate length {} differs from response length {}",
                x.len(),
                y.len()
            )));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonNumericValue {
                row: i + 1,
                column: "x".into(),
            });
        }
        if let Some(i) = y.iter().position(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::NonBinaryResponse { row: i + 1 });
        }
        let sum_y = y.iter().sum();
        let sum_xy = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        Ok(Self { x, y, sum_y, sum_xy })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Fraction of positive responses, `ȳ`.
    pub fn mean_response(&self) -> f64 {
        self.sum_y / self.len() as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }
}

/// Regression coefficients `(β0, β1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamVector {
    pub beta0: f64,
    pub beta1: f64,
}

impl ParamVector {
    pub const ZERO: ParamVector = ParamVector::new(0.0, 0.0);

    pub const fn new(beta0: f64, beta1: f64) -> Self {
        Self { beta0, beta1 }
    }

    pub fn to_array(self) -> Vec2 {
        [self.beta0, self.beta1]
    }

    pub fn get(self, coord: usize) -> f64 {
        match coord {
            0 => self.beta0,
            1 => self.beta1,
            _ => panic!("coordinate {coord} out of range"),
        }
    }

    /// Copy with one coordinate replaced.
    pub fn with(self, coord: usize, value: f64) -> Self {
        match coord {
            0 => Self::new(value, self.beta1),
            1 => Self::new(self.beta0, value),
            _ => panic!("coordinate {coord} out of range"),
        }
    }

    pub fn norm(self) -> f64 {
        self.beta0.hypot(self.beta1)
    }

    pub fn is_finite(self) -> bool {
        self.beta0.is_finite() && self.beta1.is_finite()
    }

    /// Linear predictor `β0 + β1 x`.
    #[inline]
    pub fn eta(self, x: f64) -> f64 {
        self.beta0 + self.beta1 * x
    }
}

impl From<Vec2> for ParamVector {
    fn from(v: Vec2) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<ParamVector> for Vec2 {
    fn from(p: ParamVector) -> Self {
        p.to_array()
    }
}

/// Normal prior `β ~ N(μ, Σ)`, or the improper flat prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    mu: Vec2,
    covariance: Option<Matrix2>,
    precision: Matrix2,
}

impl PriorSpec {
    pub fn new(mu: Vec2, sigma: Matrix2) -> Result<Self> {
        if !mu[0].is_finite() || !mu[1].is_finite() {
            return Err(Error::InvalidInput("prior mean must be finite".into()));
        }
        if !sigma.is_symmetric(1e-12) {
            return Err(Error::InvalidInput("prior covariance must be symmetric".into()));
        }
        let precision = sigma.inverse_spd()?;
        Ok(Self {
            mu,
            covariance: Some(sigma),
            precision,
        })
    }

    /// Independent `N(μ_j, σ_j²)` priors.
    pub fn independent(mu: Vec2, variances: Vec2) -> Result<Self> {
        Self::new(mu, Matrix2::diag(variances[0], variances[1]))
    }

    /// Improper flat prior: zero precision, log-density identically zero.
    pub fn flat() -> Self {
        Self {
            mu: [0.0, 0.0],
            covariance: None,
            precision: Matrix2::ZERO,
        }
    }

    pub fn mu(&self) -> Vec2 {
        self.mu
    }

    /// `None` for the flat prior.
    pub fn covariance(&self) -> Option<Matrix2> {
        self.covariance
    }

    pub fn precision(&self) -> Matrix2 {
        self.precision
    }
}

impl Default for PriorSpec {
    /// `μ = 0`, `Σ = diag(100, 100)`.
    fn default() -> Self {
        Self::independent([0.0, 0.0], [100.0, 100.0]).expect("default prior is valid")
    }
}

/// Maximum-likelihood fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleResult {
    pub beta_hat: ParamVector,
    /// Inverse observed information at `beta_hat`.
    pub covariance: Matrix2,
    pub iterations: usize,
    pub converged: bool,
}

impl MleResult {
    pub fn standard_errors(&self) -> Vec2 {
        [self.covariance.a.sqrt(), self.covariance.d.sqrt()]
    }
}

/// Logistic function, evaluated without overflow for any finite `z`.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)`.
#[inline]
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

pub fn log_likelihood(d: &Dataset, b: ParamVector) -> f64 {
    let penalty: f64 = d.x.iter().map(|&x| softplus(b.eta(x))).sum();
    b.beta0 * d.sum_y + b.beta1 * d.sum_xy - penalty
}

pub fn log_prior(b: ParamVector, p: &PriorSpec) -> f64 {
    let r = [b.beta0 - p.mu[0], b.beta1 - p.mu[1]];
    -0.5 * p.precision.quad_form(r)
}

pub fn log_posterior(d: &Dataset, b: ParamVector, p: &PriorSpec) -> f64 {
    log_likelihood(d, b) + log_prior(b, p)
}

/// Gradient of the log-posterior in `b`.
pub fn score_gradient(d: &Dataset, b: ParamVector, p: &PriorSpec) -> Vec2 {
    let (mut g0, mut g1) = (0.0, 0.0);
    for (x, y) in d.iter() {
        let r = y - sigmoid(b.eta(x));
        g0 += r;
        g1 += r * x;
    }
    let r = [b.beta0 - p.mu[0], b.beta1 - p.mu[1]];
    let pr = p.precision.mul_vec(r);
    [g0 - pr[0], g1 - pr[1]]
}

/// Likelihood part of the information matrix, `Xᵀ diag(h) X`.
fn likelihood_information(d: &Dataset, b: ParamVector) -> Matrix2 {
    let (mut s00, mut s01, mut s11) = (0.0, 0.0, 0.0);
    for &x in &d.x {
        let pi = sigmoid(b.eta(x));
        let h = pi * (1.0 - pi);
        s00 += h;
        s01 += h * x;
        s11 += h * x * x;
    }
    Matrix2::symmetric(s00, s01, s11)
}

/// `H(β) = Xᵀ diag(h_i) X + Σ⁻¹` with `h_i = π_i (1 − π_i)`.
pub fn fisher_information(d: &Dataset, b: ParamVector, p: &PriorSpec) -> Matrix2 {
    likelihood_information(d, b) + p.precision
}

/// Log-posterior together with its information matrix, from one pass over the data.
pub fn log_posterior_and_information(d: &Dataset, b: ParamVector, p: &PriorSpec) -> (f64, Matrix2) {
    let (mut pen, mut s00, mut s01, mut s11) = (0.0, 0.0, 0.0, 0.0);
    for &x in &d.x {
        let z = b.eta(x);
        // Share one exponential between softplus and h = e^{-|z|} / (1 + e^{-|z|})².
        let e = (-z.abs()).exp();
        pen += z.max(0.0) + e.ln_1p();
        let h = e / ((1.0 + e) * (1.0 + e));
        s00 += h;
        s01 += h * x;
        s11 += h * x * x;
    }
    let ll = b.beta0 * d.sum_y + b.beta1 * d.sum_xy - pen;
    (ll + log_prior(b, p), Matrix2::symmetric(s00, s01, s11) + p.precision)
}

/// Newton–Raphson (IRLS) on the log-likelihood, started at the origin.
///
/// Converges when the gradient norm is at most `tol` and the last Newton step
/// was small. Separated data never satisfies the second condition because the
/// iterates drift off to infinity with O(1) steps.
pub fn irls_fit(d: &Dataset, tol: f64, max_iter: usize) -> Result<MleResult> {
    if d.len() < 2 {
        return Err(Error::InvalidInput("IRLS needs at least two observations".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let flat = PriorSpec::flat();
    let mut b = ParamVector::ZERO;
    let mut ll = log_likelihood(d, b);
    let mut last_step = f64::INFINITY;

    for iter in 0..=max_iter {
        let g = score_gradient(d, b, &flat);
        let info = likelihood_information(d, b);
        // Singular at the origin means a degenerate design; singular later means the
        // fitted probabilities saturated on the way to infinity.
        let singular = |iter: usize| {
            if iter == 0 {
                Error::SingularInformation
            } else {
                Error::NonConvergence { iterations: iter }
            }
        };
        if !(info.det() > 1e-12 * info.trace() * info.trace()) {
            return Err(singular(iter));
        }
        let l = cholesky_factor(info).map_err(|_| singular(iter))?;
        let gnorm = g[0].hypot(g[1]);
        if gnorm <= tol && last_step <= 1e-4 * (1.0 + b.norm()) {
            let covariance = info.inverse_spd().map_err(|_| singular(iter))?;
            return Ok(MleResult {
                beta_hat: b,
                covariance,
                iterations: iter,
                converged: true,
            });
        }
        if iter == max_iter {
            break;
        }

        let step = solve_with_factor(l, g);
        let mut scale = 1.0;
        let mut next = ParamVector::new(b.beta0 + step[0], b.beta1 + step[1]);
        let mut next_ll = log_likelihood(d, next);
        // Step-halving guards against the rare Newton overshoot.
        while next_ll < ll - 1e-12 * ll.abs().max(1.0) && scale > 1e-6 {
            scale *= 0.5;
            next = ParamVector::new(b.beta0 + scale * step[0], b.beta1 + scale * step[1]);
            next_ll = log_likelihood(d, next);
        }
        last_step = (scale * step[0]).hypot(scale * step[1]);
        b = next;
        ll = next_ll;
        if !b.is_finite() || b.norm() > DIVERGENCE_BOUND {
            return Err(Error::NonConvergence { iterations: iter + 1 });
        }
    }
    Err(Error::NonConvergence { iterations: max_iter })
}

/// Mode of the log-posterior, by damped Newton from `start`.
pub fn posterior_mode(d: &Dataset, p: &PriorSpec, start: ParamVector) -> Result<ParamVector> {
    let mut b = start;
    let mut lp = log_posterior(d, b, p);
    for _ in 0..200 {
        let g = score_gradient(d, b, p);
        let info = fisher_information(d, b, p);
        let step = crate::linalg::solve_spd(info, g).map_err(|_| Error::SingularInformation)?;
        let mut scale = 1.0;
        let mut next = ParamVector::new(b.beta0 + step[0], b.beta1 + step[1]);
        let mut next_lp = log_posterior(d, next, p);
        while next_lp < lp && scale > 1e-8 {
            scale *= 0.5;
            next = ParamVector::new(b.beta0 + scale * step[0], b.beta1 + scale * step[1]);
            next_lp = log_posterior(d, next, p);
        }
        if next_lp < lp {
            break;
        }
        let moved = (next.beta0 - b.beta0).hypot(next.beta1 - b.beta1);
        b = next;
        lp = next_lp;
        if moved <= 1e-12 * (1.0 + b.norm()) {
            break;
        }
    }
    if !b.is_finite() || b.norm() > DIVERGENCE_BOUND {
        return Err(Error::NonConvergence { iterations: 200 });
    }
    Ok(b)
}
