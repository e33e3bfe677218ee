use crate::error::{Error, Result};
use crate::glm::{irls_fit, sigmoid, Dataset, ParamVector};
use crate::rng::RngStream;

/// Draws `x_i ~ N(1, 1)` and `y_i ~ Bernoulli(sigmoid(β0 + β1 x_i))`.
pub fn simulate_dataset(beta_true: ParamVector, n: usize, rng: &mut RngStream) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidInput("sample size must be positive".into()));
    }
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let xi = rng.normal(1.0, 1.0);
        let yi = rng.bernoulli(sigmoid(beta_true.eta(xi)));
        x.push(xi);
        y.push(if yi { 1.0 } else { 0.0 });
    }
    Dataset::new(x, y)
}

fn mle_distance(x: &[f64], y: &[f64], target: ParamVector) -> f64 {
    let Ok(d) = Dataset::new(x.to_vec(), y.to_vec()) else {
        return f64::INFINITY;
    };
    match irls_fit(&d, 1e-10, 100) {
        Ok(fit) => (fit.beta_hat.beta0 - target.beta0).hypot(fit.beta_hat.beta1 - target.beta1),
        Err(_) => f64::INFINITY,
    }
}

/// Binary responses for covariates `x` whose maximum-likelihood estimate is
/// as close as a greedy search can bring it to `target`.
///
/// Responses start as Bernoulli draws at `target`; single flips that reduce
/// the distance between the fitted and target coefficients are applied until
/// none helps.
pub fn surrogate_with_mle(x: Vec<f64>, target: ParamVector, rng: &mut RngStream) -> Result<Dataset> {
    let mut y: Vec<f64> = x
        .iter()
        .map(|&xi| {
            if rng.bernoulli(sigmoid(target.eta(xi))) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let mut best = mle_distance(&x, &y, target);
    loop {
        let mut improved = None;
        for i in 0..y.len() {
            y[i] = 1.0 - y[i];
            let dist = mle_distance(&x, &y, target);
            y[i] = 1.0 - y[i];
            if dist < best && improved.is_none_or(|(_, d)| dist < d) {
                improved = Some((i, dist));
            }
        }
        match improved {
            Some((i, dist)) => {
                y[i] = 1.0 - y[i];
                best = dist;
            }
            None => break,
        }
    }
    if !best.is_finite() {
        return Err(Error::NonConvergence { iterations: 0 });
    }
    Dataset::new(x, y)
}

/// A stand-in for a 54-subject intelligence-score study: integer scores in
/// `4..=20` and responses tuned so the MLE is close to `(2.40, −0.32)`.
pub fn wais_like_surrogate(seed: u64) -> Result<Dataset> {
    let mut rng = RngStream::derive(seed, 0x5741_4953);
    let x: Vec<f64> = (0..54)
        .map(|_| rng.normal(11.0, 3.5).round().clamp(4.0, 20.0))
        .collect();
    surrogate_with_mle(x, ParamVector::new(2.40, -0.32), &mut rng)
}
