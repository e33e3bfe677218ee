//! Chain summaries and the dual-start convergence check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::ParamVector;
use crate::linalg::Matrix2;
use crate::mh::ChainTrace;

/// Default gap tolerance, in parameter units, for [`dual_start_check`].
pub const DEFAULT_DUAL_START_TOL: f64 = 0.05;
/// Default secondary start iteration.
pub const DEFAULT_SECOND_START: usize = 1500;

/// Fraction of accepted moves among iterations `window` (0-based, half-open).
/// The whole trace is used when `window` is `None`.
pub fn acceptance_rate(trace: &ChainTrace, window: Option<std::ops::Range<usize>>) -> Result<f64> {
    let window = window.unwrap_or(0..trace.len());
    if window.is_empty() || window.end > trace.len() {
        return Err(Error::EmptyWindow);
    }
    let k = trace.flags_per_iteration;
    let flags = &trace.accepted[window.start * k..window.end * k];
    Ok(flags.iter().filter(|&&a| a).count() as f64 / flags.len() as f64)
}

/// Running means of each coordinate from one start iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSeries {
    /// 1-based iteration the running mean begins at.
    pub start: usize,
    /// `means[k]` is the mean of draws `start ..= start + k`.
    pub means: Vec<[f64; 2]>,
}

impl StartSeries {
    /// Running mean at 1-based iteration `t`, if `t >= start`.
    pub fn at(&self, t: usize) -> Option<[f64; 2]> {
        t.checked_sub(self.start).and_then(|k| self.means.get(k).copied())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeMeanSeries {
    pub len: usize,
    pub series: Vec<StartSeries>,
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Running means of `draws` from each 1-based start iteration.
pub fn cumulative_mean(draws: &[ParamVector], starts: &[usize]) -> Result<CumulativeMeanSeries> {
    let mut series = Vec::with_capacity(starts.len());
    for &start in starts {
        if start == 0 || start > draws.len() {
            return Err(Error::InvalidInput(format!(
                "start {start} outside 1..={}",
                draws.len()
            )));
        }
        let mut acc = [CompensatedSum::default(); 2];
        let means = draws[start - 1..]
            .iter()
            .enumerate()
            .map(|(k, d)| {
                acc[0].add(d.beta0);
                acc[1].add(d.beta1);
                let n = (k + 1) as f64;
                [acc[0].value() / n, acc[1].value() / n]
            })
            .collect();
        series.push(StartSeries { start, means });
    }
    Ok(CumulativeMeanSeries {
        len: draws.len(),
        series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualStartResult {
    pub converged: bool,
    /// First iteration from which every pairwise gap stays within tolerance.
    pub crossing_iteration: Option<usize>,
    /// Largest gap at the final iteration.
    pub final_gap: f64,
}

/// Largest coordinate-wise gap between any two start series at iteration `t`.
/// Only series that have begun by `t` take part.
pub fn max_gap(series: &CumulativeMeanSeries, t: usize) -> f64 {
    let values: Vec<[f64; 2]> = series.series.iter().filter_map(|s| s.at(t)).collect();
    let mut gap: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            gap = gap.max((a[0] - b[0]).abs()).max((a[1] - b[1]).abs());
        }
    }
    gap
}

/// Formalizes "the running means from different starts coincide": converged
/// when, from some iteration on (no earlier than the latest start), all
/// pairwise gaps stay within `tol` to the end of the chain.
pub fn dual_start_check(series: &CumulativeMeanSeries, tol: f64) -> Result<DualStartResult> {
    if series.series.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: series.series.len(),
        });
    }
    let first = series.series.iter().map(|s| s.start).max().unwrap_or(1);
    let mut crossing = None;
    for t in (first..=series.len).rev() {
        if max_gap(series, t) <= tol {
            crossing = Some(t);
        } else {
            break;
        }
    }
    Ok(DualStartResult {
        converged: crossing.is_some(),
        crossing_iteration: crossing,
        final_gap: max_gap(series, series.len),
    })
}

fn post_burn_in(draws: &[ParamVector], burn_in: usize) -> Result<&[ParamVector]> {
    let rest = draws.get(burn_in..).unwrap_or(&[]);
    if rest.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: rest.len(),
        });
    }
    Ok(rest)
}

/// Unbiased two-pass covariance of the draws after `burn_in`.
pub fn sample_covariance(draws: &[ParamVector], burn_in: usize) -> Result<Matrix2> {
    let rest = post_burn_in(draws, burn_in)?;
    let n = rest.len() as f64;
    // Shift by the first draw so constant chains give exactly zero.
    let origin = rest[0];
    let m0 = rest.iter().map(|d| d.beta0 - origin.beta0).sum::<f64>() / n;
    let m1 = rest.iter().map(|d| d.beta1 - origin.beta1).sum::<f64>() / n;
    let (mut c00, mut c01, mut c11) = (0.0, 0.0, 0.0);
    for d in rest {
        let r0 = d.beta0 - origin.beta0 - m0;
        let r1 = d.beta1 - origin.beta1 - m1;
        c00 += r0 * r0;
        c01 += r0 * r1;
        c11 += r1 * r1;
    }
    Ok(Matrix2::symmetric(c00 / (n - 1.0), c01 / (n - 1.0), c11 / (n - 1.0)))
}

/// Correlation implied by a covariance matrix; zero when either variance is.
pub fn correlation(cov: Matrix2) -> f64 {
    let denom = (cov.a * cov.d).sqrt();
    if denom > 0.0 {
        cov.b / denom
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub mean: ParamVector,
    pub variance: [f64; 2],
    pub replications: usize,
}

/// Mean and unbiased variance across replicated point estimates.
pub fn replicate_summary(estimates: &[ParamVector]) -> Result<ReplicationSummary> {
    if estimates.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: estimates.len(),
        });
    }
    let cov = sample_covariance(estimates, 0)?;
    let n = estimates.len() as f64;
    let mean = ParamVector::new(
        estimates.iter().map(|e| e.beta0).sum::<f64>() / n,
        estimates.iter().map(|e| e.beta1).sum::<f64>() / n,
    );
    Ok(ReplicationSummary {
        mean,
        variance: [cov.a, cov.d],
        replications: estimates.len(),
    })
}
