//! Stochastic Approximation Monte Carlo over energy bands.
//!
//! The energy `U(β) = −log ψ(β)` (with `ψ` the un-normalized posterior) is
//! cut into bands `E_1 … E_m`. Each band carries a log-weight `θ_i`; the chain
//! targets `ψ(β) / e^{θ_J(β)}` and after every move pushes `θ` towards the
//! values that make the band occupation frequencies match a desired
//! distribution `π`. Band indices are 0-based throughout: index 0 is the
//! lowest-energy band.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::{irls_fit, posterior_mode, Dataset, ParamVector, PriorSpec};
use crate::linalg::{mvn_sample, Matrix2};
use crate::mh::{mh_accept, ChainTrace, Target};
use crate::rng::RngStream;

/// Bound of the box that `θ` is clipped to.
pub const THETA_BOUND: f64 = 1e10;
/// Minimum effective sample size accepted by [`samc_estimate`].
pub const MIN_WEIGHT_ESS: f64 = 10.0;

/// Gain sequence `γ_t = t0 / max(t0, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSchedule {
    pub t0: f64,
    /// Exponent for which `Σ γ_t^ζ` converges; not used in the update itself.
    pub zeta: f64,
}

impl GainSchedule {
    pub fn new(t0: f64, zeta: f64) -> Result<Self> {
        if !(t0 > 1.0) || !t0.is_finite() {
            return Err(Error::InvalidInput("gain t0 must exceed 1".into()));
        }
        if !(zeta > 1.0 && zeta <= 2.0) {
            return Err(Error::InvalidInput("gain exponent zeta must lie in (1, 2]".into()));
        }
        Ok(Self { t0, zeta })
    }
}

impl Default for GainSchedule {
    fn default() -> Self {
        Self { t0: 1000.0, zeta: 1.5 }
    }
}

pub fn gain(t: u64, sched: &GainSchedule) -> f64 {
    sched.t0 / sched.t0.max(t as f64)
}

/// Increasing energy cut points `u_1 < … < u_{m−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyPartition {
    boundaries: Vec<f64>,
}

impl EnergyPartition {
    pub fn new(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidInput("energy boundaries must be finite".into()));
        }
        if boundaries.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput(
                "energy boundaries must be strictly increasing".into(),
            ));
        }
        Ok(Self { boundaries })
    }

    /// Number of bands.
    pub fn regions(&self) -> usize {
        self.boundaries.len() + 1
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Band of energy `u`: bands are `(u_{i−1}, u_i]`, with the first closed
    /// below at −∞ and the last open above.
    pub fn band_of(&self, u: f64) -> Result<usize> {
        if !u.is_finite() {
            return Err(Error::InvalidInput("energy must be finite".into()));
        }
        Ok(self.boundaries.partition_point(|&b| b < u))
    }
}

/// Equally spaced cut points on `[U_min, U_min + width]`, where `U_min` is the
/// energy at the posterior mode (located from the IRLS fit).
pub fn make_partition(d: &Dataset, p: &PriorSpec, m: usize, width: f64) -> Result<EnergyPartition> {
    if m < 2 {
        return Err(Error::InvalidInput("partition needs at least two regions".into()));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidInput("partition width must be positive".into()));
    }
    let mle = irls_fit(d, 1e-8, 100)?;
    let mode = posterior_mode(d, p, mle.beta_hat)?;
    let u_min = -crate::glm::log_posterior(d, mode, p);
    partition_from_minimum(u_min, m, width)
}

pub fn partition_from_minimum(u_min: f64, m: usize, width: f64) -> Result<EnergyPartition> {
    let step = width / (m - 1) as f64;
    EnergyPartition::new((1..m).map(|k| u_min + step * k as f64).collect())
}

/// Band index of `b`.
pub fn region_index<T: Target + ?Sized>(b: ParamVector, part: &EnergyPartition, target: &T) -> Result<usize> {
    let u = -target.log_density(b);
    if !u.is_finite() {
        return Err(Error::NonFiniteEnergy {
            beta0: b.beta0,
            beta1: b.beta1,
        });
    }
    part.band_of(u)
}

/// Mutable state of one SAMC run.
#[derive(Debug, Clone, PartialEq)]
pub struct SamcState {
    pub theta: Vec<f64>,
    /// Bands from which a proposal has been drawn.
    pub visited: BTreeSet<usize>,
    pub pi: Vec<f64>,
    pub t: u64,
    pub current: ParamVector,
    pub current_log_density: f64,
    pub current_region: usize,
    pub schedule: GainSchedule,
    /// Random-walk proposal standard deviation; 1 gives the identity covariance.
    pub proposal_sd: f64,
    pub clip_events: u64,
}

impl SamcState {
    pub fn new<T: Target + ?Sized>(
        init: ParamVector,
        part: &EnergyPartition,
        schedule: GainSchedule,
        pi: Vec<f64>,
        target: &T,
    ) -> Result<Self> {
        validate_pi(&pi, part.regions())?;
        let lp = target.log_density(init);
        let region = region_index(init, part, target)?;
        Ok(Self {
            theta: vec![0.0; part.regions()],
            visited: BTreeSet::new(),
            pi,
            t: 0,
            current: init,
            current_log_density: lp,
            current_region: region,
            schedule,
            proposal_sd: 1.0,
            clip_events: 0,
        })
    }
}

/// Uniform desired distribution over `m` bands.
pub fn uniform_pi(m: usize) -> Vec<f64> {
    vec![1.0 / m as f64; m]
}

fn validate_pi(pi: &[f64], m: usize) -> Result<()> {
    if pi.len() != m {
        return Err(Error::InvalidInput(format!(
            "desired distribution has {} entries for {m} regions",
            pi.len()
        )));
    }
    // A single band must carry all the mass.
    let open = |v: f64| if m == 1 { v == 1.0 } else { v > 0.0 && v < 1.0 };
    if !pi.iter().all(|&v| open(v)) {
        return Err(Error::InvalidInput("desired probabilities must lie in (0, 1)".into()));
    }
    let total: f64 = pi.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("desired probabilities sum to {total}")));
    }
    Ok(())
}

/// What happened during one SAMC iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamcStepInfo {
    pub accepted: bool,
    /// `None` when the proposal had zero target density.
    pub proposed_region: Option<usize>,
}

/// One SAMC iteration: weighted MH move, then the `θ` update.
pub fn samc_step<T: Target + ?Sized>(
    state: &mut SamcState,
    part: &EnergyPartition,
    target: &T,
    rng: &mut RngStream,
) -> Result<SamcStepInfo> {
    let sd = state.proposal_sd;
    let proposal = ParamVector::from(mvn_sample(state.current.to_array(), Matrix2::diag(sd, sd), rng));
    let lp = target.log_density(proposal);
    // Zero-density proposals lie in no band and are rejected outright.
    let (accepted, j_new) = if lp == f64::NEG_INFINITY {
        rng.uniform();
        (false, None)
    } else {
        let u = -lp;
        if !u.is_finite() {
            return Err(Error::NonFiniteEnergy {
                beta0: proposal.beta0,
                beta1: proposal.beta1,
            });
        }
        let j = part.band_of(u)?;
        state.visited.insert(j);
        // The random-walk proposal is symmetric; only the θ and ψ terms remain.
        let log_r = state.theta[state.current_region] - state.theta[j] + (lp - state.current_log_density);
        (mh_accept(log_r, rng), Some(j))
    };
    if accepted {
        state.current = proposal;
        state.current_log_density = lp;
        state.current_region = j_new.expect("accepted proposals have a band");
    }

    state.t += 1;
    let g = gain(state.t, &state.schedule);
    for &i in &state.visited {
        let e = if i == state.current_region { 1.0 } else { 0.0 };
        let updated = state.theta[i] + g * (e - state.pi[i]);
        if updated.abs() > THETA_BOUND {
            state.clip_events += 1;
        }
        state.theta[i] = updated.clamp(-THETA_BOUND, THETA_BOUND);
    }
    Ok(SamcStepInfo {
        accepted,
        proposed_region: j_new,
    })
}

/// Tuning knobs for [`samc_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamcSettings {
    pub schedule: GainSchedule,
    pub pi: Vec<f64>,
    pub proposal_sd: f64,
}

/// Output of [`samc_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamcTrace {
    pub chain: ChainTrace,
    /// Band of each recorded draw.
    pub regions: Vec<usize>,
    /// Row-major `T × m` snapshots of `θ` after each iteration.
    pub theta: Vec<f64>,
    pub m: usize,
    pub visited: BTreeSet<usize>,
    pub clip_events: u64,
}

impl SamcTrace {
    pub fn theta_at(&self, t: usize) -> &[f64] {
        &self.theta[t * self.m..(t + 1) * self.m]
    }

    pub fn theta_final(&self) -> &[f64] {
        self.theta_at(self.chain.len() - 1)
    }

    /// `θ` of the band occupied at iteration index `t`.
    pub fn theta_current(&self, t: usize) -> f64 {
        self.theta_at(t)[self.regions[t]]
    }

    pub fn estimate(&self) -> Result<SamcEstimate> {
        samc_estimate(&self.chain, &self.regions, self.theta_final(), self.chain.burn_in)
    }
}

pub fn samc_run<T: Target + ?Sized>(
    init: ParamVector,
    iterations: usize,
    burn_in: usize,
    part: &EnergyPartition,
    settings: &SamcSettings,
    target: &T,
    rng: &mut RngStream,
) -> Result<SamcTrace> {
    if iterations == 0 || burn_in >= iterations {
        return Err(Error::InvalidInput(format!(
            "need 0 <= burn-in ({burn_in}) < iterations ({iterations})"
        )));
    }
    if !(settings.proposal_sd > 0.0) || !settings.proposal_sd.is_finite() {
        return Err(Error::InvalidInput("SAMC proposal sd must be positive".into()));
    }
    let mut state = SamcState::new(init, part, settings.schedule, settings.pi.clone(), target)?;
    state.proposal_sd = settings.proposal_sd;
    let m = part.regions();
    let mut chain = ChainTrace {
        draws: Vec::with_capacity(iterations),
        accepted: Vec::with_capacity(iterations),
        flags_per_iteration: 1,
        logpost: Vec::with_capacity(iterations),
        seed: rng.seed(),
        stream: rng.stream(),
        burn_in,
        final_proposal: None,
    };
    let mut regions = Vec::with_capacity(iterations);
    let mut theta = Vec::with_capacity(iterations * m);
    for _ in 0..iterations {
        let info = samc_step(&mut state, part, target, rng)?;
        chain.draws.push(state.current);
        chain.accepted.push(info.accepted);
        chain.logpost.push(state.current_log_density);
        regions.push(state.current_region);
        theta.extend_from_slice(&state.theta);
    }
    Ok(SamcTrace {
        chain,
        regions,
        theta,
        m,
        visited: state.visited,
        clip_events: state.clip_events,
    })
}

/// Point estimates from a SAMC run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamcEstimate {
    /// `e^θ`-reweighted posterior mean.
    pub mean: ParamVector,
    pub variance: [f64; 2],
    pub unweighted_mean: ParamVector,
    pub unweighted_variance: [f64; 2],
    /// Kish effective sample size of the weights.
    pub ess: f64,
}

/// Reweights post-burn-in draws by `e^{θ_final[J(β_t)]}`, undoing the band
/// flattening so the weighted draws represent the posterior.
pub fn samc_estimate(
    trace: &ChainTrace,
    region_idx: &[usize],
    theta_final: &[f64],
    burn_in: usize,
) -> Result<SamcEstimate> {
    if trace.len() <= burn_in {
        return Err(Error::TooFew {
            needed: burn_in + 1,
            got: trace.len(),
        });
    }
    if region_idx.len() != trace.len() {
        return Err(Error::InvalidInput("region sequence length differs from trace".into()));
    }
    let draws = &trace.draws[burn_in..];
    let regions = &region_idx[burn_in..];
    let top = regions
        .iter()
        .map(|&r| theta_final[r])
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = regions.iter().map(|&r| (theta_final[r] - top).exp()).collect();
    let sw: f64 = weights.iter().sum();
    let sw2: f64 = weights.iter().map(|w| w * w).sum();
    let ess = sw * sw / sw2;

    let moments = |w: &dyn Fn(usize) -> f64, total: f64| {
        let mut mean = [0.0; 2];
        for (t, d) in draws.iter().enumerate() {
            mean[0] += w(t) * d.beta0;
            mean[1] += w(t) * d.beta1;
        }
        mean = [mean[0] / total, mean[1] / total];
        let mut var = [0.0; 2];
        for (t, d) in draws.iter().enumerate() {
            var[0] += w(t) * (d.beta0 - mean[0]).powi(2);
            var[1] += w(t) * (d.beta1 - mean[1]).powi(2);
        }
        (ParamVector::new(mean[0], mean[1]), [var[0] / total, var[1] / total])
    };
    let (unweighted_mean, unweighted_variance) = moments(&|_| 1.0, draws.len() as f64);
    if !(ess >= MIN_WEIGHT_ESS) {
        return Err(Error::DegenerateWeights { ess });
    }
    let (mean, variance) = moments(&|t| weights[t], sw);
    Ok(SamcEstimate {
        mean,
        variance,
        unweighted_mean,
        unweighted_variance,
        ess,
    })
}
