//! Random-walk Metropolis–Hastings samplers for the coefficient posterior.
//!
//! Three proposal families are supported:
//!
//! * [`ProposalKind::IndependentDiag`]: joint Gaussian random walk with a
//!   diagonal covariance `diag(σ0², σ1²)`.
//! * [`ProposalKind::FisherScaled`]: Gaussian proposal `N(β, c² H(β)⁻¹)` whose
//!   covariance follows the local information matrix. The proposal is not
//!   symmetric, so acceptance carries the full Hastings correction.
//! * [`ProposalKind::Componentwise`]: one coordinate at a time, each with its
//!   own accept/reject decision (Metropolis-within-Gibbs).
//!
//! Samplers are written against the [`Target`] trait rather than the logistic
//! posterior directly, so the same step rules can be checked on synthetic
//! targets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::{log_posterior, log_posterior_and_information, Dataset, ParamVector, PriorSpec};
use crate::linalg::{cholesky_factor, mvn_logpdf_with_factor, mvn_sample, Matrix2};
use crate::rng::RngStream;

/// Batch length for burn-in scale adaptation.
pub const ADAPT_BATCH: usize = 50;
/// Gain `κ` of the multiplicative scale update.
pub const ADAPT_GAIN: f64 = 1.0;

/// An un-normalized log-density over coefficient pairs.
pub trait Target {
    fn log_density(&self, b: ParamVector) -> f64;

    /// Log-density and a positive-definite precision matrix that shapes
    /// Fisher-scaled proposals at `b`.
    fn log_density_and_curvature(&self, b: ParamVector) -> (f64, Matrix2);
}

/// The logistic-regression posterior.
#[derive(Debug, Clone, Copy)]
pub struct Posterior<'a> {
    pub data: &'a Dataset,
    pub prior: &'a PriorSpec,
}

impl<'a> Posterior<'a> {
    pub fn new(data: &'a Dataset, prior: &'a PriorSpec) -> Self {
        Self { data, prior }
    }
}

impl Target for Posterior<'_> {
    fn log_density(&self, b: ParamVector) -> f64 {
        log_posterior(self.data, b, self.prior)
    }

    fn log_density_and_curvature(&self, b: ParamVector) -> (f64, Matrix2) {
        log_posterior_and_information(self.data, b, self.prior)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProposalKind {
    IndependentDiag,
    FisherScaled,
    Componentwise,
}

impl ProposalKind {
    /// Acceptance flags recorded per iteration.
    pub fn flags_per_iteration(self) -> usize {
        match self {
            ProposalKind::Componentwise => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProposalSpec {
    pub kind: ProposalKind,
    /// Random-walk standard deviations `(σ0, σ1)`.
    pub step_sd: [f64; 2],
    /// Regulation scale `c_β` of the Fisher-scaled proposal.
    pub c_beta: f64,
    pub target_accept: f64,
}

impl ProposalSpec {
    pub const DEFAULT_STEP_SD: [f64; 2] = [0.1, 0.1];
    pub const DEFAULT_C_BETA: f64 = 1.0;
    pub const DEFAULT_TARGET_ACCEPT: f64 = 0.35;

    pub fn new(kind: ProposalKind, step_sd: [f64; 2], c_beta: f64, target_accept: f64) -> Result<Self> {
        let spec = Self {
            kind,
            step_sd,
            c_beta,
            target_accept,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default scales for `kind`.
    pub fn default_for(kind: ProposalKind) -> Self {
        Self {
            kind,
            step_sd: Self::DEFAULT_STEP_SD,
            c_beta: Self::DEFAULT_C_BETA,
            target_accept: Self::DEFAULT_TARGET_ACCEPT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.step_sd[0]) || !positive(self.step_sd[1]) {
            return Err(Error::InvalidInput(
                "proposal standard deviations must be positive".into(),
            ));
        }
        if !positive(self.c_beta) {
            return Err(Error::InvalidInput("c_beta must be positive".into()));
        }
        if !(self.target_accept > 0.0 && self.target_accept < 1.0) {
            return Err(Error::InvalidInput("target acceptance must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Multiplicative scale update towards the target acceptance rate.
///
/// Scales `c_β` for Fisher-scaled proposals and both step standard deviations
/// otherwise.
pub fn adapt_scale(prop: ProposalSpec, recent_accept_rate: f64) -> ProposalSpec {
    let factor = (ADAPT_GAIN * (recent_accept_rate - prop.target_accept)).exp();
    let mut out = prop;
    match prop.kind {
        ProposalKind::FisherScaled => out.c_beta *= factor,
        _ => {
            out.step_sd[0] *= factor;
            out.step_sd[1] *= factor;
        }
    }
    out
}

/// Same update applied to a single coordinate's step size.
pub fn adapt_component(prop: ProposalSpec, coord: usize, recent_accept_rate: f64) -> ProposalSpec {
    let mut out = prop;
    out.step_sd[coord] *= (ADAPT_GAIN * (recent_accept_rate - prop.target_accept)).exp();
    out
}

/// Accepts with probability `min(e^{log_ratio}, 1)`, consuming one uniform draw.
pub fn mh_accept(log_ratio: f64, rng: &mut RngStream) -> bool {
    let u = rng.uniform();
    // ln(0) = -inf never exceeds a finite ratio; NaN ratios reject.
    u.ln() < log_ratio
}

/// Current position of a chain with its cached log-density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainState {
    pub point: ParamVector,
    pub log_density: f64,
    /// Curvature at `point`, filled lazily by the Fisher-scaled step.
    pub curvature: Option<Matrix2>,
}

impl ChainState {
    pub fn new<T: Target + ?Sized>(target: &T, point: ParamVector) -> Result<Self> {
        let log_density = target.log_density(point);
        if !point.is_finite() || !(log_density > f64::NEG_INFINITY) || log_density.is_nan() {
            return Err(Error::InvalidInput(format!(
                "initial point ({}, {}) has zero target density",
                point.beta0, point.beta1
            )));
        }
        Ok(Self {
            point,
            log_density,
            curvature: None,
        })
    }
}

/// Joint diagonal random-walk update. The Gaussian proposal is symmetric, so
/// the ratio reduces to the target ratio.
pub fn step_independent<T: Target + ?Sized>(
    state: &mut ChainState,
    target: &T,
    prop: &ProposalSpec,
    rng: &mut RngStream,
) -> bool {
    let chol = Matrix2::diag(prop.step_sd[0], prop.step_sd[1]);
    let proposal = ParamVector::from(mvn_sample(state.point.to_array(), chol, rng));
    let lp = target.log_density(proposal);
    let accepted = mh_accept(lp - state.log_density, rng);
    if accepted {
        state.point = proposal;
        state.log_density = lp;
        state.curvature = None;
    }
    accepted
}

/// Fisher-scaled update with proposal `N(β, c² H(β)⁻¹)`.
pub fn step_dependent<T: Target + ?Sized>(
    state: &mut ChainState,
    target: &T,
    prop: &ProposalSpec,
    rng: &mut RngStream,
) -> Result<bool> {
    let c2 = prop.c_beta * prop.c_beta;
    let h_cur = match state.curvature {
        Some(h) => h,
        None => {
            let (_, h) = target.log_density_and_curvature(state.point);
            state.curvature = Some(h);
            h
        }
    };
    let chol_cur = cholesky_factor(h_cur.inverse_spd()?.scale(c2))?;
    let cur = state.point.to_array();
    let proposal = mvn_sample(cur, chol_cur, rng);

    let (lp, h_new) = target.log_density_and_curvature(ParamVector::from(proposal));
    let chol_new = cholesky_factor(h_new.inverse_spd()?.scale(c2))?;
    let log_q_forward = mvn_logpdf_with_factor(proposal, cur, chol_cur);
    let log_q_reverse = mvn_logpdf_with_factor(cur, proposal, chol_new);
    let log_ratio = (lp - state.log_density) + (log_q_reverse - log_q_forward);

    let accepted = mh_accept(log_ratio, rng);
    if accepted {
        state.point = ParamVector::from(proposal);
        state.log_density = lp;
        state.curvature = Some(h_new);
    }
    Ok(accepted)
}

/// Single-coordinate random-walk update holding the other coordinate fixed.
pub fn step_component<T: Target + ?Sized>(
    state: &mut ChainState,
    coord: usize,
    sd: f64,
    target: &T,
    rng: &mut RngStream,
) -> bool {
    let moved = state.point.get(coord) + sd * rng.standard_normal();
    let proposal = state.point.with(coord, moved);
    let lp = target.log_density(proposal);
    let accepted = mh_accept(lp - state.log_density, rng);
    if accepted {
        state.point = proposal;
        state.log_density = lp;
        state.curvature = None;
    }
    accepted
}

/// Updates `β0` then `β1`, each with its own acceptance decision.
pub fn step_individual<T: Target + ?Sized>(
    state: &mut ChainState,
    target: &T,
    prop: &ProposalSpec,
    rng: &mut RngStream,
) -> [bool; 2] {
    let first = step_component(state, 0, prop.step_sd[0], target, rng);
    let second = step_component(state, 1, prop.step_sd[1], target, rng);
    [first, second]
}

/// Recorded output of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace {
    /// State after each iteration `1..=T`; rejected iterations repeat the previous state.
    pub draws: Vec<ParamVector>,
    /// Acceptance flags, `flags_per_iteration` consecutive entries per iteration.
    pub accepted: Vec<bool>,
    pub flags_per_iteration: usize,
    pub logpost: Vec<f64>,
    pub seed: u64,
    pub stream: u64,
    pub burn_in: usize,
    /// Proposal scales in force after burn-in adaptation.
    pub final_proposal: Option<ProposalSpec>,
}

impl ChainTrace {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Flags recorded for iteration index `t` (0-based).
    pub fn flags(&self, t: usize) -> &[bool] {
        let k = self.flags_per_iteration;
        &self.accepted[t * k..(t + 1) * k]
    }

    /// Number of accepted moves at iteration index `t`.
    pub fn accepted_count(&self, t: usize) -> usize {
        self.flags(t).iter().filter(|&&f| f).count()
    }

    pub fn post_burn_in(&self) -> &[ParamVector] {
        &self.draws[self.burn_in.min(self.draws.len())..]
    }

    /// Mean of the post-burn-in draws.
    pub fn posterior_mean(&self) -> Result<ParamVector> {
        let draws = self.post_burn_in();
        if draws.is_empty() {
            return Err(Error::TooFew { needed: 1, got: 0 });
        }
        let n = draws.len() as f64;
        let (s0, s1) = draws.iter().fold((0.0, 0.0), |(a, b), d| (a + d.beta0, b + d.beta1));
        Ok(ParamVector::new(s0 / n, s1 / n))
    }
}

/// Default burn-in: `max(1500, T/5)`, reduced to `T/5` for chains of at most 1500 iterations.
pub fn default_burn_in(iterations: usize) -> usize {
    if iterations > 1500 {
        (iterations / 5).max(1500).min(iterations - 1)
    } else {
        iterations / 5
    }
}

/// Runs `iterations` MH updates of the kind selected by `prop` from `init`.
///
/// During the first `burn_in` iterations the proposal scale is adapted after
/// every completed batch of [`ADAPT_BATCH`] iterations; afterwards it is frozen.
pub fn run_chain<T: Target + ?Sized>(
    init: ParamVector,
    iterations: usize,
    burn_in: usize,
    target: &T,
    prop: &ProposalSpec,
    rng: &mut RngStream,
) -> Result<ChainTrace> {
    if iterations == 0 {
        return Err(Error::InvalidInput("chain length must be positive".into()));
    }
    if burn_in >= iterations {
        return Err(Error::InvalidInput(format!(
            "burn-in {burn_in} must be shorter than the chain ({iterations})"
        )));
    }
    prop.validate()?;

    let mut prop = *prop;
    let mut state = ChainState::new(target, init)?;
    let k = prop.kind.flags_per_iteration();
    let mut trace = ChainTrace {
        draws: Vec::with_capacity(iterations),
        accepted: Vec::with_capacity(iterations * k),
        flags_per_iteration: k,
        logpost: Vec::with_capacity(iterations),
        seed: rng.seed(),
        stream: rng.stream(),
        burn_in,
        final_proposal: None,
    };
    let mut batch = [0usize; 2];

    for t in 1..=iterations {
        match prop.kind {
            ProposalKind::IndependentDiag => {
                let a = step_independent(&mut state, target, &prop, rng);
                batch[0] += a as usize;
                trace.accepted.push(a);
            }
            ProposalKind::FisherScaled => {
                let a = step_dependent(&mut state, target, &prop, rng)?;
                batch[0] += a as usize;
                trace.accepted.push(a);
            }
            ProposalKind::Componentwise => {
                let flags = step_individual(&mut state, target, &prop, rng);
                batch[0] += flags[0] as usize;
                batch[1] += flags[1] as usize;
                trace.accepted.extend_from_slice(&flags);
            }
        }
        trace.draws.push(state.point);
        trace.logpost.push(state.log_density);

        if t <= burn_in && t % ADAPT_BATCH == 0 {
            let rate = |c: usize| c as f64 / ADAPT_BATCH as f64;
            prop = match prop.kind {
                ProposalKind::Componentwise => {
                    let p = adapt_component(prop, 0, rate(batch[0]));
                    adapt_component(p, 1, rate(batch[1]))
                }
                _ => adapt_scale(prop, rate(batch[0])),
            };
            batch = [0, 0];
        }
    }
    trace.final_proposal = Some(prop);
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glm::sigmoid;

    /// Standard bivariate normal, optionally correlated.
    struct Gaussian {
        precision: Matrix2,
    }

    impl Target for Gaussian {
        fn log_density(&self, b: ParamVector) -> f64 {
            -0.5 * self.precision.quad_form(b.to_array())
        }
        fn log_density_and_curvature(&self, b: ParamVector) -> (f64, Matrix2) {
            (self.log_density(b), self.precision)
        }
    }

    fn std_normal() -> Gaussian {
        Gaussian {
            precision: Matrix2::IDENTITY,
        }
    }

    /// Rejects everything except the starting point.
    struct Spike;

    impl Target for Spike {
        fn log_density(&self, b: ParamVector) -> f64 {
            if b == ParamVector::ZERO {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        }
        fn log_density_and_curvature(&self, b: ParamVector) -> (f64, Matrix2) {
            (self.log_density(b), Matrix2::IDENTITY)
        }
    }

    fn simulated(beta: ParamVector, n: usize, seed: u64) -> Dataset {
        let mut rng = RngStream::new(seed);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for _ in 0..n {
            let xi = rng.normal(1.0, 1.0);
            x.push(xi);
            y.push(rng.bernoulli(sigmoid(beta.eta(xi))) as u8 as f64);
        }
        Dataset::new(x, y).unwrap()
    }

    #[test]
    fn accept_rule_edges() {
        let mut rng = RngStream::new(1);
        for _ in 0..10_000 {
            assert!(mh_accept(0.0, &mut rng));
            assert!(mh_accept(5.0, &mut rng));
            assert!(!mh_accept(f64::NEG_INFINITY, &mut rng));
            assert!(!mh_accept(f64::NAN, &mut rng));
        }
    }

    #[test]
    fn accept_frequency() {
        let mut rng = RngStream::new(2);
        let n = 100_000;
        let hits = (0..n).filter(|_| mh_accept(0.3f64.ln(), &mut rng)).count();
        assert!((hits as f64 / n as f64 - 0.3).abs() < 0.01);
    }

    #[test]
    fn accept_consumes_one_uniform() {
        let mut a = RngStream::new(3);
        let mut b = RngStream::new(3);
        mh_accept(-0.7, &mut a);
        b.uniform();
        assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
    }

    #[test]
    fn proposal_validation() {
        assert!(ProposalSpec::new(ProposalKind::IndependentDiag, [0.0, 1.0], 1.0, 0.3).is_err());
        assert!(ProposalSpec::new(ProposalKind::FisherScaled, [1.0, 1.0], -1.0, 0.3).is_err());
        assert!(ProposalSpec::new(ProposalKind::Componentwise, [1.0, 1.0], 1.0, 1.0).is_err());
        assert!(ProposalSpec::new(ProposalKind::Componentwise, [1.0, 1.0], 1.0, 0.44).is_ok());
    }

    #[test]
    fn adapt_direction() {
        let p = ProposalSpec::default_for(ProposalKind::FisherScaled);
        assert_eq!(adapt_scale(p, 0.35), p);
        assert!(adapt_scale(p, 0.9).c_beta > p.c_beta);
        assert!(adapt_scale(p, 0.05).c_beta < p.c_beta);
        let p = ProposalSpec::default_for(ProposalKind::IndependentDiag);
        let q = adapt_scale(p, 0.9);
        assert!(q.step_sd[0] > p.step_sd[0] && q.step_sd[1] > p.step_sd[1]);
        let q = adapt_component(p, 1, 0.0);
        assert_eq!(q.step_sd[0], p.step_sd[0]);
        assert!(q.step_sd[1] < p.step_sd[1]);
    }

    #[test]
    fn adaptation_reaches_target_rate() {
        for (seed, kind) in [
            (1, ProposalKind::IndependentDiag),
            (2, ProposalKind::FisherScaled),
            (3, ProposalKind::Componentwise),
        ] {
            let mut rng = RngStream::new(seed);
            let prop = ProposalSpec::default_for(kind);
            let trace = run_chain(ParamVector::ZERO, 12_000, 2000, &std_normal(), &prop, &mut rng).unwrap();
            let post = &trace.accepted[2000 * trace.flags_per_iteration..];
            let rate = post.iter().filter(|&&a| a).count() as f64 / post.len() as f64;
            assert!((rate - 0.35).abs() < 0.05, "{kind:?}: {rate}");
        }
    }

    #[test]
    fn vanishing_steps_always_accept() {
        let d = simulated(ParamVector::new(0.1, 0.2), 200, 5);
        let prior = PriorSpec::default();
        let target = Posterior::new(&d, &prior);
        let init = ParamVector::new(0.1, 0.2);
        for kind in [
            ProposalKind::IndependentDiag,
            ProposalKind::FisherScaled,
            ProposalKind::Componentwise,
        ] {
            let prop = ProposalSpec::new(kind, [1e-9, 1e-9], 1e-9, 0.35).unwrap();
            let mut rng = RngStream::new(7);
            let trace = run_chain(init, 500, 0, &target, &prop, &mut rng).unwrap();
            let rate = trace.accepted.iter().filter(|&&a| a).count() as f64 / trace.accepted.len() as f64;
            assert!(rate > 0.98, "{kind:?}: {rate}");
        }
    }

    #[test]
    fn uphill_moves_always_accepted() {
        // On a 1-d slice, proposals towards the mode are always accepted.
        let target = std_normal();
        let mut rng = RngStream::new(8);
        for _ in 0..1000 {
            let mut state = ChainState::new(&target, ParamVector::new(5.0, 0.0)).unwrap();
            let before = state.point;
            let accepted = step_component(&mut state, 0, 0.5, &target, &mut rng);
            if state.point.beta0.abs() < before.beta0.abs() {
                assert!(accepted);
            }
            if !accepted {
                assert_eq!(state.point, before);
            }
        }
    }

    #[test]
    fn constant_curvature_reduces_to_symmetric_rule() {
        // With state-independent H the forward and reverse proposal densities are equal.
        let target = Gaussian {
            precision: Matrix2::symmetric(2.0, 0.7, 1.0),
        };
        let h = target.precision;
        let chol = cholesky_factor(h.inverse_spd().unwrap().scale(0.8)).unwrap();
        let a = [0.3, -1.1];
        let b = [1.4, 0.2];
        let fwd = mvn_logpdf_with_factor(b, a, chol);
        let rev = mvn_logpdf_with_factor(a, b, chol);
        assert!((fwd - rev).abs() < 1e-14);
    }

    #[test]
    fn frozen_component_never_moves() {
        let target = std_normal();
        let prop = ProposalSpec::new(ProposalKind::Componentwise, [1.0, 1e-300], 1.0, 0.35).unwrap();
        let mut rng = RngStream::new(9);
        let trace = run_chain(ParamVector::new(0.0, 0.25), 2000, 0, &target, &prop, &mut rng).unwrap();
        assert!(trace.draws.iter().all(|d| d.beta1 == 0.25));
        assert!(trace.draws.iter().any(|d| d.beta0 != 0.0));
    }

    #[test]
    fn all_rejecting_chain() {
        let prop = ProposalSpec::default_for(ProposalKind::IndependentDiag);
        let mut rng = RngStream::new(10);
        let trace = run_chain(ParamVector::ZERO, 10, 0, &Spike, &prop, &mut rng).unwrap();
        assert_eq!(trace.draws, vec![ParamVector::ZERO; 10]);
        assert!(trace.accepted.iter().all(|&a| !a));
    }

    #[test]
    fn run_chain_rejects_bad_lengths() {
        let prop = ProposalSpec::default_for(ProposalKind::IndependentDiag);
        let mut rng = RngStream::new(1);
        assert!(run_chain(ParamVector::ZERO, 0, 0, &std_normal(), &prop, &mut rng).is_err());
        assert!(run_chain(ParamVector::ZERO, 10, 10, &std_normal(), &prop, &mut rng).is_err());
        assert!(run_chain(ParamVector::new(1.0, 0.0), 10, 0, &Spike, &prop, &mut rng).is_err());
    }

    #[test]
    fn trace_invariants_and_determinism() {
        let d = simulated(ParamVector::new(0.6, 0.3), 300, 11);
        let prior = PriorSpec::default();
        let target = Posterior::new(&d, &prior);
        for kind in [
            ProposalKind::IndependentDiag,
            ProposalKind::FisherScaled,
            ProposalKind::Componentwise,
        ] {
            let prop = ProposalSpec::default_for(kind);
            let run = || {
                let mut rng = RngStream::derive(99, 4);
                run_chain(ParamVector::ZERO, 600, 200, &target, &prop, &mut rng).unwrap()
            };
            let trace = run();
            assert_eq!(trace, run());
            for t in 1..trace.len() {
                if trace.draws[t] == trace.draws[t - 1] {
                    assert_eq!(trace.accepted_count(t), 0, "{kind:?} iteration {t}");
                }
                if trace.accepted_count(t) == 0 {
                    assert_eq!(trace.draws[t].beta0.to_bits(), trace.draws[t - 1].beta0.to_bits());
                    assert_eq!(trace.draws[t].beta1.to_bits(), trace.draws[t - 1].beta1.to_bits());
                }
            }
            for t in (0..trace.len()).step_by(37) {
                let lp = log_posterior(&d, trace.draws[t], &prior);
                assert!((lp - trace.logpost[t]).abs() <= 1e-9 * lp.abs());
            }
        }
    }

    #[test]
    fn suffix_rerun_reproduces_chain() {
        let d = simulated(ParamVector::new(1.0, -3.0), 300, 12);
        let prior = PriorSpec::default();
        let target = Posterior::new(&d, &prior);
        let prop = ProposalSpec::default_for(ProposalKind::FisherScaled);
        let mut rng = RngStream::new(5);
        let full = run_chain(ParamVector::ZERO, 300, 0, &target, &prop, &mut rng).unwrap();

        let mut rng = RngStream::new(5);
        let head = run_chain(ParamVector::ZERO, 120, 0, &target, &prop, &mut rng).unwrap();
        let tail = run_chain(*head.draws.last().unwrap(), 180, 0, &target, &prop, &mut rng).unwrap();
        assert_eq!(&full.draws[..120], &head.draws[..]);
        assert_eq!(&full.draws[120..], &tail.draws[..]);
    }

    #[test]
    fn default_burn_in_rule() {
        assert_eq!(default_burn_in(5000), 1500);
        assert_eq!(default_burn_in(10_000), 2000);
        assert_eq!(default_burn_in(100), 20);
        assert!(default_burn_in(1501) < 1501);
    }
}
