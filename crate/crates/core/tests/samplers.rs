use logitmc::diagnostics::{acceptance_rate, correlation, replicate_summary, sample_covariance};
use logitmc::glm::irls_fit;
use logitmc::harness::{simulate_dataset, wais_like_surrogate};
use logitmc::mh::{default_burn_in, run_chain};
use logitmc::samc::{samc_run, GainSchedule, SamcSettings};
use logitmc::*;

/// Standard bivariate normal centred at `(1, -1)`.
struct Gaussian;

impl Target for Gaussian {
    fn log_density(&self, b: ParamVector) -> f64 {
        -0.5 * ((b.beta0 - 1.0).powi(2) + (b.beta1 + 1.0).powi(2))
    }

    fn log_density_and_curvature(&self, b: ParamVector) -> (f64, Matrix2) {
        (self.log_density(b), Matrix2::diag(1.0, 1.0))
    }
}

/// Piecewise-constant density on `[0, 4) × [0, 1)`: weight 3 on `[0, 1)`,
/// 1 elsewhere. Energies are `-ln 3` and `0`, so one boundary splits them.
struct Steps;

impl Target for Steps {
    fn log_density(&self, b: ParamVector) -> f64 {
        if !(0.0..4.0).contains(&b.beta0) || !(0.0..1.0).contains(&b.beta1) {
            f64::NEG_INFINITY
        } else if b.beta0 < 1.0 {
            3f64.ln()
        } else {
            0.0
        }
    }

    fn log_density_and_curvature(&self, b: ParamVector) -> (f64, Matrix2) {
        (self.log_density(b), Matrix2::diag(1.0, 1.0))
    }
}

#[test]
fn two_region_frequencies_follow_pi() {
    let part = EnergyPartition::new(vec![-0.5]).unwrap();
    let settings = SamcSettings {
        schedule: GainSchedule::default(),
        pi: vec![0.7, 0.3],
        proposal_sd: 1.0,
    };
    let mut rng = RngStream::derive(11, 4);
    let trace = samc_run(
        ParamVector::new(0.5, 0.5),
        100_000,
        10_000,
        &part,
        &settings,
        &Steps,
        &mut rng,
    )
    .unwrap();
    let kept = &trace.regions[10_000..];
    let low = kept.iter().filter(|&&r| r == 0).count() as f64 / kept.len() as f64;
    assert!((low - 0.7).abs() <= 0.03, "low-energy frequency {low}");
    assert_eq!(trace.clip_events, 0);
}

#[test]
fn single_region_samc_matches_plain_random_walk() {
    let part = EnergyPartition::new(vec![]).unwrap();
    let settings = SamcSettings {
        schedule: GainSchedule::default(),
        pi: vec![1.0],
        proposal_sd: 1.0,
    };
    let walk = ProposalSpec::new(ProposalKind::IndependentDiag, [1.0, 1.0], 1.0, 0.35).unwrap();
    let (mut samc_means, mut mh_means) = (Vec::new(), Vec::new());
    for rep in 0..50u64 {
        let mut rng = RngStream::derive(rep, 4);
        let s = samc_run(
            ParamVector::new(1.0, -1.0),
            2000,
            200,
            &part,
            &settings,
            &Gaussian,
            &mut rng,
        )
        .unwrap();
        samc_means.push(s.chain.posterior_mean().unwrap());
        // Zero burn-in keeps the walk unadapted, matching the fixed SAMC proposal.
        let mut rng = RngStream::derive(rep, 1);
        let c = run_chain(ParamVector::new(1.0, -1.0), 2000, 0, &Gaussian, &walk, &mut rng).unwrap();
        mh_means.push(ParamVector::from(
            c.draws[200..]
                .iter()
                .fold([0.0, 0.0], |a, d| [a[0] + d.beta0 / 1800.0, a[1] + d.beta1 / 1800.0]),
        ));
    }
    let a = replicate_summary(&samc_means).unwrap();
    let b = replicate_summary(&mh_means).unwrap();
    for k in 0..2 {
        let se = ((a.variance[k] + b.variance[k]) / 50.0).sqrt();
        let diff = a.mean.get(k) - b.mean.get(k);
        assert!(diff.abs() <= 2.0 * se, "coord {k}: diff {diff} se {se}");
    }
}

#[test]
fn frozen_acceptance_rates_are_moderate() {
    let prior = PriorSpec::default();
    for (s, truth) in [(0.1, 0.2), (0.6, 0.3), (1.0, -3.0), (2.0, 0.4), (-3.0, 2.0)]
        .into_iter()
        .enumerate()
    {
        let mut rng = RngStream::derive(7, s as u64);
        let d = simulate_dataset(ParamVector::from([truth.0, truth.1]), 1000, &mut rng).unwrap();
        let target = Posterior::new(&d, &prior);
        for kind in [
            ProposalKind::IndependentDiag,
            ProposalKind::FisherScaled,
            ProposalKind::Componentwise,
        ] {
            let trace = run_chain(
                ParamVector::ZERO,
                5000,
                1500,
                &target,
                &ProposalSpec::default_for(kind),
                &mut rng,
            )
            .unwrap();
            let rate = acceptance_rate(&trace, Some(1500..5000)).unwrap();
            assert!(rate > 0.1 && rate < 0.6, "{kind:?} at {truth:?}: {rate}");
        }
    }
}

#[test]
fn chains_recover_the_posterior_mean() {
    let prior = PriorSpec::default();
    let mut rng = RngStream::new(99);
    let d = simulate_dataset(ParamVector::new(0.6, 0.3), 1000, &mut rng).unwrap();
    let mle = irls_fit(&d, 1e-10, 100).unwrap();
    let se = mle.standard_errors();
    let target = Posterior::new(&d, &prior);
    for kind in [
        ProposalKind::IndependentDiag,
        ProposalKind::FisherScaled,
        ProposalKind::Componentwise,
    ] {
        let trace = run_chain(
            ParamVector::ZERO,
            20_000,
            default_burn_in(20_000),
            &target,
            &ProposalSpec::default_for(kind),
            &mut rng,
        )
        .unwrap();
        let mean = trace.posterior_mean().unwrap();
        for (k, se_k) in se.iter().enumerate() {
            let z = (mean.get(k) - mle.beta_hat.get(k)) / se_k;
            assert!(z.abs() < 0.5, "{kind:?} coord {k}: {z} standard errors from the MLE");
        }
    }
}

#[test]
fn wais_like_posterior_is_strongly_negatively_correlated() {
    let d = wais_like_surrogate(3).unwrap();
    let prior = PriorSpec::default();
    let target = Posterior::new(&d, &prior);
    let mut rng = RngStream::derive(3, 2);
    let trace = run_chain(
        ParamVector::ZERO,
        20_000,
        5000,
        &target,
        &ProposalSpec::default_for(ProposalKind::FisherScaled),
        &mut rng,
    )
    .unwrap();
    let cov = sample_covariance(&trace.draws, 5000).unwrap();
    let rho = correlation(cov);
    assert!(rho < -0.9, "correlation {rho}");
    assert!(cov.b < 0.0);
}
