use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use logitmc::diagnostics::{acceptance_rate, correlation, cumulative_mean, dual_start_check, sample_covariance};
use logitmc::glm::irls_fit;
use logitmc::harness::io::{load_trace, write_series, write_theta_trace, write_trace};
use logitmc::harness::{
    load_csv_dataset, run_experiment, simulate_dataset, wais_like_surrogate, write_dataset, write_outputs,
    ExperimentConfig, Method,
};
use logitmc::mh::{default_burn_in, run_chain};
use logitmc::samc::{make_partition, samc_run, uniform_pi, GainSchedule, SamcSettings};
use logitmc::{Error, ParamVector, Posterior, PriorSpec, ProposalSpec, Result, RngStream};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "logitmc",
    version,
    about = "MCMC, SAMC and maximum-likelihood fits of a one-covariate logistic model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a dataset and write it as CSV.
    Simulate(SimulateArgs),
    /// Maximum-likelihood fit of a dataset.
    Fit(FitArgs),
    /// Run a single chain on a dataset.
    Mcmc(McmcArgs),
    /// Run a replicated simulation grid from a JSON config.
    Experiment(ExperimentArgs),
    /// Convergence diagnostics for a trace CSV.
    Diagnose(DiagnoseArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta1: f64,
    #[arg(long, short, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit the 54-row intelligence-score surrogate instead (ignores beta and n).
    #[arg(long)]
    wais_like: bool,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct FitArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainMethod {
    Independent,
    Dependent,
    Individual,
    Samc,
}

impl From<ChainMethod> for Method {
    fn from(m: ChainMethod) -> Self {
        match m {
            ChainMethod::Independent => Method::Independent,
            ChainMethod::Dependent => Method::Dependent,
            ChainMethod::Individual => Method::Individual,
            ChainMethod::Samc => Method::Samc,
        }
    }
}

#[derive(clap::Args)]
struct McmcArgs {
    #[arg(long, value_enum)]
    method: ChainMethod,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 5000)]
    iters: usize,
    /// Defaults to max(1500, iters/5).
    #[arg(long)]
    burnin: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Start at the MLE instead of the origin.
    #[arg(long)]
    init_at_mle: bool,
    /// Random-walk step standard deviations, `sd0,sd1`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    step_sd: Option<Vec<f64>>,
    #[arg(long)]
    c_beta: Option<f64>,
    #[arg(long)]
    target_accept: Option<f64>,
    /// Prior variance for both coefficients (independent normal prior at zero).
    #[arg(long, default_value_t = 100.0)]
    prior_var: f64,
    #[arg(long, default_value_t = 41)]
    samc_regions: usize,
    #[arg(long, default_value_t = 200.0)]
    samc_width: f64,
    #[arg(long, default_value_t = 1000.0)]
    samc_t0: f64,
    #[arg(long, default_value_t = 1.0)]
    samc_proposal_sd: f64,
    /// Write SAMC log-weight snapshots here.
    #[arg(long)]
    theta_out: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    theta_every: usize,
}

#[derive(clap::Args)]
struct ExperimentArgs {
    /// JSON config; every field is optional.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct DiagnoseArgs {
    #[arg(long)]
    trace: PathBuf,
    /// 1-based iterations at which running means start.
    #[arg(long, value_delimiter = ',', default_value = "1,1500")]
    starts: Vec<usize>,
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    /// Draws discarded before the covariance estimate; defaults to the last start minus one.
    #[arg(long)]
    burnin: Option<usize>,
    /// Write the running-mean series here.
    #[arg(long)]
    series_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => fit(a),
        Command::Mcmc(a) => mcmc(a),
        Command::Experiment(a) => experiment(a),
        Command::Diagnose(a) => diagnose(a),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let data = if a.wais_like {
        wais_like_surrogate(a.seed)?
    } else {
        let mut rng = RngStream::derive(a.seed, 0);
        simulate_dataset(ParamVector::new(a.beta0, a.beta1), a.n, &mut rng)?
    };
    match a.out {
        Some(path) => write_dataset(create(&path)?, &data),
        None => write_dataset(io::stdout().lock(), &data),
    }
}

fn fit(a: FitArgs) -> Result<()> {
    let data = load_csv_dataset(&a.data)?;
    let fit = irls_fit(&data, a.tol, a.max_iter)?;
    let se = fit.standard_errors();
    print_json(&json!({
        "n": data.len(),
        "beta0": fit.beta_hat.beta0,
        "beta1": fit.beta_hat.beta1,
        "se": se,
        "covariance": fit.covariance.to_rows(),
        "iterations": fit.iterations,
        "converged": fit.converged,
    }))
}

fn mcmc(a: McmcArgs) -> Result<()> {
    let data = load_csv_dataset(&a.data)?;
    let prior = PriorSpec::independent([0.0, 0.0], [a.prior_var, a.prior_var])?;
    let target = Posterior::new(&data, &prior);
    let burn_in = a.burnin.unwrap_or_else(|| default_burn_in(a.iters));
    let method = Method::from(a.method);
    let init = if a.init_at_mle {
        irls_fit(&data, 1e-8, 100)?.beta_hat
    } else {
        ParamVector::ZERO
    };
    let mut rng = RngStream::derive(a.seed, method.code());

    let report = match method.proposal_kind() {
        Some(kind) => {
            let defaults = ProposalSpec::default_for(kind);
            let step_sd = match a.step_sd.as_deref() {
                Some(&[s0, s1]) => [s0, s1],
                _ => defaults.step_sd,
            };
            let prop = ProposalSpec::new(
                kind,
                step_sd,
                a.c_beta.unwrap_or(defaults.c_beta),
                a.target_accept.unwrap_or(defaults.target_accept),
            )?;
            let trace = run_chain(init, a.iters, burn_in, &target, &prop, &mut rng)?;
            if let Some(path) = &a.trace_out {
                write_trace(create(path)?, &trace, None)?;
            }
            let mean = trace.posterior_mean()?;
            json!({
                "method": method.name(),
                "iterations": trace.len(),
                "burn_in": burn_in,
                "posterior_mean": [mean.beta0, mean.beta1],
                "acceptance_rate": acceptance_rate(&trace, Some(burn_in..trace.len()))?,
                "final_proposal": trace.final_proposal,
            })
        }
        None => {
            let part = make_partition(&data, &prior, a.samc_regions, a.samc_width)?;
            let settings = SamcSettings {
                schedule: GainSchedule::new(a.samc_t0, GainSchedule::default().zeta)?,
                pi: uniform_pi(part.regions()),
                proposal_sd: a.samc_proposal_sd,
            };
            let trace = samc_run(init, a.iters, burn_in, &part, &settings, &target, &mut rng)?;
            if let Some(path) = &a.trace_out {
                write_trace(create(path)?, &trace.chain, Some(&trace))?;
            }
            if let Some(path) = &a.theta_out {
                write_theta_trace(create(path)?, &trace, a.theta_every)?;
            }
            let raw = trace.chain.posterior_mean()?;
            let est = trace.estimate();
            json!({
                "method": method.name(),
                "iterations": trace.chain.len(),
                "burn_in": burn_in,
                "posterior_mean": est.as_ref().ok().map(|e| [e.mean.beta0, e.mean.beta1]),
                "posterior_variance": est.as_ref().ok().map(|e| e.variance),
                "weight_ess": est.as_ref().ok().map(|e| e.ess),
                "estimate_error": est.as_ref().err().map(|e| e.to_string()),
                "unweighted_mean": [raw.beta0, raw.beta1],
                "acceptance_rate": acceptance_rate(&trace.chain, Some(burn_in..trace.chain.len()))?,
                "regions_visited": trace.visited.len(),
                "regions": part.regions(),
                "clip_events": trace.clip_events,
            })
        }
    };
    print_json(&report)
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let config = ExperimentConfig::load(&a.config)?;
    let mut output = run_experiment(&config)?;
    write_outputs(&mut output, &a.out)?;
    let failed: usize = output.summary.iter().map(|r| r.n_failed).sum();
    eprintln!(
        "wrote {} summary rows to {} ({failed} failed runs)",
        output.summary.len(),
        a.out.join("summary.csv").display()
    );
    Ok(())
}

fn diagnose(a: DiagnoseArgs) -> Result<()> {
    let rows = load_trace(&a.trace)?;
    let series = cumulative_mean(&rows.draws, &a.starts)?;
    let check = dual_start_check(&series, a.tol)?;
    if let Some(path) = &a.series_out {
        write_series(create(path)?, &series)?;
    }
    let last_start = a.starts.iter().copied().max().unwrap_or(1);
    let burn_in = a.burnin.unwrap_or(last_start.saturating_sub(1));
    if burn_in >= rows.draws.len() {
        return Err(Error::InvalidInput(format!(
            "burn-in {burn_in} leaves no draws out of {}",
            rows.draws.len()
        )));
    }
    let cov = sample_covariance(&rows.draws, burn_in)?;
    let moved = rows.accepted[burn_in..].iter().filter(|&&c| c > 0).count();
    print_json(&json!({
        "draws": rows.draws.len(),
        "starts": a.starts,
        "tol": a.tol,
        "converged": check.converged,
        "crossing_iteration": check.crossing_iteration,
        "final_gap": check.final_gap,
        "burn_in": burn_in,
        "covariance": cov.to_rows(),
        "correlation": correlation(cov),
        "moved_fraction": moved as f64 / (rows.draws.len() - burn_in) as f64,
    }))
}
