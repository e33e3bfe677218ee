//! The replicated simulation grid: scenarios × replications × methods.
//!
//! Every (scenario, replication, method) cell draws from its own stream of
//! the master seed, so results do not depend on scheduling and changing one
//! replication leaves all others untouched. Stream ids pack the cell as
//! `scenario << 40 | replication << 8 | method code`, with code 0 reserved for
//! the simulated dataset.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::replicate_summary;
use crate::error::{Error, Result};
use crate::glm::{irls_fit, Dataset, ParamVector, PriorSpec};
use crate::harness::io::write_trace;
use crate::harness::simulate::simulate_dataset;
use crate::linalg::Matrix2;
use crate::mh::{default_burn_in, run_chain, ChainTrace, Posterior, ProposalKind, ProposalSpec};
use crate::rng::RngStream;
use crate::samc::{make_partition, samc_run, uniform_pi, GainSchedule, SamcSettings, SamcTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Independent,
    Dependent,
    Individual,
    Samc,
    Mle,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Independent,
        Method::Dependent,
        Method::Individual,
        Method::Samc,
        Method::Mle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Independent => "independent",
            Method::Dependent => "dependent",
            Method::Individual => "individual",
            Method::Samc => "samc",
            Method::Mle => "mle",
        }
    }

    pub fn code(self) -> u64 {
        match self {
            Method::Independent => 1,
            Method::Dependent => 2,
            Method::Individual => 3,
            Method::Samc => 4,
            Method::Mle => 5,
        }
    }

    pub fn proposal_kind(self) -> Option<ProposalKind> {
        match self {
            Method::Independent => Some(ProposalKind::IndependentDiag),
            Method::Dependent => Some(ProposalKind::FisherScaled),
            Method::Individual => Some(ProposalKind::Componentwise),
            _ => None,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method `{s}`")))
    }
}

fn default_scenarios() -> Vec<[f64; 2]> {
    vec![[0.1, 0.2], [0.6, 0.3], [1.0, -3.0], [2.0, 0.4], [-3.0, 2.0]]
}

/// Full experiment configuration. Every field has a default, so `{}` is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenarios: Vec<[f64; 2]>,
    pub n: usize,
    pub replications: usize,
    pub iterations: usize,
    /// `None` selects `max(1500, T/5)`.
    pub burn_in: Option<usize>,
    pub methods: Vec<Method>,
    pub prior_mean: [f64; 2],
    pub prior_covariance: [[f64; 2]; 2],
    pub step_sd: [f64; 2],
    pub c_beta: f64,
    pub target_accept: f64,
    /// Start chains at the MLE instead of the origin.
    pub init_at_mle: bool,
    pub samc_regions: usize,
    pub samc_width: f64,
    pub samc_t0: f64,
    pub samc_zeta: f64,
    /// `None` selects the uniform distribution over regions.
    pub samc_pi: Option<Vec<f64>>,
    pub samc_proposal_sd: f64,
    pub irls_tol: f64,
    pub irls_max_iter: usize,
    pub seed: u64,
    /// Write full traces for the first this-many replications of each scenario.
    pub trace_replications: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenarios: default_scenarios(),
            n: 1000,
            replications: 100,
            iterations: 5000,
            burn_in: None,
            methods: Method::ALL.to_vec(),
            prior_mean: [0.0, 0.0],
            prior_covariance: [[100.0, 0.0], [0.0, 100.0]],
            step_sd: ProposalSpec::DEFAULT_STEP_SD,
            c_beta: ProposalSpec::DEFAULT_C_BETA,
            target_accept: ProposalSpec::DEFAULT_TARGET_ACCEPT,
            init_at_mle: false,
            samc_regions: 41,
            samc_width: 200.0,
            samc_t0: 1000.0,
            samc_zeta: 1.5,
            samc_pi: None,
            samc_proposal_sd: 1.0,
            irls_tol: 1e-8,
            irls_max_iter: 100,
            seed: 20_240_601,
            trace_replications: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or_else(|| default_burn_in(self.iterations))
    }

    pub fn prior(&self) -> Result<PriorSpec> {
        PriorSpec::new(self.prior_mean, Matrix2::from_rows(self.prior_covariance))
    }

    pub fn proposal(&self, kind: ProposalKind) -> Result<ProposalSpec> {
        ProposalSpec::new(kind, self.step_sd, self.c_beta, self.target_accept)
    }

    pub fn samc_settings(&self) -> Result<SamcSettings> {
        let pi = self.samc_pi.clone().unwrap_or_else(|| uniform_pi(self.samc_regions));
        Ok(SamcSettings {
            schedule: GainSchedule::new(self.samc_t0, self.samc_zeta)?,
            pi,
            proposal_sd: self.samc_proposal_sd,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        if self.scenarios.is_empty() {
            return bad("scenario list is empty");
        }
        if self.scenarios.iter().flatten().any(|v| !v.is_finite()) {
            return bad("scenario coefficients must be finite");
        }
        if self.methods.is_empty() {
            return bad("method list is empty");
        }
        if self.n < 2 || self.replications == 0 || self.iterations == 0 {
            return bad("n must be at least 2; replications and iterations must be positive");
        }
        if self.burn_in() >= self.iterations {
            return bad("burn-in must be shorter than the chain");
        }
        if self.scenarios.len() >= 1 << 23 || self.replications >= 1 << 32 {
            return bad("grid too large for stream packing");
        }
        if self.samc_regions < 2 {
            return bad("SAMC needs at least two regions");
        }
        if !(self.samc_proposal_sd > 0.0) {
            return bad("SAMC proposal sd must be positive");
        }
        if let Some(pi) = &self.samc_pi {
            if pi.len() != self.samc_regions {
                return bad("samc_pi length must equal samc_regions");
            }
        }
        if !(self.irls_tol > 0.0) || self.irls_max_iter == 0 {
            return bad("IRLS tolerance and iteration cap must be positive");
        }
        self.prior()?;
        for kind in [
            ProposalKind::IndependentDiag,
            ProposalKind::FisherScaled,
            ProposalKind::Componentwise,
        ] {
            self.proposal(kind)?;
        }
        self.samc_settings()?;
        Ok(())
    }
}

/// Stream id of one grid cell; `method_code` 0 is the dataset stream.
pub fn stream_id(scenario: usize, replication: usize, method_code: u64) -> u64 {
    ((scenario as u64) << 40) | ((replication as u64) << 8) | method_code
}

/// Outcome of one method on one replicated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: usize,
    pub replication: usize,
    pub method: Method,
    pub seed: u64,
    pub stream: u64,
    pub estimate: Option<ParamVector>,
    /// Unweighted chain mean, reported for SAMC alongside the reweighted estimate.
    pub unweighted_estimate: Option<ParamVector>,
    pub acceptance_rate: Option<f64>,
    pub error: Option<String>,
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: [f64; 2],
    pub method: String,
    pub mean: [f64; 2],
    pub variance: [f64; 2],
    pub n_ok: usize,
    pub n_failed: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    pub master_seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub runs: Vec<RunRecord>,
    pub outputs: Vec<PathBuf>,
}

/// Traces kept for export.
#[derive(Debug, Clone)]
pub struct KeptTrace {
    pub scenario: usize,
    pub replication: usize,
    pub method: Method,
    pub chain: ChainTrace,
    pub samc: Option<SamcTrace>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub summary: Vec<SummaryRow>,
    pub manifest: RunManifest,
    pub traces: Vec<KeptTrace>,
}

struct CellOutput {
    records: Vec<RunRecord>,
    traces: Vec<KeptTrace>,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn run_cell(cfg: &ExperimentConfig, prior: &PriorSpec, scenario: usize, replication: usize) -> CellOutput {
    let truth = ParamVector::from(cfg.scenarios[scenario]);
    let keep = replication < cfg.trace_replications;
    let mut out = CellOutput {
        records: Vec::with_capacity(cfg.methods.len()),
        traces: Vec::new(),
    };
    let mut data_rng = RngStream::derive(cfg.seed, stream_id(scenario, replication, 0));
    let data = simulate_dataset(truth, cfg.n, &mut data_rng);

    for &method in &cfg.methods {
        let stream = stream_id(scenario, replication, method.code());
        let mut record = RunRecord {
            scenario,
            replication,
            method,
            seed: cfg.seed,
            stream,
            estimate: None,
            unweighted_estimate: None,
            acceptance_rate: None,
            error: None,
        };
        let mut rng = RngStream::derive(cfg.seed, stream);
        let result = data
            .as_ref()
            .map_err(|e| Error::InvalidInput(e.to_string()))
            .and_then(|d| run_method(cfg, prior, d, method, &mut rng));
        match result {
            Ok(run) => {
                record.estimate = run.estimate;
                record.unweighted_estimate = run.unweighted;
                record.acceptance_rate = run.acceptance;
                record.error = run.error;
                if keep {
                    if let Some(chain) = run.chain {
                        out.traces.push(KeptTrace {
                            scenario,
                            replication,
                            method,
                            chain,
                            samc: run.samc,
                        });
                    }
                }
            }
            Err(e) => record.error = Some(e.to_string()),
        }
        out.records.push(record);
    }
    out
}

struct MethodRun {
    estimate: Option<ParamVector>,
    unweighted: Option<ParamVector>,
    acceptance: Option<f64>,
    error: Option<String>,
    chain: Option<ChainTrace>,
    samc: Option<SamcTrace>,
}

fn run_method(
    cfg: &ExperimentConfig,
    prior: &PriorSpec,
    data: &Dataset,
    method: Method,
    rng: &mut RngStream,
) -> Result<MethodRun> {
    let target = Posterior::new(data, prior);
    let burn_in = cfg.burn_in();
    let init = || -> Result<ParamVector> {
        if cfg.init_at_mle {
            Ok(irls_fit(data, cfg.irls_tol, cfg.irls_max_iter)?.beta_hat)
        } else {
            Ok(ParamVector::ZERO)
        }
    };
    let rate = |t: &ChainTrace| crate::diagnostics::acceptance_rate(t, Some(burn_in..t.len())).ok();
    match method {
        Method::Mle => {
            let fit = irls_fit(data, cfg.irls_tol, cfg.irls_max_iter)?;
            Ok(MethodRun {
                estimate: Some(fit.beta_hat),
                unweighted: None,
                acceptance: None,
                error: None,
                chain: None,
                samc: None,
            })
        }
        Method::Samc => {
            let part = make_partition(data, prior, cfg.samc_regions, cfg.samc_width)?;
            let settings = cfg.samc_settings()?;
            let trace = samc_run(init()?, cfg.iterations, burn_in, &part, &settings, &target, rng)?;
            let unweighted = trace.chain.posterior_mean()?;
            let (estimate, error) = match trace.estimate() {
                Ok(est) => (Some(est.mean), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Ok(MethodRun {
                estimate,
                unweighted: Some(unweighted),
                acceptance: rate(&trace.chain),
                error,
                chain: Some(trace.chain.clone()),
                samc: Some(trace),
            })
        }
        _ => {
            let kind = method.proposal_kind().expect("MH method");
            let trace = run_chain(init()?, cfg.iterations, burn_in, &target, &cfg.proposal(kind)?, rng)?;
            Ok(MethodRun {
                estimate: Some(trace.posterior_mean()?),
                unweighted: None,
                acceptance: rate(&trace),
                error: None,
                chain: Some(trace),
                samc: None,
            })
        }
    }
}

fn summarize(cfg: &ExperimentConfig, records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for (s, scenario) in cfg.scenarios.iter().enumerate() {
        for &method in &cfg.methods {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.scenario == s && r.method == method)
                .collect();
            let mut push = |name: String, values: Vec<ParamVector>| {
                let n_ok = values.len();
                let (mean, variance) = match replicate_summary(&values) {
                    Ok(sum) => (sum.mean.to_array(), sum.variance),
                    Err(_) => ([f64::NAN; 2], [f64::NAN; 2]),
                };
                rows.push(SummaryRow {
                    scenario: *scenario,
                    method: name,
                    mean,
                    variance,
                    n_ok,
                    n_failed: cell.len() - n_ok,
                });
            };
            push(
                method.name().to_string(),
                cell.iter().filter_map(|r| r.estimate).collect(),
            );
            if method == Method::Samc {
                push(
                    "samc_unweighted".to_string(),
                    cell.iter().filter_map(|r| r.unweighted_estimate).collect(),
                );
            }
        }
    }
    rows
}

/// Runs the whole grid. Cells run in parallel; results are reduced in cell order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let prior = config.prior()?;
    let started_unix = unix_now();
    let cells: Vec<(usize, usize)> = (0..config.scenarios.len())
        .flat_map(|s| (0..config.replications).map(move |r| (s, r)))
        .collect();
    let outputs: Vec<CellOutput> = cells.par_iter().map(|&(s, r)| run_cell(config, &prior, s, r)).collect();

    let mut runs = Vec::new();
    let mut traces = Vec::new();
    for out in outputs {
        runs.extend(out.records);
        traces.extend(out.traces);
    }
    let summary = summarize(config, &runs);
    Ok(ExperimentOutput {
        summary,
        manifest: RunManifest {
            config: config.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: config.seed,
            started_unix,
            finished_unix: unix_now(),
            runs,
            outputs: Vec::new(),
        },
        traces,
    })
}

pub const SUMMARY_HEADER: [&str; 9] = [
    "scenario_beta0",
    "scenario_beta1",
    "method",
    "mean0",
    "mean1",
    "var0",
    "var1",
    "n_ok",
    "n_failed",
];

pub fn write_summary<W: std::io::Write>(writer: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario[0].to_string(),
            r.scenario[1].to_string(),
            r.method.clone(),
            r.mean[0].to_string(),
            r.mean[1].to_string(),
            r.variance[0].to_string(),
            r.variance[1].to_string(),
            r.n_ok.to_string(),
            r.n_failed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-replication point estimates: one row per run.
pub fn write_estimates<W: std::io::Write>(writer: W, runs: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "scenario",
        "replication",
        "method",
        "stream",
        "beta0",
        "beta1",
        "unweighted0",
        "unweighted1",
        "acceptance",
        "error",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in runs {
        w.write_record([
            r.scenario.to_string(),
            r.replication.to_string(),
            r.method.name().to_string(),
            r.stream.to_string(),
            opt(r.estimate.map(|e| e.beta0)),
            opt(r.estimate.map(|e| e.beta1)),
            opt(r.unweighted_estimate.map(|e| e.beta0)),
            opt(r.unweighted_estimate.map(|e| e.beta1)),
            opt(r.acceptance_rate),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `summary.csv`, `estimates.csv`, optional traces and `manifest.json` into `dir`.
pub fn write_outputs(output: &mut ExperimentOutput, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let summary = dir.join("summary.csv");
    write_summary(BufWriter::new(fs::File::create(&summary)?), &output.summary)?;
    written.push(summary);

    let estimates = dir.join("estimates.csv");
    write_estimates(BufWriter::new(fs::File::create(&estimates)?), &output.manifest.runs)?;
    written.push(estimates);

    if !output.traces.is_empty() {
        let tdir = dir.join("traces");
        fs::create_dir_all(&tdir)?;
        for t in &output.traces {
            let path = tdir.join(format!("s{}_r{}_{}.csv", t.scenario, t.replication, t.method.name()));
            write_trace(BufWriter::new(fs::File::create(&path)?), &t.chain, t.samc.as_ref())?;
            written.push(path);
        }
    }

    let manifest = dir.join("manifest.json");
    written.push(manifest.clone());
    output.manifest.outputs = written;
    let file = BufWriter::new(fs::File::create(&manifest)?);
    serde_json::to_writer_pretty(file, &output.manifest)?;
    Ok(())
}
