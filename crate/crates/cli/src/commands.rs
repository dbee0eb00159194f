use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stochseir_core::bayes::{metropolis, IncidenceModel, McmcConfig};
use stochseir_core::diagnostics::{
    consistency_study, normality_test, qq_points, residual_increments, StudyDesign,
};
use stochseir_core::estimate::{estimate, replicate_estimates, EstimateReport, JFunctionals};
use stochseir_core::model::{r0, R0Convention};
use stochseir_core::reconstruct::{normalize, replicate_reconstructions, ReconstructConfig};
use stochseir_core::rng::NOISE_GENERATOR;
use stochseir_core::simulate::{simulate_path, Scheme, SimConfig};
use stochseir_core::summary::{mean, median, Interval};
use stochseir_core::{ModelParams, NoiseKey, StateVec};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats;

#[derive(Debug, Parser)]
#[command(
    name = "stochseir",
    version,
    about = "Stochastic SEIR simulation and inference"
)]
pub struct Cli {
    /// JSON run configuration; omitted keys take reference values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Noise seed; required by every stochastic subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Reconstruct with the legacy, bug-for-bug update lines.
    #[arg(long, global = true)]
    pub pedantic_paper: bool,
    #[arg(long, global = true, value_enum, default_value_t = Convention::Paper)]
    pub r0_convention: Convention,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Paper,
    Consistent,
}

impl From<Convention> for R0Convention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Paper => R0Convention::Paper,
            Convention::Consistent => R0Convention::Consistent,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one path → path.csv
    Simulate,
    /// Reconstruct latent compartments from daily counts → reconstruction_*.csv, manifest.json
    Reconstruct {
        /// Incidence CSV (`date,count`); overrides `reconstruct.input`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Estimate from a path CSV, or replicate reconstruct→estimate on counts → report.json
    Estimate {
        #[arg(
            long,
            conflicts_with = "incidence",
            required_unless_present = "incidence"
        )]
        path: Option<PathBuf>,
        #[arg(long)]
        incidence: Option<PathBuf>,
        #[arg(long, requires = "incidence")]
        replicates: Option<usize>,
    },
    /// Residual increments, QQ data and normality verdict of a path CSV
    Validate {
        #[arg(long)]
        path: PathBuf,
    },
    /// Consistency study over increasing horizons → consistency.csv
    McStudy,
    /// Metropolis sampler for (p, κ) on daily counts → samples.csv
    Mcmc {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Basic reproduction number to standard output
    R0,
}

/// Provenance written next to every generated artifact.
#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub command: &'a str,
    pub generator: &'static str,
    pub seed: u64,
    pub stream: u64,
    pub scheme: Option<Scheme>,
    pub dt: Option<f64>,
    pub params: ModelParams,
    pub version: &'static str,
}

impl<'a> Metadata<'a> {
    fn new(command: &'a str, seed: NoiseKey, params: ModelParams) -> Self {
        Self {
            command,
            generator: NOISE_GENERATOR,
            seed: seed.seed,
            stream: seed.stream,
            scheme: None,
            dt: None,
            params,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Serialize)]
struct CiJson {
    beta_s: Interval,
    beta_a: Interval,
    p: Interval,
    sigma: Interval,
}

#[derive(Debug, Serialize)]
struct WindowJson {
    satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    end_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation_rate: Option<f64>,
}

/// The report schema: exactly these top-level keys.
#[derive(Debug, Serialize)]
struct ReportJson {
    beta_s: f64,
    beta_a: f64,
    p: f64,
    sigma: f64,
    ci: Option<CiJson>,
    j_functionals: JFunctionals,
    condition_number: f64,
    window: WindowJson,
}

impl From<&EstimateReport> for ReportJson {
    fn from(r: &EstimateReport) -> Self {
        Self {
            beta_s: r.beta_s,
            beta_a: r.beta_a,
            p: r.p.raw,
            sigma: r.sigma.sigma_hat,
            ci: None,
            j_functionals: r.j,
            condition_number: r.condition_number,
            window: WindowJson {
                satisfied: r.window.satisfied,
                t_start: Some(r.window.t_start),
                t_end: Some(r.window.t_end),
                end_index: Some(r.window.end_index),
                truncated: Some(r.window_truncated),
                violation_rate: None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    input: &'a FsPath,
    population_n: u64,
    n_rep: usize,
    files: Vec<String>,
    streams: Vec<u64>,
    metadata: Metadata<'a>,
}

/// Formats `x` with six significant digits.
pub fn six_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn require_seed(cli: &Cli, command: &str) -> Result<u64, CliError> {
    cli.seed
        .ok_or_else(|| CliError::Usage(format!("`{command}` is stochastic: --seed is required")))
}

fn out_file(cli: &Cli, name: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cli.out).map_err(|e| CliError::io(&cli.out, e))?;
    Ok(cli.out.join(name))
}

fn input_or(
    flag: &Option<PathBuf>,
    block: &Option<PathBuf>,
    what: &str,
) -> Result<PathBuf, CliError> {
    flag.clone()
        .or_else(|| block.clone())
        .ok_or_else(|| CliError::Usage(format!("{what}: no input file given")))
}

fn reconstruct_config(
    cli: &Cli,
    cfg: &RunConfig,
    seed: u64,
) -> Result<ReconstructConfig, CliError> {
    Ok(ReconstructConfig {
        params: cfg.params()?,
        init: cfg.reconstruct.init,
        dt: cfg.reconstruct.dt,
        seed: NoiseKey::new(seed),
        scheme: cfg.reconstruct.scheme,
        positivity: cfg.reconstruct.positivity,
        pedantic_paper: cli.pedantic_paper,
    })
}

/// Runs one subcommand. Text meant for standard output is returned.
pub fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Simulate => simulate(cli, &cfg).map(|_| None),
        Command::Reconstruct { input, replicates } => {
            reconstruct(cli, &cfg, input, *replicates).map(|_| None)
        }
        Command::Estimate {
            path,
            incidence,
            replicates,
        } => estimate_cmd(cli, &cfg, path, incidence, *replicates).map(|_| None),
        Command::Validate { path } => validate(cli, &cfg, path).map(|_| None),
        Command::McStudy => mc_study(cli, &cfg).map(|_| None),
        Command::Mcmc { input } => mcmc(cli, &cfg, input).map(|_| None),
        Command::R0 => Ok(Some(six_significant(r0(
            &cfg.params()?,
            cli.r0_convention.into(),
        )))),
    }
}

fn simulate(cli: &Cli, cfg: &RunConfig) -> Result<(), CliError> {
    let seed = NoiseKey::new(require_seed(cli, "simulate")?);
    let block = &cfg.simulate;
    let init = match &block.init {
        Some(f) => f.state()?,
        None => StateVec::reference(),
    };
    let sim = SimConfig {
        params: cfg.params()?,
        init,
        dt: block.dt,
        n_steps: block.n_steps,
        scheme: block.scheme,
        seed,
        positivity: block.positivity,
    };
    let path = simulate_path(&sim)?;
    formats::write_path(&out_file(cli, "path.csv")?, &path)?;
    let meta = Metadata {
        scheme: Some(sim.scheme),
        dt: Some(sim.dt),
        ..Metadata::new("simulate", seed, sim.params)
    };
    formats::write_json(&out_file(cli, "path.meta.json")?, &meta)
}

fn reconstruct(
    cli: &Cli,
    cfg: &RunConfig,
    input: &Option<PathBuf>,
    replicates: Option<usize>,
) -> Result<(), CliError> {
    let seed = require_seed(cli, "reconstruct")?;
    let input = input_or(input, &cfg.reconstruct.input, "reconstruct")?;
    let series = formats::load_incidence(&input, cfg.population())?;
    let rc = reconstruct_config(cli, cfg, seed)?;
    let n_rep = replicates.unwrap_or(cfg.reconstruct.n_rep).max(1);
    let paths = replicate_reconstructions(&normalize(&series), &rc, n_rep)?;
    let mut files = Vec::with_capacity(n_rep);
    for (k, p) in paths.iter().enumerate() {
        let name = format!("reconstruction_{k:04}.csv");
        formats::write_path(&out_file(cli, &name)?, p)?;
        files.push(name);
    }
    let manifest = Manifest {
        input: &input,
        population_n: series.population_n(),
        n_rep,
        files,
        streams: (0..n_rep as u64).collect(),
        metadata: Metadata {
            scheme: Some(rc.scheme),
            dt: Some(rc.dt),
            ..Metadata::new("reconstruct", rc.seed, rc.params)
        },
    };
    formats::write_json(&out_file(cli, "manifest.json")?, &manifest)
}

fn estimate_cmd(
    cli: &Cli,
    cfg: &RunConfig,
    path: &Option<PathBuf>,
    incidence: &Option<PathBuf>,
    replicates: Option<usize>,
) -> Result<(), CliError> {
    let params = cfg.params()?;
    let opts = cfg.estimate.options();
    let report = match (path, incidence) {
        (Some(path), _) => {
            let p = formats::read_path(path)?;
            ReportJson::from(&estimate(&p, &params, &opts)?)
        }
        (None, Some(incidence)) => {
            let seed = require_seed(cli, "estimate --incidence")?;
            let series = formats::load_incidence(incidence, cfg.population())?;
            let rc = reconstruct_config(cli, cfg, seed)?;
            let n_rep = replicates.unwrap_or(cfg.reconstruct.n_rep);
            let s = replicate_estimates(&normalize(&series), &rc, n_rep, &opts)?;
            let js: Vec<JFunctionals> = s.reports.iter().map(|r| r.j).collect();
            let avg = |f: fn(&JFunctionals) -> f64| mean(&js.iter().map(f).collect::<Vec<_>>());
            let conds: Vec<f64> = s.reports.iter().map(|r| r.condition_number).collect();
            let violation_rate = s.window_violation_rate();
            ReportJson {
                beta_s: s.beta_s.mean,
                beta_a: s.beta_a.mean,
                p: s.p.mean,
                sigma: s.sigma.mean,
                ci: Some(CiJson {
                    beta_s: s.beta_s,
                    beta_a: s.beta_a,
                    p: s.p,
                    sigma: s.sigma,
                }),
                j_functionals: JFunctionals {
                    j_s: avg(|j| j.j_s),
                    j_a: avg(|j| j.j_a),
                    j_sa: avg(|j| j.j_sa),
                    j_2: avg(|j| j.j_2),
                },
                condition_number: median(&conds),
                window: WindowJson {
                    satisfied: violation_rate == 0.0,
                    t_start: None,
                    t_end: None,
                    end_index: None,
                    truncated: None,
                    violation_rate: Some(violation_rate),
                },
            }
        }
        (None, None) => {
            return Err(CliError::Usage(
                "estimate: give --path or --incidence".into(),
            ))
        }
    };
    formats::write_json(&out_file(cli, "report.json")?, &report)
}

fn validate(cli: &Cli, cfg: &RunConfig, path: &FsPath) -> Result<(), CliError> {
    let p = formats::read_path(path)?;
    let residuals = residual_increments(&p, &cfg.params()?)?;
    let qq = qq_points(&residuals.standardized)?;
    let verdict = normality_test(&residuals.standardized, cfg.validate.alpha)?;
    formats::write_residuals(
        &out_file(cli, "residuals.csv")?,
        &residuals.raw,
        &residuals.standardized,
    )?;
    formats::write_qq(&out_file(cli, "qq.csv")?, &qq)?;
    formats::write_json(&out_file(cli, "normality.json")?, &verdict)
}

fn mc_study(cli: &Cli, cfg: &RunConfig) -> Result<(), CliError> {
    let seed = require_seed(cli, "mc-study")?;
    let block = &cfg.mc_study;
    let design = StudyDesign {
        truth: cfg.params()?,
        init: StateVec::reference_with_recovered(block.recovered_persons),
        dt: block.dt,
        scheme: block.scheme,
        seed,
        options: cfg.estimate.options(),
    };
    let rows = consistency_study(&design, &block.horizons, block.n_rep)?;
    formats::write_consistency(&out_file(cli, "consistency.csv")?, &rows)?;
    let meta = Metadata {
        scheme: Some(design.scheme),
        dt: Some(design.dt),
        ..Metadata::new("mc-study", NoiseKey::new(seed), design.truth)
    };
    formats::write_json(&out_file(cli, "consistency.meta.json")?, &meta)
}

fn mcmc(cli: &Cli, cfg: &RunConfig, input: &Option<PathBuf>) -> Result<(), CliError> {
    let seed = require_seed(cli, "mcmc")?;
    let block = &cfg.mcmc;
    let input = input_or(input, &block.input, "mcmc")?;
    let series = formats::load_incidence(&input, cfg.population())?;
    // the day-0 count is the initial symptomatic fraction
    let x = StateVec::reference();
    let i_s0 = series.counts()[0] as f64 / series.population_n() as f64;
    let model = IncidenceModel {
        fixed: cfg.params()?,
        init: StateVec::from_infected(x.e(), x.i_a(), i_s0, x.r())?,
        steps_per_day: block.steps_per_day,
    };
    let mc = McmcConfig {
        proposal_sd: block.proposal_sd,
        start: block.start,
        ..McmcConfig::new(block.iterations, block.burn_in, seed)
    };
    let chain = metropolis(&series, &block.priors, &model, &mc)?;
    formats::write_samples(&out_file(cli, "samples.csv")?, &chain.samples)?;
    let meta = Metadata::new("mcmc", mc.seed, model.fixed);
    formats::write_json(&out_file(cli, "samples.meta.json")?, &meta)
}
