use std::path::PathBuf;

use stochseir_core::bayes::BayesError;
use stochseir_core::diagnostics::DiagnosticError;
use stochseir_core::estimate::EstimateError;
use stochseir_core::model::ModelError;
use stochseir_core::reconstruct::ReconstructError;
use stochseir_core::simulate::SimError;
use thiserror::Error;

/// Process exit status per error class. Stable: scripts match on these.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitClass {
    Usage = 2,
    Io = 3,
    Parse = 4,
    InvalidConfig = 5,
    Domain = 6,
    Positivity = 7,
    Singular = 8,
    Window = 9,
    Replication = 10,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: line {line}: negative count {value}")]
    NegativeCount {
        path: PathBuf,
        line: u64,
        value: i64,
    },
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Simulate(#[from] SimError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Diagnostic(#[from] DiagnosticError),
    #[error(transparent)]
    Bayes(#[from] BayesError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ExitClass {
        match self {
            CliError::Usage(_) => ExitClass::Usage,
            CliError::Io { .. } => ExitClass::Io,
            CliError::Parse { .. } | CliError::NegativeCount { .. } => ExitClass::Parse,
            CliError::Config { .. } => ExitClass::InvalidConfig,
            CliError::Model(e) => model_class(e),
            CliError::Simulate(e) => sim_class(e),
            CliError::Reconstruct(e) => reconstruct_class(e),
            CliError::Estimate(e) => estimate_class(e),
            CliError::Diagnostic(e) => diagnostic_class(e),
            CliError::Bayes(e) => match e {
                BayesError::Domain { .. } => ExitClass::Domain,
                BayesError::Model(m) => model_class(m),
                _ => ExitClass::InvalidConfig,
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.class() as u8
    }
}

fn model_class(e: &ModelError) -> ExitClass {
    match e {
        ModelError::Domain { .. } | ModelError::ZeroSigma => ExitClass::Domain,
        _ => ExitClass::InvalidConfig,
    }
}

fn sim_class(e: &SimError) -> ExitClass {
    match e {
        SimError::Model(m) => model_class(m),
        SimError::Positivity { .. } => ExitClass::Positivity,
    }
}

fn reconstruct_class(e: &ReconstructError) -> ExitClass {
    match e {
        ReconstructError::Positivity { .. } => ExitClass::Positivity,
        ReconstructError::Model(m) => model_class(m),
        ReconstructError::Replicate { source, .. } => reconstruct_class(source),
        ReconstructError::EmptySeries
        | ReconstructError::PopulationTooSmall { .. }
        | ReconstructError::LengthMismatch(_)
        | ReconstructError::Observation { .. } => ExitClass::Parse,
        ReconstructError::InitialFraction { .. } => ExitClass::InvalidConfig,
    }
}

fn estimate_class(e: &EstimateError) -> ExitClass {
    match e {
        EstimateError::Domain { .. }
        | EstimateError::DegenerateDenominator { .. }
        | EstimateError::ZeroSigma => ExitClass::Domain,
        EstimateError::SingularSystem { .. } => ExitClass::Singular,
        EstimateError::WindowViolated => ExitClass::Window,
        EstimateError::TooManyFailures { .. } => ExitClass::Replication,
        EstimateError::EmptyInput
        | EstimateError::LengthMismatch { .. }
        | EstimateError::MissingIncrements => ExitClass::Parse,
        EstimateError::Model(m) => model_class(m),
        EstimateError::Reconstruct(r) => reconstruct_class(r),
        EstimateError::Simulate(s) => sim_class(s),
    }
}

fn diagnostic_class(e: &DiagnosticError) -> ExitClass {
    match e {
        DiagnosticError::Domain { .. }
        | DiagnosticError::ZeroSigma
        | DiagnosticError::DegenerateSample => ExitClass::Domain,
        DiagnosticError::TooFewPoints { .. } => ExitClass::Parse,
        DiagnosticError::InvalidAlpha(_) | DiagnosticError::InvalidHorizons => {
            ExitClass::InvalidConfig
        }
        DiagnosticError::WindowViolated { .. } => ExitClass::Window,
        DiagnosticError::Estimate(e) => estimate_class(e),
        DiagnosticError::Simulate(s) => sim_class(s),
    }
}
