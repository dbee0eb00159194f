//! JSON run configuration: model parameters at the top level under their
//! field names, one optional block per subcommand. Every key has a default,
//! so `{}` is the reference configuration.

use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};
use stochseir_core::bayes::PriorSpec;
use stochseir_core::estimate::{EstimateOptions, SigmaSource, WindowPolicy};
use stochseir_core::model::REFERENCE_POPULATION;
use stochseir_core::reconstruct::InitialMode;
use stochseir_core::simulate::{Positivity, Scheme};
use stochseir_core::{ModelParams, StateVec};

use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mu: Option<f64>,
    pub beta_s: Option<f64>,
    pub beta_a: Option<f64>,
    pub kappa: Option<f64>,
    pub p: Option<f64>,
    pub theta: Option<f64>,
    pub alpha_a: Option<f64>,
    pub alpha_s: Option<f64>,
    pub gamma: Option<f64>,
    pub sigma: Option<f64>,
    pub population_n: Option<u64>,
    pub simulate: SimulateBlock,
    pub reconstruct: ReconstructBlock,
    pub estimate: EstimateBlock,
    pub validate: ValidateBlock,
    pub mc_study: McStudyBlock,
    pub mcmc: McmcBlock,
}

/// Initial fractions; `S` is the complement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialFractions {
    pub e: f64,
    pub i_a: f64,
    pub i_s: f64,
    pub r: f64,
}

impl InitialFractions {
    pub fn state(&self) -> Result<StateVec, CliError> {
        Ok(StateVec::from_infected(self.e, self.i_a, self.i_s, self.r)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateBlock {
    /// `None`: the reference initial state.
    pub init: Option<InitialFractions>,
    pub dt: f64,
    pub n_steps: usize,
    pub scheme: Scheme,
    pub positivity: Positivity,
}

impl Default for SimulateBlock {
    fn default() -> Self {
        Self {
            init: None,
            dt: 1e-3,
            n_steps: 46,
            scheme: Scheme::EulerMaruyama,
            positivity: Positivity::Reject,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructBlock {
    pub input: Option<PathBuf>,
    pub init: InitialMode,
    pub dt: f64,
    pub n_rep: usize,
    pub scheme: Scheme,
    pub positivity: Positivity,
}

impl Default for ReconstructBlock {
    fn default() -> Self {
        Self {
            input: None,
            init: InitialMode::reference(),
            dt: 1e-3,
            n_rep: 1,
            scheme: Scheme::EulerMaruyama,
            positivity: Positivity::Reject,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateBlock {
    /// Known noise intensity; `None` estimates it by quadratic variation.
    pub known_sigma: Option<f64>,
    pub window: WindowPolicy,
}

impl EstimateBlock {
    pub fn options(&self) -> EstimateOptions {
        EstimateOptions {
            sigma: self
                .known_sigma
                .map_or(SigmaSource::Estimated, SigmaSource::Known),
            window: self.window,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateBlock {
    pub alpha: f64,
}

impl Default for ValidateBlock {
    fn default() -> Self {
        Self { alpha: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McStudyBlock {
    pub horizons: Vec<f64>,
    pub n_rep: usize,
    pub dt: f64,
    pub scheme: Scheme,
    /// Synthetic studies start with this many recovered persons.
    pub recovered_persons: f64,
}

impl Default for McStudyBlock {
    fn default() -> Self {
        Self {
            horizons: vec![0.02, 0.04, 0.08],
            n_rep: 200,
            dt: 1e-3,
            scheme: Scheme::Milstein,
            recovered_persons: 1000.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McmcBlock {
    pub input: Option<PathBuf>,
    pub iterations: usize,
    pub burn_in: usize,
    pub proposal_sd: [f64; 2],
    pub start: Option<[f64; 2]>,
    pub priors: PriorSpec,
    pub steps_per_day: usize,
}

impl Default for McmcBlock {
    fn default() -> Self {
        Self {
            input: None,
            iterations: 100_000,
            burn_in: 10_000,
            proposal_sd: [0.05, 0.02],
            start: None,
            priors: PriorSpec::reference(),
            steps_per_day: 4,
        }
    }
}

impl RunConfig {
    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.into(),
            message: e.to_string(),
        })
    }

    /// Reference parameters overridden by the keys present.
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let r = ModelParams::reference();
        let params = ModelParams {
            mu: self.mu.unwrap_or(r.mu),
            beta_s: self.beta_s.unwrap_or(r.beta_s),
            beta_a: self.beta_a.unwrap_or(r.beta_a),
            kappa: self.kappa.unwrap_or(r.kappa),
            p: self.p.unwrap_or(r.p),
            theta: self.theta.unwrap_or(r.theta),
            alpha_a: self.alpha_a.unwrap_or(r.alpha_a),
            alpha_s: self.alpha_s.unwrap_or(r.alpha_s),
            gamma: self.gamma.unwrap_or(r.gamma),
            sigma: self.sigma.unwrap_or(r.sigma),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn population(&self) -> u64 {
        self.population_n.unwrap_or(REFERENCE_POPULATION)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_reference() {
        let cfg: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg.params().unwrap(), ModelParams::reference());
        assert_eq!(cfg.population(), REFERENCE_POPULATION);
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn top_level_keys_override_params() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"sigma": 0.02, "p": 0.5, "simulate": {"scheme": "milstein"}}"#,
        )
        .unwrap();
        let p = cfg.params().unwrap();
        assert_eq!((p.sigma, p.p), (0.02, 0.5));
        assert_eq!(cfg.simulate.scheme, Scheme::Milstein);
        assert_eq!(cfg.simulate.n_steps, 46);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sigmaa": 1}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"mcmc": {"iters": 1}}"#).is_err());
    }

    #[test]
    fn invalid_parameter_fails_validation() {
        let cfg: RunConfig = serde_json::from_str(r#"{"p": 1.5}"#).unwrap();
        assert!(cfg.params().is_err());
    }

    #[test]
    fn prior_initial_mode_parses() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"reconstruct": {"init": {"mode": "prior", "lo": 47, "hi": 2100, "population_n": 26446435, "r": 0}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.reconstruct.init, InitialMode::reference_prior());
    }
}
