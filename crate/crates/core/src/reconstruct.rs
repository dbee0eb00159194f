//! Latent compartments from an observed symptomatic series.
//!
//! `I_s` is pinned to the observations at every grid point. `S`, `E` and `I_a`
//! follow the discretised stochastic system driven by one increment per step,
//! and `R` closes the simplex: `R = 1 − S − E − I_a − I_s`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::math;
use crate::model::{Compartment, ModelError, ModelParams, Path, StateVec, REFERENCE_POPULATION};
use crate::rng::NoiseKey;
use crate::simulate::{Positivity, Scheme, REFLECT_FLOOR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error("incidence series has no records")]
    EmptySeries,
    #[error("population {population} is smaller than the largest count {max_count}")]
    PopulationTooSmall { population: u64, max_count: u64 },
    #[error("need at least 2 observations, got {0}")]
    LengthMismatch(usize),
    #[error("observation {index} = {value:e} is not a fraction in [0, 1]")]
    Observation { index: usize, value: f64 },
    #[error("step {step}: latent {compartment} = {value:e} left [0, 1]")]
    Positivity {
        step: usize,
        compartment: Compartment,
        value: f64,
    },
    #[error("initial {what} = {value:e} is not in [0, 1)")]
    InitialFraction { what: &'static str, value: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        source: Box<ReconstructError>,
    },
}

/// Daily reported symptomatic cases for a population of size `population_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSeries {
    dates: Vec<String>,
    counts: Vec<u64>,
    population_n: u64,
}

impl IncidenceSeries {
    pub fn new(
        dates: Vec<String>,
        counts: Vec<u64>,
        population_n: u64,
    ) -> Result<Self, ReconstructError> {
        if counts.is_empty() {
            return Err(ReconstructError::EmptySeries);
        }
        if dates.len() != counts.len() {
            return Err(ReconstructError::LengthMismatch(
                dates.len().min(counts.len()),
            ));
        }
        let max_count = counts.iter().copied().max().unwrap_or(0);
        if population_n == 0 || population_n < max_count {
            return Err(ReconstructError::PopulationTooSmall {
                population: population_n,
                max_count,
            });
        }
        Ok(Self {
            dates,
            counts,
            population_n,
        })
    }

    /// Series with empty date labels.
    pub fn from_counts(counts: Vec<u64>, population_n: u64) -> Result<Self, ReconstructError> {
        let dates = counts.iter().map(|_| String::new()).collect();
        Self::new(dates, counts, population_n)
    }

    pub fn dates(&self) -> &[String] {
        &self.dates
    }
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
    pub fn population_n(&self) -> u64 {
        self.population_n
    }
    pub fn len(&self) -> usize {
        self.counts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// `count / N` for every record.
pub fn normalize(series: &IncidenceSeries) -> Vec<f64> {
    let n = series.population_n as f64;
    series.counts.iter().map(|&c| c as f64 / n).collect()
}

/// How `E(0)`, `I_a(0)` and `R(0)` are chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "lowercase"))]
pub enum InitialMode {
    /// Fixed fractions.
    Fixed { e: f64, i_a: f64, r: f64 },
    /// `E(0), I_a(0) ~ Uniform(lo, hi) / N` drawn independently per replicate.
    Prior {
        lo: f64,
        hi: f64,
        population_n: f64,
        r: f64,
    },
}

impl InitialMode {
    /// Posterior means for Mexico City, `R(0) = 0`.
    pub fn reference() -> Self {
        let x = StateVec::reference();
        InitialMode::Fixed {
            e: x.e(),
            i_a: x.i_a(),
            r: x.r(),
        }
    }

    /// The `Uniform(47, 2100) / N` priors with `R(0) = 0`.
    pub fn reference_prior() -> Self {
        InitialMode::Prior {
            lo: 47.0,
            hi: 2100.0,
            population_n: REFERENCE_POPULATION as f64,
            r: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructConfig {
    pub params: ModelParams,
    pub init: InitialMode,
    pub dt: f64,
    pub seed: NoiseKey,
    pub scheme: Scheme,
    pub positivity: Positivity,
    /// Use the legacy update lines (see `legacy_update`) instead of the model discretisation.
    pub pedantic_paper: bool,
}

impl ReconstructConfig {
    pub fn reference(seed: u64) -> Self {
        Self {
            params: ModelParams::reference(),
            init: InitialMode::reference(),
            dt: 1e-3,
            seed: NoiseKey::new(seed),
            scheme: Scheme::EulerMaruyama,
            positivity: Positivity::Reject,
            pedantic_paper: false,
        }
    }

    fn validate(&self) -> Result<(), ReconstructError> {
        self.params.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ModelError::InvalidStep(self.dt).into());
        }
        match self.init {
            InitialMode::Fixed { e, i_a, r } => {
                for (what, value) in [("E", e), ("Ia", i_a), ("R", r)] {
                    check_initial(what, value)?;
                }
            }
            InitialMode::Prior {
                lo,
                hi,
                population_n,
                r,
            } => {
                check_initial("R", r)?;
                if !(population_n > 0.0 && 0.0 <= lo && lo < hi && hi < population_n) {
                    return Err(ReconstructError::InitialFraction {
                        what: "prior range",
                        value: hi / population_n,
                    });
                }
            }
        }
        Ok(())
    }
}

fn check_initial(what: &'static str, value: f64) -> Result<(), ReconstructError> {
    if (0.0..1.0).contains(&value) {
        Ok(())
    } else {
        Err(ReconstructError::InitialFraction { what, value })
    }
}

fn initial_latents<R: Rng>(init: InitialMode, rng: &mut R) -> (f64, f64, f64) {
    match init {
        InitialMode::Fixed { e, i_a, r } => (e, i_a, r),
        InitialMode::Prior {
            lo,
            hi,
            population_n,
            r,
        } => {
            let e = rng.random_range(lo..hi) / population_n;
            let i_a = rng.random_range(lo..hi) / population_n;
            (e, i_a, r)
        }
    }
}

/// Runs the reconstruction recurrence on `obs_is` with the increments of
/// `cfg.seed`. Increments are drawn first; prior initial values, if any, come
/// from the same stream afterwards.
pub fn reconstruct_latent(
    obs_is: &[f64],
    cfg: &ReconstructConfig,
) -> Result<Path, ReconstructError> {
    cfg.validate()?;
    if obs_is.len() < 2 {
        return Err(ReconstructError::LengthMismatch(obs_is.len()));
    }
    let mut rng = cfg.seed.rng();
    let scale = math::sqrt(cfg.dt);
    let increments: Vec<f64> = (1..obs_is.len())
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            scale * z
        })
        .collect();
    let (e0, i_a0, r0) = initial_latents(cfg.init, &mut rng);
    reconstruct_with_increments(obs_is, cfg, (e0, i_a0, r0), &increments)
}

/// The recurrence with explicit initial latents `(E, I_a, R)` and increments.
pub fn reconstruct_with_increments(
    obs_is: &[f64],
    cfg: &ReconstructConfig,
    (e0, i_a0, r0): (f64, f64, f64),
    increments: &[f64],
) -> Result<Path, ReconstructError> {
    if obs_is.len() < 2 {
        return Err(ReconstructError::LengthMismatch(obs_is.len()));
    }
    if increments.len() + 1 != obs_is.len() {
        return Err(ModelError::IncrementLength {
            expected: obs_is.len() - 1,
            actual: increments.len(),
        }
        .into());
    }
    for (index, &value) in obs_is.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(ReconstructError::Observation { index, value });
        }
    }
    let s0 = 1.0 - e0 - i_a0 - r0 - obs_is[0];
    let first = close_row(s0, e0, i_a0, obs_is[0], cfg.positivity, 0)?;
    let mut states = Vec::with_capacity(obs_is.len());
    states.push(first);
    let mut x = first;
    for (k, &dw) in increments.iter().enumerate() {
        let (s, e, i_a) = if cfg.pedantic_paper {
            legacy_update(&x, &cfg.params, cfg.dt, dw)
        } else {
            model_update(&x, &cfg.params, cfg.dt, dw, cfg.scheme)
        };
        x = close_row(s, e, i_a, obs_is[k + 1], cfg.positivity, k + 1)?;
        states.push(x);
    }
    Ok(Path::new(0.0, cfg.dt, states, Some(increments.to_vec()))?)
}

fn model_update(
    x: &StateVec,
    params: &ModelParams,
    dt: f64,
    dw: f64,
    scheme: Scheme,
) -> (f64, f64, f64) {
    let ModelParams {
        mu,
        kappa,
        p,
        alpha_a,
        gamma,
        sigma,
        ..
    } = *params;
    let f = params.force_of_infection(x);
    let (s, e, i_a, r) = (x.s(), x.e(), x.i_a(), x.r());
    let mut s1 = s + (mu - mu * s - f * s + gamma * r) * dt + sigma * (1.0 - s) * dw;
    let mut e1 = e + (f * s - kappa * e - mu * e) * dt - sigma * e * dw;
    let mut a1 = i_a + (p * kappa * e - (alpha_a + mu) * i_a) * dt - sigma * i_a * dw;
    if scheme == Scheme::Milstein {
        let c = 0.5 * sigma * sigma * (dw * dw - dt);
        s1 -= c * (1.0 - s);
        e1 += c * e;
        a1 += c * i_a;
    }
    (s1, e1, a1)
}

/// Legacy update lines, kept bug-for-bug: `I_a` has no `ΔW`, its inflow is
/// multiplied by `I_a`, and the `E` noise has the opposite sign.
fn legacy_update(x: &StateVec, params: &ModelParams, dt: f64, dw: f64) -> (f64, f64, f64) {
    let ModelParams {
        mu,
        beta_s,
        beta_a,
        kappa,
        p,
        alpha_a,
        gamma,
        sigma,
        ..
    } = *params;
    let (s, e, i_a, i_s, r) = (x.s(), x.e(), x.i_a(), x.i_s(), x.r());
    let s1 = s - (mu + beta_a * i_a + beta_s * i_s) * dt * s + (mu + gamma * r) * dt
        - sigma * (1.0 - s) * dw;
    let e1 = e - (kappa + mu) * dt * e + dt * (beta_s * i_s + beta_a * i_a * s) - sigma * e * dw;
    let a1 = i_a - p * kappa * e * dt * i_a - (alpha_a + mu) * i_a * dt - sigma * i_a * dt;
    (s1, e1, a1)
}

fn close_row(
    mut s: f64,
    mut e: f64,
    mut i_a: f64,
    i_s: f64,
    positivity: Positivity,
    step: usize,
) -> Result<StateVec, ReconstructError> {
    let mut r = 1.0 - s - e - i_a - i_s;
    let reject = |compartment, value| ReconstructError::Positivity {
        step,
        compartment,
        value,
    };
    let latents = [
        (Compartment::S, s),
        (Compartment::E, e),
        (Compartment::Ia, i_a),
        (Compartment::R, r),
    ];
    match positivity {
        Positivity::Reject => {
            for (c, v) in latents {
                if !(0.0..=1.0).contains(&v) {
                    return Err(reject(c, v));
                }
            }
        }
        Positivity::Reflect0 => {
            for (c, v) in latents {
                if !v.is_finite() {
                    return Err(reject(c, v));
                }
            }
            for v in [&mut e, &mut i_a] {
                if *v < 0.0 {
                    *v = REFLECT_FLOOR;
                }
            }
            r = 1.0 - s - e - i_a - i_s;
            if r < 0.0 {
                r = REFLECT_FLOOR;
                s = 1.0 - e - i_a - i_s - r;
            }
            if !(0.0..=1.0).contains(&s) {
                return Err(reject(Compartment::S, s));
            }
        }
    }
    Ok(StateVec::raw([s, e, i_a, i_s, r]))
}

/// `n_rep` reconstructions; replicate `k` uses stream `cfg.seed.stream + k`.
pub fn replicate_reconstructions(
    obs_is: &[f64],
    cfg: &ReconstructConfig,
    n_rep: usize,
) -> Result<Vec<Path>, ReconstructError> {
    (0..n_rep)
        .map(|k| {
            let cfg = replicate_config(cfg, k);
            reconstruct_latent(obs_is, &cfg).map_err(|e| ReconstructError::Replicate {
                index: k,
                source: Box::new(e),
            })
        })
        .collect()
}

pub(crate) fn replicate_config(cfg: &ReconstructConfig, k: usize) -> ReconstructConfig {
    ReconstructConfig {
        seed: cfg.seed.with_stream(cfg.seed.stream.wrapping_add(k as u64)),
        ..*cfg
    }
}
