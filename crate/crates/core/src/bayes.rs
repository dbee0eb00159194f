//! Deterministic baseline: RK4 integration, Poisson likelihood on cumulative
//! symptomatic incidence, random-walk Metropolis over `(p, κ)`.

use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal, Uniform};
use thiserror::Error;

use crate::math;
use crate::model::{deterministic_drift, ModelError, ModelParams, Path, StateVec};
use crate::reconstruct::IncidenceSeries;
use crate::rng::NoiseKey;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BayesError {
    #[error("lengths differ: {counts} counts, {lambda} intensities")]
    LengthMismatch { counts: usize, lambda: usize },
    #[error("entry {index}: intensity {lambda:e} cannot produce count {count}")]
    Domain {
        index: usize,
        count: u64,
        lambda: f64,
    },
    #[error("invalid prior: {0}")]
    InvalidPrior(&'static str),
    #[error("invalid sampler setting: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Classical RK4 on `(S, E, I_a, I_s, R, D)` with the `θ`-carrying vector
/// field. `D` starts from `init.d()` or 0.
pub fn ode_rk4(
    params: &ModelParams,
    init: &StateVec,
    dt: f64,
    n_steps: usize,
) -> Result<Path, BayesError> {
    params.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ModelError::InvalidStep(dt).into());
    }
    let rhs = |y: &[f64; 6]| -> [f64; 6] {
        let x = StateVec::raw([y[0], y[1], y[2], y[3], y[4]]);
        let r = deterministic_drift(&x, params);
        [r.s, r.e, r.i_a, r.i_s, r.r, r.d]
    };
    let axpy = |y: &[f64; 6], h: f64, k: &[f64; 6]| -> [f64; 6] {
        core::array::from_fn(|i| y[i] + h * k[i])
    };
    let a = init.as_array();
    let mut y = [a[0], a[1], a[2], a[3], a[4], init.d().unwrap_or(0.0)];
    let mut states = Vec::with_capacity(n_steps + 1);
    let pack = |y: &[f64; 6]| StateVec::with_deaths_unchecked([y[0], y[1], y[2], y[3], y[4]], y[5]);
    states.push(pack(&y));
    for _ in 0..n_steps {
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, 0.5 * dt, &k1));
        let k3 = rhs(&axpy(&y, 0.5 * dt, &k2));
        let k4 = rhs(&axpy(&y, dt, &k3));
        y = core::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        states.push(pack(&y));
    }
    Ok(Path::new(0.0, dt, states, None)?)
}

/// `λ_n = Σ_{k<n} (1−p) κ E(t_k) Δ N`, so `λ_0 = 0` and `λ` is in counts.
pub fn cumulative_incidence(path: &Path, params: &ModelParams, population: f64) -> Vec<f64> {
    let rate = (1.0 - params.p) * params.kappa * path.dt() * population;
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(path.len());
    out.push(0.0);
    for x in &path.states()[..path.len() - 1] {
        acc += rate * x.e();
        out.push(acc);
    }
    out
}

/// `Σ (y ln λ − λ − ln y!)`; `y = λ = 0` entries contribute 0.
pub fn poisson_loglik(counts: &[u64], lambda: &[f64]) -> Result<f64, BayesError> {
    if counts.len() != lambda.len() {
        return Err(BayesError::LengthMismatch {
            counts: counts.len(),
            lambda: lambda.len(),
        });
    }
    let mut total = 0.0;
    for (index, (&y, &l)) in counts.iter().zip(lambda).enumerate() {
        if !(l >= 0.0) || (l == 0.0 && y > 0) {
            return Err(BayesError::Domain {
                index,
                count: y,
                lambda: l,
            });
        }
        if y > 0 {
            let yf = y as f64;
            total += yf * math::ln(l) - math::ln_gamma(yf + 1.0);
        }
        total -= l;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PriorSpec {
    /// `p ~ Uniform(p_lo, p_hi)`.
    pub p_lo: f64,
    pub p_hi: f64,
    /// `κ ~ Gamma(shape, rate)`.
    pub kappa_shape: f64,
    pub kappa_rate: f64,
}

impl PriorSpec {
    /// `p ~ Uniform(0.3, 0.8)`, `κ ~ Gamma(10, 50)`.
    pub fn reference() -> Self {
        Self {
            p_lo: 0.3,
            p_hi: 0.8,
            kappa_shape: 10.0,
            kappa_rate: 50.0,
        }
    }

    pub fn validate(&self) -> Result<(), BayesError> {
        if !(self.p_lo < self.p_hi && self.p_lo >= 0.0 && self.p_hi <= 1.0) {
            return Err(BayesError::InvalidPrior("need 0 <= p_lo < p_hi <= 1"));
        }
        if !(self.kappa_shape > 0.0 && self.kappa_rate > 0.0) {
            return Err(BayesError::InvalidPrior(
                "gamma shape and rate must be positive",
            ));
        }
        Ok(())
    }

    pub fn mean(&self) -> [f64; 2] {
        [
            0.5 * (self.p_lo + self.p_hi),
            self.kappa_shape / self.kappa_rate,
        ]
    }

    /// Unnormalised log prior; `None` outside the support.
    pub fn log_density(&self, p: f64, kappa: f64) -> Option<f64> {
        if !(self.p_lo..=self.p_hi).contains(&p) || !(kappa > 0.0) {
            return None;
        }
        Some((self.kappa_shape - 1.0) * math::ln(kappa) - self.kappa_rate * kappa)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    /// Random-walk standard deviations for `(p, κ)`.
    pub proposal_sd: [f64; 2],
    pub seed: NoiseKey,
    /// Starting point; prior means when absent.
    pub start: Option<[f64; 2]>,
}

impl McmcConfig {
    pub fn new(iterations: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            iterations,
            burn_in,
            proposal_sd: [0.05, 0.02],
            seed: NoiseKey::new(seed),
            start: None,
        }
    }

    fn validate(&self) -> Result<(), BayesError> {
        if self.burn_in >= self.iterations {
            return Err(BayesError::InvalidConfig(
                "burn_in must be below iterations",
            ));
        }
        if !self.proposal_sd.iter().all(|s| s.is_finite() && *s >= 0.0) {
            return Err(BayesError::InvalidConfig(
                "proposal scales must be finite and >= 0",
            ));
        }
        Ok(())
    }
}

/// Fixed parts of the incidence model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncidenceModel {
    /// Everything except `p` and `κ`.
    pub fixed: ModelParams,
    pub init: StateVec,
    /// RK4 steps per reporting day.
    pub steps_per_day: usize,
}

impl IncidenceModel {
    pub fn reference() -> Self {
        Self {
            fixed: ModelParams::reference(),
            init: StateVec::reference(),
            steps_per_day: 4,
        }
    }

    /// Expected cumulative counts at each reporting day, `λ(day 0) = 0`.
    pub fn expected_cumulative(
        &self,
        p: f64,
        kappa: f64,
        days: usize,
        population: f64,
    ) -> Result<Vec<f64>, BayesError> {
        let params = ModelParams {
            p,
            kappa,
            ..self.fixed
        };
        let spd = self.steps_per_day.max(1);
        let steps = days.saturating_sub(1) * spd;
        let path = ode_rk4(&params, &self.init, 1.0 / spd as f64, steps)?;
        let lambda = cumulative_incidence(&path, &params, population);
        Ok(lambda.into_iter().step_by(spd).collect())
    }
}

/// Cumulative counts `Y_n = Σ_{j=1..n} counts_j`, `Y_0 = 0`; the day-0 count
/// is the initial `I_s`, not new incidence.
pub fn cumulative_counts(series: &IncidenceSeries) -> Vec<u64> {
    let mut acc = 0u64;
    let mut out = Vec::with_capacity(series.len());
    out.push(0);
    for &c in &series.counts()[1..] {
        acc += c;
        out.push(acc);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sample {
    pub iter: usize,
    pub p: f64,
    pub kappa: f64,
    pub loglik: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainOutput {
    /// Post burn-in draws.
    pub samples: Vec<Sample>,
    pub acceptance_rate: f64,
    /// Proposals outside the prior support (all rejected).
    pub out_of_support: usize,
}

impl ChainOutput {
    pub fn column(&self, f: fn(&Sample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }
}

/// Random-walk Metropolis on two coordinates. `log_target` returns
/// `(log posterior, log likelihood)` or `None` outside the support.
pub fn run_chain<F>(
    mut log_target: F,
    start: [f64; 2],
    cfg: &McmcConfig,
) -> Result<ChainOutput, BayesError>
where
    F: FnMut([f64; 2]) -> Result<Option<(f64, f64)>, BayesError>,
{
    cfg.validate()?;
    let mut rng = cfg.seed.rng();
    let unit = Uniform::new(0.0f64, 1.0).expect("valid range");
    let mut x = start;
    let (mut lp, mut ll) =
        log_target(x)?.ok_or(BayesError::InvalidConfig("start outside prior support"))?;
    let mut accepted = 0usize;
    let mut out_of_support = 0usize;
    let mut samples = Vec::with_capacity(cfg.iterations - cfg.burn_in);
    for iter in 0..cfg.iterations {
        let z0: f64 = StandardNormal.sample(&mut rng);
        let z1: f64 = StandardNormal.sample(&mut rng);
        let u = unit.sample(&mut rng);
        let y = [
            x[0] + cfg.proposal_sd[0] * z0,
            x[1] + cfg.proposal_sd[1] * z1,
        ];
        match log_target(y)? {
            None => out_of_support += 1,
            Some((lp_y, ll_y)) => {
                if math::ln(u) < lp_y - lp {
                    x = y;
                    lp = lp_y;
                    ll = ll_y;
                    accepted += 1;
                }
            }
        }
        if iter >= cfg.burn_in {
            samples.push(Sample {
                iter,
                p: x[0],
                kappa: x[1],
                loglik: ll,
            });
        }
    }
    Ok(ChainOutput {
        samples,
        acceptance_rate: accepted as f64 / cfg.iterations as f64,
        out_of_support,
    })
}

/// Posterior draws of `(p, κ)` given daily counts.
pub fn metropolis(
    series: &IncidenceSeries,
    priors: &PriorSpec,
    model: &IncidenceModel,
    cfg: &McmcConfig,
) -> Result<ChainOutput, BayesError> {
    priors.validate()?;
    let y = cumulative_counts(series);
    let population = series.population_n() as f64;
    let days = series.len();
    let target = |[p, kappa]: [f64; 2]| -> Result<Option<(f64, f64)>, BayesError> {
        let Some(prior) = priors.log_density(p, kappa) else {
            return Ok(None);
        };
        let lambda = model.expected_cumulative(p, kappa, days, population)?;
        match poisson_loglik(&y, &lambda) {
            Ok(ll) => Ok(Some((prior + ll, ll))),
            Err(BayesError::Domain { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    run_chain(target, cfg.start.unwrap_or(priors.mean()), cfg)
}

/// Monte Carlo standard error of the mean by non-overlapping batch means.
pub fn batch_means_se(x: &[f64], n_batches: usize) -> f64 {
    let b = x.len() / n_batches.max(1);
    if b == 0 || n_batches < 2 {
        return f64::NAN;
    }
    let means: Vec<f64> = x
        .chunks_exact(b)
        .take(n_batches)
        .map(crate::summary::mean)
        .collect();
    crate::summary::std_dev(&means) / math::sqrt(n_batches as f64)
}
