//! Quadratic-variation `σ̂`, closed-form MLEs of `β_s, β_a, p`, and the
//! Girsanov log-likelihood ratio.
//!
//! Every `∫·dt` is a left-point rectangle sum and every `∫·dW` or `∫·d ln X`
//! is a left-point (Itô) sum over the grid of the path.

use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math;
use crate::model::{hypothesis_window, HypothesisWindow, ModelError, ModelParams, Path, StateVec};
use crate::reconstruct::{
    reconstruct_latent, replicate_config, ReconstructConfig, ReconstructError,
};
use crate::simulate::SimError;
use crate::summary::Interval;

/// Denominators below this are treated as zero.
pub const DEGENERATE: f64 = 1e-30;
/// `det ≤ SINGULAR_RTOL · J_s · J_a` is singular.
pub const SINGULAR_RTOL: f64 = 1e-12;
/// Replication fails when more than this fraction of replicates error.
pub const MAX_FAILURE_RATE: f64 = 0.10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("empty input")]
    EmptyInput,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("row {index}: {what} = {value:e} must be positive")]
    Domain {
        index: usize,
        what: &'static str,
        value: f64,
    },
    #[error("degenerate denominator {what} = {value:e}")]
    DegenerateDenominator { what: &'static str, value: f64 },
    #[error("singular beta system: det = {det:e}, J_s·J_a = {scale:e}")]
    SingularSystem { det: f64, scale: f64 },
    #[error("no wiener increments available")]
    MissingIncrements,
    #[error("noise intensity must be positive")]
    ZeroSigma,
    #[error("hypothesis window is empty")]
    WindowViolated,
    #[error("{failed} of {total} replicates failed; first: {first}")]
    TooManyFailures {
        failed: usize,
        total: usize,
        first: Box<EstimateError>,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Simulate(#[from] SimError),
}

/// `Σ values[k] · dt`.
pub fn left_riemann(values: &[f64], dt: f64) -> Result<f64, EstimateError> {
    if values.is_empty() {
        return Err(EstimateError::EmptyInput);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ModelError::InvalidStep(dt).into());
    }
    Ok(values.iter().sum::<f64>() * dt)
}

/// `Σ_{k<n−1} f[k] (ln x[k+1] − ln x[k])`.
pub fn ito_log_integral(f: &[f64], x: &[f64]) -> Result<f64, EstimateError> {
    if f.len() != x.len() {
        return Err(EstimateError::LengthMismatch {
            expected: x.len(),
            actual: f.len(),
        });
    }
    if x.len() < 2 {
        return Err(EstimateError::LengthMismatch {
            expected: 2,
            actual: x.len(),
        });
    }
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(EstimateError::Domain {
            index,
            what: "x",
            value,
        });
    }
    Ok(f.iter()
        .zip(x.windows(2))
        .map(|(fk, w)| fk * (math::ln(w[1]) - math::ln(w[0])))
        .sum())
}

/// `Σ (x[k+1] − x[k])²`.
pub fn quadratic_variation(x: &[f64]) -> Result<f64, EstimateError> {
    if x.len() < 2 {
        return Err(EstimateError::LengthMismatch {
            expected: 2,
            actual: x.len(),
        });
    }
    Ok(x.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SigmaEstimate {
    pub sigma_hat: f64,
    /// `σ̂ᵢ² = ⟨Xᵢ⟩_T / ∫vᵢ² dt` with `v = (1−S, E, I_a, I_s, R)`.
    pub components: [f64; 5],
}

/// `σ̂ = √(mean of the five per-equation estimates)`.
pub fn estimate_sigma(path: &Path) -> Result<SigmaEstimate, EstimateError> {
    if path.len() < 2 {
        return Err(EstimateError::LengthMismatch {
            expected: 2,
            actual: path.len(),
        });
    }
    const NAMES: [&str; 5] = ["int (1-S)^2", "int E^2", "int Ia^2", "int Is^2", "int R^2"];
    let states = path.states();
    let left = &states[..states.len() - 1];
    let mut components = [0.0; 5];
    for (i, c) in components.iter_mut().enumerate() {
        let series: Vec<f64> = states.iter().map(|x| x.as_array()[i]).collect();
        let qv = quadratic_variation(&series)?;
        let sq: Vec<f64> = left
            .iter()
            .map(|x| {
                let v = if i == 0 { 1.0 - x.s() } else { x.as_array()[i] };
                v * v
            })
            .collect();
        let den = left_riemann(&sq, path.dt())?;
        if !(den >= DEGENERATE) {
            return Err(EstimateError::DegenerateDenominator {
                what: NAMES[i],
                value: den,
            });
        }
        *c = qv / den;
    }
    let mean = components.iter().sum::<f64>() / 5.0;
    Ok(SigmaEstimate {
        sigma_hat: math::sqrt(mean),
        components,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JFunctionals {
    pub j_s: f64,
    pub j_a: f64,
    pub j_sa: f64,
    pub j_2: f64,
}

fn check_interior(path: &Path, upto: usize) -> Result<(), EstimateError> {
    for (index, x) in path.states()[..upto].iter().enumerate() {
        for (what, value) in [
            ("1-S", 1.0 - x.s()),
            ("E", x.e()),
            ("Ia", x.i_a()),
            ("Is", x.i_s()),
        ] {
            if !(value > 0.0) {
                return Err(EstimateError::Domain { index, what, value });
            }
        }
    }
    Ok(())
}

/// Left-point states; every ratio argument checked positive.
fn left_states(path: &Path) -> Result<&[StateVec], EstimateError> {
    if path.len() < 2 {
        return Err(EstimateError::LengthMismatch {
            expected: 2,
            actual: path.len(),
        });
    }
    check_interior(path, path.len())?;
    Ok(&path.states()[..path.len() - 1])
}

#[inline]
fn g(x: &StateVec, i: f64) -> f64 {
    x.s() * i / (1.0 - x.s())
}

#[inline]
fn h(x: &StateVec, i: f64) -> f64 {
    x.s() * i / x.e()
}

pub fn j_functionals(path: &Path, kappa: f64) -> Result<JFunctionals, EstimateError> {
    let left = left_states(path)?;
    let dt = path.dt();
    let col = |f: &dyn Fn(&StateVec) -> f64| -> Vec<f64> { left.iter().map(f).collect() };
    let j_s = left_riemann(&col(&|x| g(x, x.i_s()).powi(2) + h(x, x.i_s()).powi(2)), dt)?;
    let j_a = left_riemann(&col(&|x| g(x, x.i_a()).powi(2) + h(x, x.i_a()).powi(2)), dt)?;
    let j_sa = left_riemann(
        &col(&|x| {
            let r1 = x.s() / (1.0 - x.s());
            let r2 = x.s() / x.e();
            x.i_a() * x.i_s() * (r1 * r1 + r2 * r2)
        }),
        dt,
    )?;
    let j_2 = left_riemann(
        &col(&|x| {
            let (qs, qa) = (x.e() / x.i_s(), x.e() / x.i_a());
            kappa * kappa * (qs * qs + qa * qa)
        }),
        dt,
    )?;
    Ok(JFunctionals {
        j_s,
        j_a,
        j_sa,
        j_2,
    })
}

/// The five integrals making up `A_⋆` for one infected class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ATerms {
    /// `∫ g d ln(1−S)`
    pub g_dlog: f64,
    /// `∫ g (μ + γR/(1−S) + σ²/2) dt`
    pub g_dt: f64,
    /// `∫ h d ln E`
    pub h_dlog: f64,
    /// `∫ h (μ + σ²/2) dt`
    pub h_dt: f64,
    /// `κ ∫ h dt`
    pub h_kappa: f64,
}

impl ATerms {
    pub fn total(&self) -> f64 {
        self.total_compensated().value()
    }

    fn total_compensated(&self) -> math::Compensated {
        let mut acc = math::Compensated::default();
        for t in self.as_array() {
            acc.add(t);
        }
        acc
    }

    fn as_array(&self) -> [f64; 5] {
        [self.g_dlog, self.g_dt, self.h_dlog, self.h_dt, self.h_kappa]
    }
}

/// `A_⋆` for `I_⋆ = pick(x)`, with `g = S I_⋆/(1−S)` and `h = S I_⋆/E`.
pub fn a_terms(
    path: &Path,
    params: &ModelParams,
    pick: fn(&StateVec) -> f64,
) -> Result<ATerms, EstimateError> {
    let left = left_states(path)?;
    let dt = path.dt();
    let ModelParams {
        mu,
        gamma,
        kappa,
        sigma,
        ..
    } = *params;
    let half_s2 = 0.5 * sigma * sigma;
    let gs: Vec<f64> = left.iter().map(|x| g(x, pick(x))).collect();
    let hs: Vec<f64> = left.iter().map(|x| h(x, pick(x))).collect();
    let one_minus_s: Vec<f64> = path.states().iter().map(|x| 1.0 - x.s()).collect();
    let e: Vec<f64> = path.states().iter().map(|x| x.e()).collect();
    let g_dlog = ito_log_integral(&padded(&gs), &one_minus_s)?;
    let g_rate: Vec<f64> = left
        .iter()
        .zip(&gs)
        .map(|(x, gk)| gk * (mu + gamma * x.r() / (1.0 - x.s()) + half_s2))
        .collect();
    let h_dlog = ito_log_integral(&padded(&hs), &e)?;
    let h_rate: Vec<f64> = hs.iter().map(|hk| hk * (mu + half_s2)).collect();
    Ok(ATerms {
        g_dlog,
        g_dt: left_riemann(&g_rate, dt)?,
        h_dlog,
        h_dt: left_riemann(&h_rate, dt)?,
        h_kappa: kappa * left_riemann(&hs, dt)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BetaEstimate {
    pub beta_s: f64,
    pub beta_a: f64,
    /// Ratio of the eigenvalues of `[J_s J_sa; J_sa J_a]`.
    pub condition_number: f64,
    pub det: f64,
    pub a_s: f64,
    pub a_a: f64,
}

fn check_system(j: &JFunctionals) -> Result<f64, EstimateError> {
    let mut acc = math::Compensated::default();
    acc.add_product(j.j_s, j.j_a);
    acc.add_product(-j.j_sa, j.j_sa);
    let det = acc.value();
    let scale = j.j_s * j.j_a;
    if !(det > SINGULAR_RTOL * scale) {
        return Err(EstimateError::SingularSystem { det, scale });
    }
    Ok(det)
}

fn condition_number(j: &JFunctionals) -> f64 {
    let tr = j.j_s + j.j_a;
    let disc = math::sqrt((j.j_s - j.j_a) * (j.j_s - j.j_a) + 4.0 * j.j_sa * j.j_sa);
    let hi = 0.5 * (tr + disc);
    let lo = (j.j_s * j.j_a - j.j_sa * j.j_sa) / hi;
    hi / lo
}

/// Solves `[J_s J_sa; J_sa J_a] (β_s, β_a)ᵀ = (A_s, A_a)ᵀ`, using `params.sigma`
/// as the noise intensity.
pub fn estimate_betas(path: &Path, params: &ModelParams) -> Result<BetaEstimate, EstimateError> {
    let j = j_functionals(path, params.kappa)?;
    let det = check_system(&j)?;
    let t_s = a_terms(path, params, StateVec::i_s)?.total_compensated();
    let t_a = a_terms(path, params, StateVec::i_a)?.total_compensated();
    // the system is often ill-conditioned: keep A_⋆ and both products unrounded
    let solve = |j_diag: f64, own: math::Compensated, other: math::Compensated| {
        let mut num = math::Compensated::default();
        num.add_scaled(j_diag, own);
        num.add_scaled(-j.j_sa, other);
        num.value() / det
    };
    let beta_s = solve(j.j_a, t_s, t_a);
    let beta_a = solve(j.j_s, t_a, t_s);
    let (a_s, a_a) = (t_s.value(), t_a.value());
    Ok(BetaEstimate {
        beta_s,
        beta_a,
        condition_number: condition_number(&j),
        det,
        a_s,
        a_a,
    })
}

/// The inverse expanded term by term:
/// `β̂_s = Σᵢ (J_a T_{s,i} − J_sa T_{a,i}) / det`, `β̂_a = Σᵢ (J_s T_{a,i} − J_sa T_{s,i}) / det`,
/// accumulated with compensation
/// over the five integrals `T_{⋆,i}` of [`ATerms`].
pub fn betas_closed_form(path: &Path, params: &ModelParams) -> Result<(f64, f64), EstimateError> {
    let j = j_functionals(path, params.kappa)?;
    let det = check_system(&j)?;
    let ts = a_terms(path, params, StateVec::i_s)?.as_array();
    let ta = a_terms(path, params, StateVec::i_a)?.as_array();
    let mut num_s = math::Compensated::default();
    let mut num_a = math::Compensated::default();
    for i in 0..5 {
        num_s.add_product(j.j_a, ts[i]);
        num_s.add_product(-j.j_sa, ta[i]);
        num_a.add_product(j.j_s, ta[i]);
        num_a.add_product(-j.j_sa, ts[i]);
    }
    Ok((num_s.value() / det, num_a.value() / det))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PEstimate {
    pub raw: f64,
    pub clamped: f64,
    pub out_of_range: bool,
}

/// Closed-form `p̂`, using `params.sigma` as the noise intensity.
pub fn estimate_p(path: &Path, params: &ModelParams) -> Result<PEstimate, EstimateError> {
    let left = left_states(path)?;
    let dt = path.dt();
    let ModelParams {
        mu,
        kappa,
        alpha_a,
        alpha_s,
        sigma,
        ..
    } = *params;
    let j = j_functionals(path, kappa)?;
    if !(j.j_2 > DEGENERATE) {
        return Err(EstimateError::DegenerateDenominator {
            what: "J_2",
            value: j.j_2,
        });
    }
    let q_s: Vec<f64> = left.iter().map(|x| x.e() / x.i_s()).collect();
    let q_a: Vec<f64> = left.iter().map(|x| x.e() / x.i_a()).collect();
    let q_s2: Vec<f64> = q_s.iter().map(|q| q * q).collect();
    let i_s: Vec<f64> = path.states().iter().map(StateVec::i_s).collect();
    let i_a: Vec<f64> = path.states().iter().map(StateVec::i_a).collect();
    let half_s2 = 0.5 * sigma * sigma;
    let num = kappa * kappa * left_riemann(&q_s2, dt)?
        - kappa * ito_log_integral(&padded(&q_s), &i_s)?
        + kappa * ito_log_integral(&padded(&q_a), &i_a)?
        - kappa * (alpha_s + mu + half_s2) * left_riemann(&q_s, dt)?
        + kappa * (alpha_a + mu + half_s2) * left_riemann(&q_a, dt)?;
    let raw = num / j.j_2;
    let clamped = raw.clamp(0.0, 1.0);
    Ok(PEstimate {
        raw,
        clamped,
        out_of_range: raw != clamped,
    })
}

/// Left-point weights extended by one unused trailing entry.
fn padded(w: &[f64]) -> Vec<f64> {
    let mut v = w.to_vec();
    v.push(0.0);
    v
}

/// The parameters that vary in the likelihood ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theta {
    pub beta_s: f64,
    pub beta_a: f64,
    pub p: f64,
}

impl From<&ModelParams> for Theta {
    fn from(m: &ModelParams) -> Self {
        Self {
            beta_s: m.beta_s,
            beta_a: m.beta_a,
            p: m.p,
        }
    }
}

/// `F(θ) − F(θ₀)` at one state; the `R` component does not depend on θ.
pub fn drift_difference(
    x: &StateVec,
    theta: Theta,
    theta0: Theta,
    kappa: f64,
    sigma: f64,
) -> [f64; 5] {
    let df = (theta.beta_s - theta0.beta_s) * x.i_s() + (theta.beta_a - theta0.beta_a) * x.i_a();
    let dp = theta.p - theta0.p;
    [
        -df * x.s() / (sigma * (1.0 - x.s())),
        -df * x.s() / (sigma * x.e()),
        -dp * kappa * x.e() / (sigma * x.i_a()),
        dp * kappa * x.e() / (sigma * x.i_s()),
        0.0,
    ]
}

/// `log dP_θ/dP_θ₀ = Σ_k ⟨ΔF_k, 1⟩ ΔW_k − ½ Σ_k |ΔF_k|² Δ`, using the path's
/// own increments.
pub fn girsanov_loglik(
    path: &Path,
    theta: Theta,
    theta0: Theta,
    params: &ModelParams,
) -> Result<f64, EstimateError> {
    let w = path.wiener().ok_or(EstimateError::MissingIncrements)?;
    girsanov_loglik_on(path, w, theta, theta0, params)
}

/// [`girsanov_loglik`] against caller-supplied increments (for instance the
/// residuals of [`crate::diagnostics::residual_increments`]).
pub fn girsanov_loglik_on(
    path: &Path,
    increments: &[f64],
    theta: Theta,
    theta0: Theta,
    params: &ModelParams,
) -> Result<f64, EstimateError> {
    if !(params.sigma > 0.0) {
        return Err(EstimateError::ZeroSigma);
    }
    let left = left_states(path)?;
    if increments.len() != left.len() {
        return Err(EstimateError::LengthMismatch {
            expected: left.len(),
            actual: increments.len(),
        });
    }
    let dt = path.dt();
    let mut stoch = 0.0;
    let mut quad = 0.0;
    for (x, &dw) in left.iter().zip(increments) {
        let d = drift_difference(x, theta, theta0, params.kappa, params.sigma);
        stoch += d.iter().sum::<f64>() * dw;
        quad += d.iter().map(|v| v * v).sum::<f64>() * dt;
    }
    Ok(stoch - 0.5 * quad)
}

/// Where `σ` comes from when the drift estimators need it.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SigmaSource {
    /// Plug in the quadratic-variation estimate.
    #[default]
    Estimated,
    /// Use this value.
    Known(f64),
}

/// Which part of the path the estimators see.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum WindowPolicy {
    /// Whole path; the window is reported and flagged when it ends early.
    #[default]
    Report,
    /// Truncate to the hypothesis window; fails when the window is empty.
    Restrict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateOptions {
    pub sigma: SigmaSource,
    pub window: WindowPolicy,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateReport {
    pub beta_s: f64,
    pub beta_a: f64,
    pub p: PEstimate,
    pub sigma: SigmaEstimate,
    /// The `σ` plugged into the drift estimators.
    pub sigma_used: f64,
    pub j: JFunctionals,
    pub condition_number: f64,
    pub window: HypothesisWindow,
    /// The window ends before the last grid point.
    pub window_truncated: bool,
}

/// `σ̂`, then `β̂_s, β̂_a, p̂` with the configured `σ`.
pub fn estimate(
    path: &Path,
    params: &ModelParams,
    opts: &EstimateOptions,
) -> Result<EstimateReport, EstimateError> {
    let window = hypothesis_window(path);
    let window_truncated = !window.covers(path.len());
    let view;
    let path = match opts.window {
        WindowPolicy::Report => path,
        WindowPolicy::Restrict => {
            if !window.satisfied {
                return Err(EstimateError::WindowViolated);
            }
            view = path.prefix(window.end_index + 1);
            &view
        }
    };
    let sigma = estimate_sigma(path)?;
    let sigma_used = match opts.sigma {
        SigmaSource::Estimated => sigma.sigma_hat,
        SigmaSource::Known(s) => s,
    };
    let plug = params.with_sigma(sigma_used);
    let betas = estimate_betas(path, &plug)?;
    let p = estimate_p(path, &plug)?;
    Ok(EstimateReport {
        beta_s: betas.beta_s,
        beta_a: betas.beta_a,
        p,
        sigma,
        sigma_used,
        j: j_functionals(path, params.kappa)?,
        condition_number: betas.condition_number,
        window,
        window_truncated,
    })
}

/// Mean and 2.5–97.5 percentile interval of each estimate across replicates.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationSummary {
    pub beta_s: Interval,
    pub beta_a: Interval,
    /// Raw (unclamped) `p̂`.
    pub p: Interval,
    pub sigma: Interval,
    pub reports: Vec<EstimateReport>,
    /// Failed replicates by index.
    pub failures: Vec<(usize, EstimateError)>,
}

impl ReplicationSummary {
    /// Fraction of successful replicates whose window ends early.
    pub fn window_violation_rate(&self) -> f64 {
        let n = self.reports.len().max(1) as f64;
        self.reports.iter().filter(|r| r.window_truncated).count() as f64 / n
    }

    /// Aggregates per-replicate outcomes; errors when more than
    /// [`MAX_FAILURE_RATE`] of them failed.
    pub fn collect(
        outcomes: impl IntoIterator<Item = Result<EstimateReport, EstimateError>>,
    ) -> Result<Self, EstimateError> {
        let mut reports = Vec::new();
        let mut failures = Vec::new();
        for (k, r) in outcomes.into_iter().enumerate() {
            match r {
                Ok(r) => reports.push(r),
                Err(e) => failures.push((k, e)),
            }
        }
        let total = reports.len() + failures.len();
        if total == 0 {
            return Err(EstimateError::EmptyInput);
        }
        if failures.len() as f64 > MAX_FAILURE_RATE * total as f64 {
            return Err(EstimateError::TooManyFailures {
                failed: failures.len(),
                total,
                first: Box::new(failures[0].1.clone()),
            });
        }
        let col = |f: fn(&EstimateReport) -> f64| -> Interval {
            Interval::of(&reports.iter().map(f).collect::<Vec<_>>())
        };
        Ok(Self {
            beta_s: col(|r| r.beta_s),
            beta_a: col(|r| r.beta_a),
            p: col(|r| r.p.raw),
            sigma: col(|r| r.sigma.sigma_hat),
            reports,
            failures,
        })
    }
}

/// Reconstructs `n_rep` latent paths from `obs_is` (replicate `k` on stream
/// `k` of `cfg.seed`) and estimates on each.
pub fn replicate_estimates(
    obs_is: &[f64],
    cfg: &ReconstructConfig,
    n_rep: usize,
    opts: &EstimateOptions,
) -> Result<ReplicationSummary, EstimateError> {
    if n_rep < 2 {
        return Err(EstimateError::LengthMismatch {
            expected: 2,
            actual: n_rep,
        });
    }
    ReplicationSummary::collect((0..n_rep).map(|k| {
        let cfg = replicate_config(cfg, k);
        let path = reconstruct_latent(obs_is, &cfg)?;
        estimate(&path, &cfg.params, opts)
    }))
}
