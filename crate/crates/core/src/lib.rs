//! Stochastic SEIR epidemic model driven by one shared Wiener process.
//!
//! The crate covers the whole inference loop for the five-compartment model
//! `S, E, I_a, I_s, R` whose natural mortality rate is perturbed by white
//! noise (`μ dt ⇝ μ dt + σ dW`):
//!
//! * [`model`]: parameters, states, vector fields, `R₀` and the growth-phase
//!   window on which the estimators are consistent.
//! * [`simulate`]: Euler–Maruyama and Milstein path generation.
//! * [`reconstruct`]: latent-compartment reconstruction from an observed
//!   symptomatic series.
//! * [`estimate`]: quadratic-variation `σ̂`, closed-form maximum-likelihood
//!   `β̂_s, β̂_a, p̂` and the Girsanov log-likelihood ratio.
//! * [`diagnostics`]: recovered Wiener increments, QQ data, Jarque–Bera and
//!   the Monte Carlo consistency study.
//! * [`bayes`]: RK4 deterministic model with a Poisson incidence likelihood
//!   and a random-walk Metropolis sampler.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the companion `stochseir` crate.

#![no_std]
// NaN must fail every range check, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod bayes;
pub mod diagnostics;
pub mod estimate;
pub mod model;
pub mod reconstruct;
pub mod rng;
pub mod simulate;
pub mod summary;

pub use model::{
    Compartment, HypothesisWindow, ModelError, ModelParams, Path, R0Convention, StateVec,
};
pub use rng::NoiseKey;
