//! Euler–Maruyama and Milstein paths of the stochastic system.
//!
//! One scalar increment `ΔW_k` drives all five equations at step `k`.

use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::math;
use crate::model::{
    sde_drift, stochastic_diffusion, Compartment, ModelError, ModelParams, Path, StateVec,
};
use crate::rng::NoiseKey;

/// Floor used by [`Positivity::Reflect0`].
pub const REFLECT_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("step {step}: {compartment} = {value:e} left [0, 1]")]
    Positivity {
        step: usize,
        compartment: Compartment,
        value: f64,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Scheme {
    #[default]
    EulerMaruyama,
    Milstein,
}

/// What to do when a step leaves the unit interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Positivity {
    /// Stop with [`SimError::Positivity`].
    #[default]
    Reject,
    /// Lift negative components to [`REFLECT_FLOOR`] and take the excess from
    /// the largest component, keeping the sum.
    Reflect0,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub init: StateVec,
    pub dt: f64,
    pub n_steps: usize,
    pub scheme: Scheme,
    pub seed: NoiseKey,
    pub positivity: Positivity,
}

impl SimConfig {
    /// Reference parameters and initial state on the `Δ = 10⁻³`, 46-step grid.
    pub fn reference(seed: u64) -> Self {
        Self {
            params: ModelParams::reference(),
            init: StateVec::reference(),
            dt: 1e-3,
            n_steps: 46,
            scheme: Scheme::EulerMaruyama,
            seed: NoiseKey::new(seed),
            positivity: Positivity::Reject,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.params.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ModelError::InvalidStep(self.dt));
        }
        Ok(())
    }
}

/// `N(0, Δ)` increments of the driving Wiener process.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerIncrements {
    pub values: Vec<f64>,
}

/// `n_steps` draws of `√Δ · Z`, `Z` standard normal from the key's stream.
pub fn draw_increments(
    seed: NoiseKey,
    n_steps: usize,
    dt: f64,
) -> Result<WienerIncrements, ModelError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ModelError::InvalidStep(dt));
    }
    let scale = math::sqrt(dt);
    let mut rng = seed.rng();
    let values = (0..n_steps)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            scale * z
        })
        .collect();
    Ok(WienerIncrements { values })
}

/// Euler–Maruyama increment `a(x)Δ + b(x)ΔW`.
#[inline]
pub(crate) fn em_delta(x: &StateVec, params: &ModelParams, dt: f64, dw: f64) -> [f64; 5] {
    let a = sde_drift(x, params);
    let b = stochastic_diffusion(x, params.sigma);
    core::array::from_fn(|i| a[i] * dt + b[i] * dw)
}

/// `½ (Lb)(ΔW² − Δ)` with `Lb = σ²(−(1−S), E, I_a, I_s, R)`.
#[inline]
pub(crate) fn milstein_correction(x: &StateVec, sigma: f64, dt: f64, dw: f64) -> [f64; 5] {
    let c = 0.5 * sigma * sigma * (dw * dw - dt);
    [
        -c * (1.0 - x.s()),
        c * x.e(),
        c * x.i_a(),
        c * x.i_s(),
        c * x.r(),
    ]
}

pub(crate) fn settle(
    mut y: [f64; 5],
    positivity: Positivity,
    step: usize,
) -> Result<StateVec, SimError> {
    match positivity {
        Positivity::Reject => {
            for (c, &v) in Compartment::ALL.iter().zip(&y) {
                if !(0.0..=1.0).contains(&v) {
                    return Err(SimError::Positivity {
                        step,
                        compartment: *c,
                        value: v,
                    });
                }
            }
        }
        Positivity::Reflect0 => {
            if let Some((c, &v)) = Compartment::ALL
                .iter()
                .zip(&y)
                .find(|(_, v)| !v.is_finite())
            {
                return Err(SimError::Positivity {
                    step,
                    compartment: *c,
                    value: v,
                });
            }
            let mut added = 0.0;
            for v in y.iter_mut() {
                if *v < 0.0 {
                    added += REFLECT_FLOOR - *v;
                    *v = REFLECT_FLOOR;
                }
            }
            if added > 0.0 {
                let largest = (0..5)
                    .max_by(|&i, &j| y[i].total_cmp(&y[j]))
                    .expect("five components");
                y[largest] -= added;
            }
            for v in y.iter_mut() {
                *v = v.clamp(0.0, 1.0);
            }
        }
    }
    Ok(StateVec::raw(y))
}

fn advance(x: &StateVec, dw: f64, cfg: &SimConfig, step: usize) -> Result<StateVec, SimError> {
    let d = em_delta(x, &cfg.params, cfg.dt, dw);
    let mut y: [f64; 5] = core::array::from_fn(|i| x.as_array()[i] + d[i]);
    if cfg.scheme == Scheme::Milstein {
        let m = milstein_correction(x, cfg.params.sigma, cfg.dt, dw);
        for i in 0..5 {
            y[i] += m[i];
        }
    }
    settle(y, cfg.positivity, step)
}

/// One Euler–Maruyama step, regardless of `cfg.scheme`.
pub fn step_em(x: &StateVec, dw: f64, cfg: &SimConfig) -> Result<StateVec, SimError> {
    advance(
        x,
        dw,
        &SimConfig {
            scheme: Scheme::EulerMaruyama,
            ..*cfg
        },
        0,
    )
}

/// One Milstein step, regardless of `cfg.scheme`.
pub fn step_milstein(x: &StateVec, dw: f64, cfg: &SimConfig) -> Result<StateVec, SimError> {
    advance(
        x,
        dw,
        &SimConfig {
            scheme: Scheme::Milstein,
            ..*cfg
        },
        0,
    )
}

/// Path of `n_steps + 1` states driven by increments drawn from `cfg.seed`.
pub fn simulate_path(cfg: &SimConfig) -> Result<Path, SimError> {
    cfg.validate()?;
    let w = draw_increments(cfg.seed, cfg.n_steps, cfg.dt)?;
    simulate_with_increments(cfg, &w.values)
}

/// Path driven by caller-supplied increments; `cfg.seed` and `cfg.n_steps`
/// are ignored.
pub fn simulate_with_increments(cfg: &SimConfig, increments: &[f64]) -> Result<Path, SimError> {
    cfg.validate()?;
    let mut states = Vec::with_capacity(increments.len() + 1);
    states.push(cfg.init);
    let mut x = cfg.init;
    for (k, &dw) in increments.iter().enumerate() {
        x = advance(&x, dw, cfg, k + 1)?;
        states.push(x);
    }
    Ok(Path::new(0.0, cfg.dt, states, Some(increments.to_vec()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{deterministic_drift, hypothesis_window, sum5};
    use proptest::prelude::*;

    fn interior() -> StateVec {
        StateVec::new(0.9, 0.05, 0.02, 0.02, 0.01).unwrap()
    }

    fn cfg(sigma: f64) -> SimConfig {
        SimConfig {
            params: ModelParams::reference().with_sigma(sigma),
            ..SimConfig::reference(0)
        }
    }

    #[test]
    fn increments_are_reproducible() {
        assert!(draw_increments(NoiseKey::new(1), 0, 1e-3)
            .unwrap()
            .values
            .is_empty());
        let a = draw_increments(NoiseKey::new(5), 20, 1e-3).unwrap();
        let b = draw_increments(NoiseKey::new(5), 20, 1e-3).unwrap();
        assert_eq!(a, b);
        assert!(draw_increments(NoiseKey::new(5), 1, 0.0).is_err());
    }

    #[test]
    fn increment_variance_matches_step() {
        let w = draw_increments(NoiseKey::new(42), 100_000, 1e-3)
            .unwrap()
            .values;
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        assert!((var / 1e-3 - 1.0).abs() < 0.02, "variance {var}");
        assert!(mean.abs() < 4.0 * (1e-3 / n).sqrt());
    }

    #[test]
    fn zero_noise_em_is_explicit_euler() {
        let c = cfg(0.0);
        let x = interior();
        let y = step_em(&x, 0.3, &c).unwrap();
        let params = ModelParams {
            theta: 0.0,
            ..c.params
        };
        let d = deterministic_drift(&x, &params).living();
        for i in 0..5 {
            assert_eq!(y.as_array()[i], x.as_array()[i] + d[i] * c.dt);
        }
    }

    #[test]
    fn em_step_from_reference_state() {
        // mpmath, 30 digits
        let expected = [
            0.999_985_945_313_288_845_193_057_6,
            0.000_007_505_764_994_829_613_843_363,
            0.000_003_749_854_761_592_165_700_920,
            0.000_002_798_179_970_705_058_555_510,
            8.869_840_279_688_426_003_731_694e-10,
        ];
        let y = step_em(&StateVec::reference(), 0.01, &cfg(0.01)).unwrap();
        for (g, e) in y.as_array().iter().zip(expected) {
            assert!((g - e).abs() <= 1e-15 * e.max(1e-6), "{g} vs {e}");
        }
    }

    #[test]
    fn milstein_step_matches_oracle() {
        // mpmath, 30 digits
        let expected = [
            0.900_089_861_008_375_996_341_831_7,
            0.049_950_401_945_831_440_057_385_52,
            0.019_982_374_369_690_635_029_354_21,
            0.019_982_197_744_751_635_029_354_21,
            0.009_995_164_931_350_293_542_074_364,
        ];
        let y = step_milstein(&interior(), 0.02, &cfg(0.05)).unwrap();
        for (g, e) in y.as_array().iter().zip(expected) {
            assert!((g - e).abs() < 1e-16, "{g} vs {e}");
        }
    }

    #[test]
    fn milstein_reduces_to_em() {
        let x = interior();
        let c = cfg(0.0);
        assert_eq!(step_em(&x, 0.05, &c), step_milstein(&x, 0.05, &c));
        let c = cfg(0.05);
        let dw = c.dt.sqrt();
        let em = step_em(&x, dw, &c).unwrap().as_array();
        let mil = step_milstein(&x, dw, &c).unwrap().as_array();
        for i in 0..5 {
            assert!((em[i] - mil[i]).abs() < 1e-18);
        }
    }

    #[test]
    fn empty_and_zero_noise_paths() {
        let c = SimConfig {
            n_steps: 0,
            ..cfg(0.01)
        };
        let p = simulate_path(&c).unwrap();
        assert_eq!(p.states(), &[c.init]);

        let em = simulate_path(&SimConfig {
            n_steps: 200,
            ..cfg(0.0)
        })
        .unwrap();
        let mil = simulate_path(&SimConfig {
            n_steps: 200,
            scheme: Scheme::Milstein,
            ..cfg(0.0)
        })
        .unwrap();
        assert_eq!(em.states(), mil.states());
    }

    #[test]
    fn reference_run_stays_on_simplex_and_in_window() {
        let p = simulate_path(&SimConfig::reference(7)).unwrap();
        assert_eq!(p.len(), 47);
        assert!((p.states()[46].sum() - 1.0).abs() < 1e-10);
        // exhaustive scan of the growth-phase inequalities
        let x0 = p.states()[0];
        let mut scan_end = 0;
        let mut s_min = x0.s();
        for (k, x) in p.states().iter().enumerate().skip(1) {
            if !(x.s() < x0.s() && x.e() > x0.e() && x.i_a() > x0.i_a() && x.i_s() > x0.i_s()) {
                break;
            }
            if x.s() <= s_min {
                s_min = x.s();
                scan_end = k;
            }
        }
        assert_eq!(hypothesis_window(&p).end_index, scan_end);
    }

    #[test]
    fn reject_reports_step_and_reflect_keeps_sum() {
        let x = StateVec::new(0.99, 1e-9, 1e-3, 1e-3, 0.008 - 1e-9).unwrap();
        let c = cfg(0.05);
        let err = step_em(&x, 25.0, &c).unwrap_err();
        assert!(matches!(err, SimError::Positivity { step: 0, .. }));
        let c = SimConfig {
            positivity: Positivity::Reflect0,
            ..c
        };
        let y = step_em(&x, 25.0, &c).unwrap();
        assert!(y.as_array().iter().all(|v| *v >= REFLECT_FLOOR));
        assert!((y.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strong_error_decreases_under_refinement() {
        // Reference at Δ/64 on the same Brownian path; E component.
        let base = SimConfig {
            params: ModelParams::reference().with_sigma(0.05),
            init: StateVec::reference_with_recovered(1000.0),
            ..SimConfig::reference(0)
        };
        let t = 0.064;
        let fine_dt = 1e-3 / 64.0;
        let n_fine = (t / fine_dt) as usize;
        for scheme in [Scheme::EulerMaruyama, Scheme::Milstein] {
            let mut errs = [0.0f64; 3];
            for seed in 0..50 {
                let w = draw_increments(NoiseKey::new(seed), n_fine, fine_dt)
                    .unwrap()
                    .values;
                let reference = {
                    let c = SimConfig {
                        dt: fine_dt,
                        scheme,
                        ..base
                    };
                    *simulate_with_increments(&c, &w)
                        .unwrap()
                        .states()
                        .last()
                        .unwrap()
                };
                for (level, err) in errs.iter_mut().enumerate() {
                    let agg = 16 >> level; // Δ = 16, 8, 4 × fine step
                    let coarse: Vec<f64> = w.chunks(agg).map(|c| c.iter().sum()).collect();
                    let c = SimConfig {
                        dt: fine_dt * agg as f64,
                        scheme,
                        ..base
                    };
                    let end = *simulate_with_increments(&c, &coarse)
                        .unwrap()
                        .states()
                        .last()
                        .unwrap();
                    *err += (end.e() - reference.e()).abs();
                }
            }
            assert!(
                errs[0] > errs[1] && errs[1] > errs[2],
                "{scheme:?}: {errs:?}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn steps_preserve_sum(
            w in prop::array::uniform5(0.01..1.0f64),
            dw in -0.1..0.1f64,
            sigma in 0.0..0.05f64,
        ) {
            let total: f64 = w.iter().sum();
            let mut a = w.map(|v| v / total);
            a[0] = 1.0 - a[1] - a[2] - a[3] - a[4];
            let x = StateVec::from_array(a).unwrap();
            let c = SimConfig { positivity: Positivity::Reflect0, ..cfg(sigma) };
            for y in [step_em(&x, dw, &c), step_milstein(&x, dw, &c)] {
                let y = y.unwrap();
                if y.as_array().iter().all(|v| *v > REFLECT_FLOOR) {
                    prop_assert!((sum5(&y.as_array()) - 1.0).abs() < 1e-13);
                }
            }
        }

        #[test]
        fn identical_config_gives_identical_path(seed in any::<u64>()) {
            let c = SimConfig { scheme: Scheme::Milstein, ..SimConfig::reference(seed) };
            prop_assert_eq!(simulate_path(&c), simulate_path(&c));
        }
    }
}
