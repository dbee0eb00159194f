//! Parameters, states, vector fields and the growth-phase window.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::math;

/// Tolerance on `S + E + I_a + I_s + R = 1` for checked states.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Population of Mexico City used to normalise the reference series.
pub const REFERENCE_POPULATION: u64 = 26_446_435;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parameter `{name}` = {value} is out of range ({expected})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("compartment {compartment} = {value} is outside [0, 1]")]
    OutOfRange {
        compartment: Compartment,
        value: f64,
    },
    #[error("compartments sum to {sum}, expected 1 within {tol:e}")]
    NotOnSimplex { sum: f64, tol: f64 },
    #[error("non-positive log argument {what} = {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("noise intensity must be positive for the log-transformed drift")]
    ZeroSigma,
    #[error("expected {expected} wiener increments, got {actual}")]
    IncrementLength { expected: usize, actual: usize },
    #[error("a path needs at least one state")]
    EmptyPath,
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

/// The five living compartments, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Compartment {
    S,
    E,
    Ia,
    Is,
    R,
}

impl Compartment {
    pub const ALL: [Compartment; 5] = [
        Compartment::S,
        Compartment::E,
        Compartment::Ia,
        Compartment::Is,
        Compartment::R,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn label(self) -> &'static str {
        match self {
            Compartment::S => "S",
            Compartment::E => "E",
            Compartment::Ia => "Ia",
            Compartment::Is => "Is",
            Compartment::R => "R",
        }
    }
}

impl fmt::Display for Compartment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Epidemiological rates (per day) and the noise intensity σ (per √day).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    /// Natural death (and birth) rate.
    pub mu: f64,
    /// Transmission rate from symptomatic infecteds.
    pub beta_s: f64,
    /// Transmission rate from asymptomatic infecteds.
    pub beta_a: f64,
    /// Exposed to infectious rate; `1/κ` is the incubation time.
    pub kappa: f64,
    /// Fraction of the exposed outflow entering `I_a`.
    pub p: f64,
    /// Symptomatic case fatality (deterministic model only).
    pub theta: f64,
    pub alpha_a: f64,
    pub alpha_s: f64,
    /// Immunity loss rate.
    pub gamma: f64,
    pub sigma: f64,
}

impl ModelParams {
    /// Calibrated values for Mexico City, spring 2020, with `σ = 0.01`.
    pub fn reference() -> Self {
        Self {
            mu: 1.0 / (70.0 * 365.0),
            beta_s: 0.058_215_322_606_755,
            beta_a: 0.510_968_165_093_383,
            kappa: 0.196_078,
            p: 0.585_505,
            theta: 0.11,
            alpha_a: 0.167_504,
            alpha_s: 0.092_507,
            gamma: 1.0 / 365.0,
            sigma: 0.01,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// Rates must be finite and non-negative, `p, θ ∈ [0, 1]`, `σ ≥ 0`.
    pub fn validate(&self) -> Result<(), ModelError> {
        let rates = [
            ("mu", self.mu),
            ("beta_s", self.beta_s),
            ("beta_a", self.beta_a),
            ("kappa", self.kappa),
            ("alpha_a", self.alpha_a),
            ("alpha_s", self.alpha_s),
            ("gamma", self.gamma),
            ("sigma", self.sigma),
        ];
        for (name, value) in rates {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::InvalidParameter {
                    name,
                    value,
                    expected: "finite and >= 0",
                });
            }
        }
        for (name, value) in [("p", self.p), ("theta", self.theta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::InvalidParameter {
                    name,
                    value,
                    expected: "in [0, 1]",
                });
            }
        }
        Ok(())
    }

    /// `f_β = β_s I_s + β_a I_a`.
    #[inline]
    pub fn force_of_infection(&self, x: &StateVec) -> f64 {
        self.beta_s * x.i_s + self.beta_a * x.i_a
    }
}

/// One point of the population simplex, as fractions of `N`.
///
/// Checked constructors enforce `x ∈ [0,1]⁵` and `|Σx − 1| ≤ 1e-12`. The
/// optional `d` is the cumulative death fraction integrated by the
/// deterministic model; states carrying it come from
/// [`crate::bayes::ode_rk4`] and only satisfy the range check, because
/// deaths leave the living population when `θ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StateVec {
    s: f64,
    e: f64,
    i_a: f64,
    i_s: f64,
    r: f64,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    d: Option<f64>,
}

impl StateVec {
    pub fn new(s: f64, e: f64, i_a: f64, i_s: f64, r: f64) -> Result<Self, ModelError> {
        Self::from_array([s, e, i_a, i_s, r])
    }

    pub fn from_array(x: [f64; 5]) -> Result<Self, ModelError> {
        check_ranges(&x)?;
        let sum = sum5(&x);
        if !(math::abs(sum - 1.0) <= SIMPLEX_TOL) {
            return Err(ModelError::NotOnSimplex {
                sum,
                tol: SIMPLEX_TOL,
            });
        }
        Ok(Self::raw(x))
    }

    /// Builds `S` as the complement of the other four compartments.
    pub fn from_infected(e: f64, i_a: f64, i_s: f64, r: f64) -> Result<Self, ModelError> {
        Self::from_array([1.0 - e - i_a - i_s - r, e, i_a, i_s, r])
    }

    /// Mexico City initial condition: `E(0) = 198.50/N`, `I_a(0) = 99.17/N`,
    /// `I_s(0) = 74/N`, `R(0) = 0`.
    pub fn reference() -> Self {
        Self::reference_with_recovered(0.0)
    }

    /// The reference state with `R(0) = recovered / N` taken out of `S`.
    ///
    /// The reference state has `R(0) = 0`, which sits on the boundary of the
    /// log-transformed system; synthetic studies start from an interior point.
    pub fn reference_with_recovered(recovered: f64) -> Self {
        let n = REFERENCE_POPULATION as f64;
        Self::from_infected(
            198.504_524_717_486 / n,
            99.174_034_301_964 / n,
            74.0 / n,
            recovered / n,
        )
        .expect("reference state is on the simplex")
    }

    pub(crate) const fn raw(x: [f64; 5]) -> Self {
        Self {
            s: x[0],
            e: x[1],
            i_a: x[2],
            i_s: x[3],
            r: x[4],
            d: None,
        }
    }

    pub(crate) fn with_deaths_unchecked(x: [f64; 5], d: f64) -> Self {
        Self {
            d: Some(d),
            ..Self::raw(x)
        }
    }

    pub fn with_deaths(self, d: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&d) {
            return Err(ModelError::InvalidParameter {
                name: "d",
                value: d,
                expected: "in [0, 1]",
            });
        }
        Ok(Self { d: Some(d), ..self })
    }

    #[inline]
    pub fn s(&self) -> f64 {
        self.s
    }
    #[inline]
    pub fn e(&self) -> f64 {
        self.e
    }
    #[inline]
    pub fn i_a(&self) -> f64 {
        self.i_a
    }
    #[inline]
    pub fn i_s(&self) -> f64 {
        self.i_s
    }
    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }
    #[inline]
    pub fn d(&self) -> Option<f64> {
        self.d
    }

    #[inline]
    pub fn get(&self, c: Compartment) -> f64 {
        self.as_array()[c.index()]
    }

    #[inline]
    pub fn as_array(&self) -> [f64; 5] {
        [self.s, self.e, self.i_a, self.i_s, self.r]
    }

    #[inline]
    pub fn sum(&self) -> f64 {
        sum5(&self.as_array())
    }
}

fn check_ranges(x: &[f64; 5]) -> Result<(), ModelError> {
    for (c, &v) in Compartment::ALL.iter().zip(x) {
        if !(0.0..=1.0).contains(&v) {
            return Err(ModelError::OutOfRange {
                compartment: *c,
                value: v,
            });
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn sum5(x: &[f64; 5]) -> f64 {
    x[0] + x[1] + x[2] + x[3] + x[4]
}

/// Uniformly sampled trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    t0: f64,
    dt: f64,
    states: Vec<StateVec>,
    wiener: Option<Vec<f64>>,
}

impl Path {
    pub fn new(
        t0: f64,
        dt: f64,
        states: Vec<StateVec>,
        wiener: Option<Vec<f64>>,
    ) -> Result<Self, ModelError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(ModelError::InvalidStep(dt));
        }
        if states.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        if let Some(w) = &wiener {
            if w.len() != states.len() - 1 {
                return Err(ModelError::IncrementLength {
                    expected: states.len() - 1,
                    actual: w.len(),
                });
            }
        }
        Ok(Self {
            t0,
            dt,
            states,
            wiener,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn states(&self) -> &[StateVec] {
        &self.states
    }
    pub fn wiener(&self) -> Option<&[f64]> {
        self.wiener.as_deref()
    }
    pub fn len(&self) -> usize {
        self.states.len()
    }
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `t0 + k·dt`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Horizon `T = (n − 1)·dt` measured from `t0`.
    pub fn horizon(&self) -> f64 {
        (self.len() - 1) as f64 * self.dt
    }

    pub fn series(&self, c: Compartment) -> Vec<f64> {
        self.states.iter().map(|x| x.get(c)).collect()
    }

    /// The first `n_points` states (and the matching increments).
    pub fn prefix(&self, n_points: usize) -> Path {
        let n = n_points.clamp(1, self.len());
        Path {
            t0: self.t0,
            dt: self.dt,
            states: self.states[..n].to_vec(),
            wiener: self.wiener.as_ref().map(|w| w[..n - 1].to_vec()),
        }
    }

    pub fn without_wiener(mut self) -> Path {
        self.wiener = None;
        self
    }
}

/// Prefix `[t_start, t_end]` of a path lying in the growth-phase set
/// `S(T) ≤ S(t) < S(t₀)`, `E(t) > E(t₀)`, `I_a(t) > I_a(t₀)`, `I_s(t) > I_s(t₀)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HypothesisWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub satisfied: bool,
    /// Index of the last grid point inside the window.
    pub end_index: usize,
}

impl HypothesisWindow {
    /// Whether the window reaches the last point of a path with `n_points`.
    pub fn covers(&self, n_points: usize) -> bool {
        self.reaches(n_points.saturating_sub(1))
    }

    /// Whether grid point `index` lies inside a nonempty window.
    pub fn reaches(&self, index: usize) -> bool {
        self.satisfied && self.end_index >= index
    }
}

/// Largest prefix of `path` inside the growth-phase set.
///
/// Points `1..=k` must each satisfy the strict inequalities against the
/// initial state, and `S(t_k)` must be the smallest `S` seen so far.
pub fn hypothesis_window(path: &Path) -> HypothesisWindow {
    let states = path.states();
    let x0 = states[0];
    let mut end = 0;
    let mut s_min = x0.s;
    for (k, x) in states.iter().enumerate().skip(1) {
        let growing = x.s < x0.s && x.e > x0.e && x.i_a > x0.i_a && x.i_s > x0.i_s;
        if !growing {
            break;
        }
        if x.s <= s_min {
            s_min = x.s;
            end = k;
        }
    }
    HypothesisWindow {
        t_start: path.t0(),
        t_end: path.time(end),
        satisfied: end > 0,
        end_index: end,
    }
}

/// Right-hand side of the deterministic model including the death counter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rates {
    pub s: f64,
    pub e: f64,
    pub i_a: f64,
    pub i_s: f64,
    pub r: f64,
    pub d: f64,
}

impl Rates {
    pub fn living(&self) -> [f64; 5] {
        [self.s, self.e, self.i_a, self.i_s, self.r]
    }
}

/// Deterministic vector field, with symptomatic deaths `θ α_s I_s` routed to `D`.
pub fn deterministic_drift(x: &StateVec, params: &ModelParams) -> Rates {
    let ModelParams {
        mu,
        kappa,
        p,
        theta,
        alpha_a,
        alpha_s,
        gamma,
        ..
    } = *params;
    let f = params.force_of_infection(x);
    Rates {
        s: mu + gamma * x.r - (mu + f) * x.s,
        e: f * x.s - (kappa * x.e + mu * x.e),
        i_a: p * kappa * x.e - (alpha_a + mu) * x.i_a,
        i_s: (1.0 - p) * kappa * x.e - (alpha_s + mu) * x.i_s,
        r: alpha_a * x.i_a + alpha_s * (1.0 - theta) * x.i_s - (mu + gamma) * x.r,
        d: theta * alpha_s * x.i_s,
    }
}

/// Drift of the stochastic system. The `R` inflow is `α_a I_a + α_s I_s`
/// (no fatality split), so the five components sum to zero on the simplex.
pub fn sde_drift(x: &StateVec, params: &ModelParams) -> [f64; 5] {
    let ModelParams {
        mu,
        kappa,
        p,
        alpha_a,
        alpha_s,
        gamma,
        ..
    } = *params;
    let f = params.force_of_infection(x);
    [
        mu - mu * x.s - f * x.s + gamma * x.r,
        f * x.s - kappa * x.e - mu * x.e,
        p * kappa * x.e - (alpha_a + mu) * x.i_a,
        (1.0 - p) * kappa * x.e - (alpha_s + mu) * x.i_s,
        alpha_a * x.i_a + alpha_s * x.i_s - (mu + gamma) * x.r,
    ]
}

/// Diffusion column `σ (1−S, −E, −I_a, −I_s, −R)`.
pub fn stochastic_diffusion(x: &StateVec, sigma: f64) -> [f64; 5] {
    [
        sigma * (1.0 - x.s),
        -sigma * x.e,
        -sigma * x.i_a,
        -sigma * x.i_s,
        -sigma * x.r,
    ]
}

/// Drift `F` of `−(1/σ) d(log(1−S), log E, log I_a, log I_s, log R) = F dt + dW`.
pub fn lamperti_drift(x: &StateVec, params: &ModelParams) -> Result<[f64; 5], ModelError> {
    let sigma = params.sigma;
    if !(sigma > 0.0) {
        return Err(ModelError::ZeroSigma);
    }
    let one_minus_s = 1.0 - x.s;
    for (what, value) in [
        ("1-S", one_minus_s),
        ("E", x.e),
        ("Ia", x.i_a),
        ("Is", x.i_s),
        ("R", x.r),
    ] {
        if !(value > 0.0) {
            return Err(ModelError::Domain { what, value });
        }
    }
    let ModelParams {
        mu,
        kappa,
        p,
        alpha_a,
        alpha_s,
        gamma,
        ..
    } = *params;
    let f = params.force_of_infection(x);
    let half = 0.5 * sigma;
    Ok([
        mu / sigma - f * x.s / (sigma * one_minus_s) + gamma * x.r / (sigma * one_minus_s) + half,
        -f * x.s / (sigma * x.e) + kappa / sigma + mu / sigma + half,
        -kappa * p * x.e / (sigma * x.i_a) + (alpha_a + mu) / sigma + half,
        -kappa * (1.0 - p) * x.e / (sigma * x.i_s) + (alpha_s + mu) / sigma + half,
        -(alpha_a * x.i_a + alpha_s * x.i_s) / (sigma * x.r) + (mu + gamma) / sigma + half,
    ])
}

/// Which branch fraction multiplies each transmission term of `R₀`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum R0Convention {
    /// `p` paired with `β_s` and `1−p` with `β_a`.
    #[default]
    Paper,
    /// `1−p` paired with `β_s`, matching the flow `(1−p)κE` into `I_s`.
    Consistent,
}

/// Basic reproduction number of the deterministic model.
pub fn r0(params: &ModelParams, convention: R0Convention) -> f64 {
    let ModelParams {
        mu,
        beta_s,
        beta_a,
        kappa,
        p,
        alpha_a,
        alpha_s,
        ..
    } = *params;
    let (w_s, w_a) = match convention {
        R0Convention::Paper => (p, 1.0 - p),
        R0Convention::Consistent => (1.0 - p, p),
    };
    w_s * kappa * beta_s / ((mu + kappa) * (mu + alpha_s))
        + w_a * kappa * beta_a / ((mu + kappa) * (mu + alpha_a))
}
