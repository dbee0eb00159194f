//! Recovered Wiener increments, QQ data, Jarque–Bera, and Monte Carlo
//! studies of the estimators.

use alloc::vec::Vec;

use thiserror::Error;

use crate::estimate::{
    estimate, EstimateError, EstimateOptions, EstimateReport, ReplicationSummary,
};
use crate::math;
use crate::model::{hypothesis_window, Compartment, ModelParams, Path, StateVec};
use crate::reconstruct::{reconstruct_latent, InitialMode, ReconstructConfig};
use crate::rng::NoiseKey;
use crate::simulate::{simulate_path, Positivity, Scheme, SimConfig, SimError};
use crate::summary::median;

/// Replicate-level window violation rate above which a horizon is flagged.
pub const WINDOW_FLAG_RATE: f64 = 0.20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("sample has zero variance")]
    DegenerateSample,
    #[error("significance level {0} is not in (0, 1)")]
    InvalidAlpha(f64),
    #[error("noise intensity must be positive")]
    ZeroSigma,
    #[error("row {index}: {what} = {value:e} must be positive")]
    Domain {
        index: usize,
        what: &'static str,
        value: f64,
    },
    #[error("horizons must be positive and increasing")]
    InvalidHorizons,
    #[error("the noise-free path leaves the hypothesis window before T = {horizon}")]
    WindowViolated { horizon: f64 },
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Simulate(#[from] SimError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSeries {
    pub raw: Vec<f64>,
    /// `raw / √dt`.
    pub standardized: Vec<f64>,
    pub dt: f64,
}

/// Increments recovered from the `S` equation:
/// `ΔŴ_k = −(1/σ) Δ ln(1−S) − (μ/σ + σ/2)Δ + (Δ/σ)[S f_β − γR]/(1−S)`,
/// state terms at the left point.
pub fn residual_increments(
    path: &Path,
    params: &ModelParams,
) -> Result<ResidualSeries, DiagnosticError> {
    let sigma = params.sigma;
    if !(sigma > 0.0) {
        return Err(DiagnosticError::ZeroSigma);
    }
    if path.len() < 2 {
        return Err(DiagnosticError::TooFewPoints {
            needed: 2,
            got: path.len(),
        });
    }
    for (index, x) in path.states().iter().enumerate() {
        if !(1.0 - x.s() > 0.0) {
            return Err(DiagnosticError::Domain {
                index,
                what: "1-S",
                value: 1.0 - x.s(),
            });
        }
    }
    let dt = path.dt();
    let raw: Vec<f64> = path
        .states()
        .windows(2)
        .map(|w| {
            let x = &w[0];
            let oms = 1.0 - x.s();
            let f = params.force_of_infection(x);
            -(math::ln(1.0 - w[1].s()) - math::ln(oms)) / sigma
                - (params.mu / sigma + 0.5 * sigma) * dt
                + (dt / sigma) * (x.s() * f / oms - params.gamma * x.r() / oms)
        })
        .collect();
    let root = math::sqrt(dt);
    let standardized = raw.iter().map(|v| v / root).collect();
    Ok(ResidualSeries {
        raw,
        standardized,
        dt,
    })
}

/// Inverse standard normal CDF: Acklam's rational approximation (relative
/// error 1.15e-9) followed by one Halley step against `erfc`.
pub fn inverse_normal_cdf(q: f64) -> f64 {
    if q <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if q >= 1.0 {
        return f64::INFINITY;
    }
    let x = acklam(q);
    let e = normal_cdf(x) - q;
    let u = e * math::sqrt(2.0 * core::f64::consts::PI) * math::exp(0.5 * x * x);
    x - u / (1.0 + 0.5 * x * u)
}

fn acklam(q: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.024_25;
    let tail = |r: f64| {
        let t = math::sqrt(-2.0 * math::ln(r));
        (((((C[0] * t + C[1]) * t + C[2]) * t + C[3]) * t + C[4]) * t + C[5])
            / ((((D[0] * t + D[1]) * t + D[2]) * t + D[3]) * t + 1.0)
    };
    if q < LOW {
        tail(q)
    } else if q > 1.0 - LOW {
        -tail(1.0 - q)
    } else {
        let u = q - 0.5;
        let r = u * u;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * u
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// `Φ(z)` via `erfc`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * math::erfc(-z / core::f64::consts::SQRT_2)
}

/// Sorted sample paired with `Φ⁻¹((i − 0.5)/n)`.
pub fn qq_points(sample: &[f64]) -> Result<Vec<(f64, f64)>, DiagnosticError> {
    let n = sample.len();
    if n < 3 {
        return Err(DiagnosticError::TooFewPoints { needed: 3, got: n });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| (inverse_normal_cdf((i as f64 + 0.5) / n as f64), v))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalityVerdict {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub test_name: &'static str,
}

/// Upper `alpha` quantile of χ²₂, `−2 ln α` (9.2103 at 0.01, 5.9915 at 0.05).
pub fn chi2_2_critical(alpha: f64) -> f64 {
    -2.0 * math::ln(alpha)
}

/// Jarque–Bera: `n (skew²/6 + (kurt − 3)²/24)` against χ²₂ at level `alpha`.
pub fn normality_test(sample: &[f64], alpha: f64) -> Result<NormalityVerdict, DiagnosticError> {
    let n = sample.len();
    if n < 8 {
        return Err(DiagnosticError::TooFewPoints { needed: 8, got: n });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(DiagnosticError::InvalidAlpha(alpha));
    }
    let nf = n as f64;
    let m = sample.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in sample {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if !(m2 > 0.0) {
        return Err(DiagnosticError::DegenerateSample);
    }
    let skew = m3 / (m2 * math::sqrt(m2));
    let kurt = m4 / (m2 * m2);
    let statistic = nf * (skew * skew / 6.0 + (kurt - 3.0) * (kurt - 3.0) / 24.0);
    let threshold = chi2_2_critical(alpha);
    Ok(NormalityVerdict {
        statistic,
        threshold,
        pass: statistic <= threshold,
        test_name: "jarque-bera",
    })
}

/// Synthetic-data design shared by the Monte Carlo studies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyDesign {
    pub truth: ModelParams,
    pub init: StateVec,
    pub dt: f64,
    pub scheme: Scheme,
    pub seed: u64,
    pub options: EstimateOptions,
}

impl StudyDesign {
    /// Reference truth, Milstein paths from the reference state with
    /// `R(0) = 1000/N`, `Δ = 10⁻³`, `σ̂` plugged in.
    pub fn reference(seed: u64) -> Self {
        Self {
            truth: ModelParams::reference(),
            init: StateVec::reference_with_recovered(1000.0),
            dt: 1e-3,
            scheme: Scheme::Milstein,
            seed,
            options: EstimateOptions::default(),
        }
    }

    /// Replicate `k` simulated on stream `2k` of the seed.
    pub fn simulate(&self, k: usize, n_steps: usize) -> Result<Path, SimError> {
        simulate_path(&SimConfig {
            params: self.truth,
            init: self.init,
            dt: self.dt,
            n_steps,
            scheme: self.scheme,
            seed: NoiseKey::new(self.seed).with_stream(2 * k as u64),
            positivity: Positivity::Reject,
        })
    }

    /// Reconstruction settings for replicate `k` (stream `2k + 1`).
    pub fn reconstruct_config(&self, k: usize) -> ReconstructConfig {
        ReconstructConfig {
            params: self.truth,
            init: InitialMode::Fixed {
                e: self.init.e(),
                i_a: self.init.i_a(),
                r: self.init.r(),
            },
            dt: self.dt,
            seed: NoiseKey::new(self.seed).with_stream(2 * k as u64 + 1),
            scheme: Scheme::EulerMaruyama,
            positivity: Positivity::Reject,
            pedantic_paper: false,
        }
    }
}

/// The observed-data workflow on synthetic data: replicate `k` simulates a
/// full path, keeps only its `I_s` series, reconstructs the latent
/// compartments from it, and estimates on the reconstruction.
pub fn recovery_study(
    design: &StudyDesign,
    n_steps: usize,
    n_rep: usize,
) -> Result<ReplicationSummary, EstimateError> {
    ReplicationSummary::collect((0..n_rep).map(|k| {
        let truth_path = design.simulate(k, n_steps)?;
        let obs = truth_path.series(Compartment::Is);
        let rebuilt = reconstruct_latent(&obs, &design.reconstruct_config(k))?;
        estimate(&rebuilt, &design.truth, &design.options)
    }))
}

/// Estimates on directly simulated paths (all compartments observed).
pub fn direct_study(
    design: &StudyDesign,
    n_steps: usize,
    n_rep: usize,
) -> Result<ReplicationSummary, EstimateError> {
    ReplicationSummary::collect((0..n_rep).map(|k| {
        let path = design.simulate(k, n_steps)?;
        estimate(&path, &design.truth, &design.options)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConsistencyRow {
    pub horizon: f64,
    pub abs_err_beta_s: f64,
    pub abs_err_beta_a: f64,
    pub abs_err_p: f64,
    /// Fraction of replicates whose own window ends before `horizon`.
    pub window_violation_rate: f64,
    /// The noise-free path from the same start stays in the window up to `horizon`.
    pub skeleton_satisfied: bool,
    /// `window_violation_rate > WINDOW_FLAG_RATE`.
    pub flagged: bool,
    pub replicates: usize,
}

/// Median absolute estimation errors per horizon. Replicate `k` is one path
/// simulated to the longest horizon; shorter horizons use its prefixes.
pub fn consistency_study(
    design: &StudyDesign,
    horizons: &[f64],
    n_rep: usize,
) -> Result<Vec<ConsistencyRow>, DiagnosticError> {
    if horizons.is_empty() || horizons[0] <= 0.0 || horizons.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(DiagnosticError::InvalidHorizons);
    }
    let steps: Vec<usize> = horizons
        .iter()
        .map(|t| math::floor(t / design.dt + 0.5) as usize)
        .collect();
    let longest = *steps.last().expect("nonempty");

    let skeleton = simulate_path(&SimConfig {
        params: design.truth.with_sigma(0.0),
        init: design.init,
        dt: design.dt,
        n_steps: longest,
        scheme: design.scheme,
        seed: NoiseKey::new(design.seed),
        positivity: Positivity::Reject,
    })?;
    let skeleton_window = hypothesis_window(&skeleton);

    let paths: Vec<Path> = (0..n_rep)
        .map(|k| design.simulate(k, longest))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(horizons.len());
    for (&horizon, &n) in horizons.iter().zip(&steps) {
        let reports: Vec<EstimateReport> = paths
            .iter()
            .filter_map(|p| estimate(&p.prefix(n + 1), &design.truth, &design.options).ok())
            .collect();
        let violated = reports.iter().filter(|r| r.window_truncated).count();
        if reports.is_empty() || !skeleton_window.reaches(n) {
            return Err(DiagnosticError::WindowViolated { horizon });
        }
        let err = |f: fn(&EstimateReport, &ModelParams) -> f64| -> f64 {
            median(
                &reports
                    .iter()
                    .map(|r| f(r, &design.truth))
                    .collect::<Vec<_>>(),
            )
        };
        let rate = violated as f64 / reports.len() as f64;
        rows.push(ConsistencyRow {
            horizon,
            abs_err_beta_s: err(|r, t| (r.beta_s - t.beta_s).abs()),
            abs_err_beta_a: err(|r, t| (r.beta_a - t.beta_a).abs()),
            abs_err_p: err(|r, t| (r.p.raw - t.p).abs()),
            window_violation_rate: rate,
            skeleton_satisfied: skeleton_window.reaches(n),
            flagged: rate > WINDOW_FLAG_RATE,
            replicates: reports.len(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{draw_increments, simulate_with_increments};
    use alloc::vec;
    use rand_distr::{Distribution, StandardNormal, Uniform};

    fn cfg(sigma: f64, n_steps: usize, scheme: Scheme, seed: u64) -> SimConfig {
        SimConfig {
            params: ModelParams::reference().with_sigma(sigma),
            init: StateVec::reference_with_recovered(1000.0),
            n_steps,
            scheme,
            ..SimConfig::reference(seed)
        }
    }

    #[test]
    fn zero_increments_give_near_zero_residuals() {
        // With ΔW ≡ 0 the residual is (y − ln(1+y))/σ − σΔ/2, y = O(Δ).
        let c = cfg(0.01, 46, Scheme::EulerMaruyama, 0);
        let path = simulate_with_increments(&c, &[0.0; 46]).unwrap();
        let r = residual_increments(&path, &c.params).unwrap();
        for v in &r.raw {
            assert!(v.abs() <= 0.5 * 0.01 * 1e-3 + 1e-9, "{v}");
        }
    }

    #[test]
    fn em_residual_identity() {
        // EM: 1 − S' = (1 − S)(1 + y) with y = −μΔ + (fS − γR)Δ/(1−S) − σΔW,
        // so ΔŴ = ΔW + (y − ln(1+y))/σ − σΔ/2 exactly.
        let c = cfg(0.01, 46, Scheme::EulerMaruyama, 11);
        let path = simulate_path(&c).unwrap();
        let r = residual_increments(&path, &c.params).unwrap();
        let p = c.params;
        for (k, (&got, &dw)) in r.raw.iter().zip(path.wiener().unwrap()).enumerate() {
            let x = path.states()[k];
            let f = p.beta_s * x.i_s() + p.beta_a * x.i_a();
            let y =
                -p.mu * c.dt + (f * x.s() - p.gamma * x.r()) * c.dt / (1.0 - x.s()) - p.sigma * dw;
            let expected = dw + (y - (1.0 + y).ln()) / p.sigma - p.sigma * c.dt / 2.0;
            assert!(
                (got - expected).abs() < 1e-9,
                "step {k}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn hand_residual() {
        let x0 = StateVec::raw([0.89, 0.05, 0.03, 0.02, 0.01]);
        let x1 = StateVec::raw([0.889, 0.0505, 0.0302, 0.0203, 0.01]);
        let path = Path::new(0.0, 1e-3, vec![x0, x1], None).unwrap();
        let r = residual_increments(&path, &ModelParams::reference()).unwrap();
        // mpmath, 28 digits
        assert!((r.raw[0] + 0.891_672_751_804_188_719_299_313_7).abs() < 1e-12);
        assert!((r.standardized[0] - r.raw[0] / 1e-3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn milstein_round_trip() {
        for sigma in [0.005, 0.01, 0.05] {
            for seed in 0..50 {
                let c = cfg(sigma, 1000, Scheme::Milstein, seed);
                let path = simulate_path(&c).unwrap();
                let r = residual_increments(&path, &c.params).unwrap();
                let worst = r
                    .raw
                    .iter()
                    .zip(path.wiener().unwrap())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(worst <= 1e-5, "σ={sigma} seed={seed}: {worst}");
            }
        }
    }

    #[test]
    fn residual_errors() {
        let p = ModelParams::reference().with_sigma(0.0);
        let path = simulate_path(&cfg(0.01, 5, Scheme::Milstein, 0)).unwrap();
        assert_eq!(
            residual_increments(&path, &p),
            Err(DiagnosticError::ZeroSigma)
        );
        let x = StateVec::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let flat = Path::new(0.0, 1e-3, vec![x, x], None).unwrap();
        assert!(matches!(
            residual_increments(&flat, &ModelParams::reference()),
            Err(DiagnosticError::Domain { index: 0, .. })
        ));
    }

    fn bisection_quantile(q: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0f64, 10.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn inverse_cdf_against_bisection() {
        for i in 1..1000 {
            let q = i as f64 / 1000.0;
            assert!(
                (inverse_normal_cdf(q) - bisection_quantile(q)).abs() < 1.2e-9,
                "q={q}"
            );
        }
        for q in [1e-10, 1e-6, 0.01, 0.99, 1.0 - 1e-6] {
            assert!(
                (inverse_normal_cdf(q) - bisection_quantile(q)).abs()
                    < 1.2e-9 * (1.0 + bisection_quantile(q).abs())
            );
        }
    }

    #[test]
    fn qq_examples() {
        let pts = qq_points(&[1.0, -1.0, 0.0]).unwrap();
        // Φ⁻¹(1/6) = −0.967421566101701 (mpmath)
        assert!((pts[0].0 + 0.967_421_566_101_701).abs() < 1.2e-9);
        assert!(pts[1].0.abs() < 1e-15);
        assert!((pts[2].0 - 0.967_421_566_101_701).abs() < 1.2e-9);
        assert_eq!(
            pts.iter().map(|p| p.1).collect::<Vec<_>>(),
            vec![-1.0, 0.0, 1.0]
        );
        assert!(qq_points(&[1.0, 2.0]).is_err());

        let sym = [-2.0, -0.5, 0.1, -0.1, 0.5, 2.0];
        let pts = qq_points(&sym).unwrap();
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            assert!((a.0 + b.0).abs() < 1e-9 && (a.1 + b.1).abs() == 0.0);
        }
    }

    #[test]
    fn qq_slope_of_normal_sample() {
        let mut rng = NoiseKey::new(1).rng();
        let x: Vec<f64> = (0..10_000)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let pts = qq_points(&x).unwrap();
        let mt = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let me = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - me)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
        let slope = sxy / sxx;
        assert!(slope > 0.98 && slope < 1.02, "{slope}");
    }

    #[test]
    fn jarque_bera_size_and_power() {
        let mut passes = 0;
        let mut rejects = 0;
        let unif = Uniform::new(-1.0, 1.0).unwrap();
        for seed in 0..100 {
            let mut rng = NoiseKey::new(seed).rng();
            let normal: Vec<f64> = (0..10_000)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let flat: Vec<f64> = (0..10_000).map(|_| unif.sample(&mut rng)).collect();
            passes += normality_test(&normal, 0.01).unwrap().pass as usize;
            rejects += (!normality_test(&flat, 0.01).unwrap().pass) as usize;
        }
        assert!(passes >= 98, "{passes}");
        assert!(rejects >= 99, "{rejects}");
    }

    #[test]
    fn jarque_bera_edges() {
        assert_eq!(
            normality_test(&[1.0; 10], 0.01),
            Err(DiagnosticError::DegenerateSample)
        );
        assert!(matches!(
            normality_test(&[1.0; 5], 0.01),
            Err(DiagnosticError::TooFewPoints { .. })
        ));
        assert!((chi2_2_critical(0.01) - 9.210_340_371_976_184).abs() < 1e-12);
        assert!((chi2_2_critical(0.05) - 5.991_464_547_107_979).abs() < 1e-12);
        let v = normality_test(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0], 0.05).unwrap();
        assert_eq!(v.pass, v.statistic <= v.threshold);
    }

    #[test]
    fn misspecified_beta_shifts_residuals() {
        let c = cfg(0.01, 10_000, Scheme::Milstein, 3);
        let path = simulate_path(&c).unwrap();
        let wrong = ModelParams {
            beta_s: 10.0 * c.params.beta_s,
            ..c.params
        };
        let r = residual_increments(&path, &wrong).unwrap().standardized;
        let n = r.len() as f64;
        let z = crate::summary::mean(&r) * n.sqrt();
        assert!(z.abs() > 3.0, "z = {z}");
    }

    #[test]
    fn noise_free_single_replicate() {
        let design = StudyDesign {
            truth: ModelParams::reference().with_sigma(0.0),
            options: EstimateOptions {
                sigma: crate::estimate::SigmaSource::Known(1e-3),
                ..Default::default()
            },
            ..StudyDesign::reference(0)
        };
        let a = consistency_study(&design, &[0.02, 0.04], 1).unwrap();
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|r| r.skeleton_satisfied));
        let b = consistency_study(&StudyDesign { seed: 99, ..design }, &[0.02, 0.04], 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn horizons_must_increase() {
        let d = StudyDesign::reference(0);
        assert_eq!(
            consistency_study(&d, &[0.04, 0.02], 2),
            Err(DiagnosticError::InvalidHorizons)
        );
        assert_eq!(
            consistency_study(&d, &[], 2),
            Err(DiagnosticError::InvalidHorizons)
        );
    }

    #[test]
    fn single_horizon_matches_direct_study() {
        let d = StudyDesign::reference(5);
        let rows = consistency_study(&d, &[0.046], 20).unwrap();
        let s = direct_study(&d, 46, 20).unwrap();
        let med =
            |f: fn(&EstimateReport) -> f64| median(&s.reports.iter().map(f).collect::<Vec<_>>());
        assert_eq!(
            rows[0].abs_err_beta_s,
            med(|r| (r.beta_s - ModelParams::reference().beta_s).abs())
        );
        assert_eq!(
            rows[0].abs_err_p,
            med(|r| (r.p.raw - ModelParams::reference().p).abs())
        );
    }

    #[test]
    fn increments_drive_streams_independently() {
        let a = draw_increments(NoiseKey::new(1).with_stream(0), 4, 1e-3).unwrap();
        let b = draw_increments(NoiseKey::new(1).with_stream(1), 4, 1e-3).unwrap();
        assert_ne!(a, b);
    }
}
