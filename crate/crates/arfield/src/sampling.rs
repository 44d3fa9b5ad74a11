//! AR(1) sampling paths over the unit interval driven by a positive renewal
//! process, plus the per-path statistics the closed-form bounds constrain.

use rand::distr::OpenClosed01;
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp, LogNormal};
use serde::Serialize;

use crate::error::{Error, Result};

/// Family of the i.i.d. positive driving terms Y_i, with per-kind shape
/// parameters. Every kind is calibrated so E[Y] = 1/n; the bounded kinds
/// (uniform, scaled-beta) additionally keep their support inside (0, λ/n].
#[derive(Debug, Clone, PartialEq)]
pub enum RenewalKind {
    /// Uniform on (0, 2/n]; support parameter λ is fixed at 2 by the mean
    /// constraint.
    Uniform,
    /// (λ/n)·Beta(α, α(λ−1)); mean is 1/n for every α > 0, λ > 1.
    ScaledBeta { alpha: f64, lambda: f64 },
    /// Exponential with rate n (mean 1/n); unbounded support.
    Exponential,
    /// Lognormal with underlying variance s and underlying mean chosen so
    /// E[Y] = 1/n; unbounded support.
    Lognormal { log_var: f64 },
    /// Generalized Pareto with shape ξ ∈ [0, 0.5) and scale (1−ξ)/n, so the
    /// mean is 1/n; heavy-tailed, unbounded support. ξ = 0 degenerates to
    /// the exponential.
    GeneralizedPareto { xi: f64 },
}

impl RenewalKind {
    /// Kind name used in CSV exports and CLI flags.
    pub fn name(&self) -> &'static str {
        match self {
            RenewalKind::Uniform => "uniform",
            RenewalKind::ScaledBeta { .. } => "scaled-beta",
            RenewalKind::Exponential => "exponential",
            RenewalKind::Lognormal { .. } => "lognormal",
            RenewalKind::GeneralizedPareto { .. } => "generalized-pareto",
        }
    }
}

/// Distribution of the driving terms at one target sampling density n.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalSpec {
    kind: RenewalKind,
    n: f64,
}

impl RenewalSpec {
    /// Validates shape parameters and wraps the kind with its density.
    pub fn new(kind: RenewalKind, n: f64) -> Result<Self> {
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sampling density n must be positive and finite, got {n}"
            )));
        }
        match kind {
            RenewalKind::ScaledBeta { alpha, lambda } => {
                if !alpha.is_finite() || alpha <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "scaled-beta alpha must be positive, got {alpha}"
                    )));
                }
                if !lambda.is_finite() || lambda <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "support parameter lambda must exceed 1, got {lambda}"
                    )));
                }
            }
            RenewalKind::Lognormal { log_var } => {
                if !log_var.is_finite() || log_var <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "lognormal underlying variance must be positive, got {log_var}"
                    )));
                }
            }
            RenewalKind::GeneralizedPareto { xi } => {
                if !xi.is_finite() || !(0.0..0.5).contains(&xi) {
                    return Err(Error::InvalidParameter(format!(
                        "pareto tail index must lie in [0, 0.5), got {xi}"
                    )));
                }
            }
            RenewalKind::Uniform | RenewalKind::Exponential => {}
        }
        Ok(Self { kind, n })
    }

    pub fn kind(&self) -> &RenewalKind {
        &self.kind
    }

    /// Target sampling density n (draws have mean 1/n).
    pub fn density(&self) -> f64 {
        self.n
    }

    /// Support parameter λ for bounded kinds; `None` for unbounded kinds.
    pub fn lambda(&self) -> Option<f64> {
        match self.kind {
            RenewalKind::Uniform => Some(2.0),
            RenewalKind::ScaledBeta { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    /// Upper end λ/n of the support for bounded kinds.
    pub fn support_bound(&self) -> Option<f64> {
        self.lambda().map(|l| l / self.n)
    }
}

/// Reusable sampler for a renewal spec; constructing the underlying
/// distributions once keeps long path loops cheap.
struct RenewalSampler {
    inner: SamplerInner,
}

enum SamplerInner {
    Uniform { scale: f64 },
    Beta { dist: Beta<f64>, scale: f64 },
    Exponential { dist: Exp<f64> },
    Lognormal { dist: LogNormal<f64> },
    Pareto { xi: f64, sigma: f64 },
}

impl RenewalSampler {
    fn new(spec: &RenewalSpec) -> Self {
        let n = spec.n;
        let inner = match spec.kind {
            RenewalKind::Uniform => SamplerInner::Uniform { scale: 2.0 / n },
            RenewalKind::ScaledBeta { alpha, lambda } => SamplerInner::Beta {
                dist: Beta::new(alpha, alpha * (lambda - 1.0)).expect("validated parameters"),
                scale: lambda / n,
            },
            RenewalKind::Exponential => SamplerInner::Exponential {
                dist: Exp::new(n).expect("validated density"),
            },
            RenewalKind::Lognormal { log_var } => SamplerInner::Lognormal {
                dist: LogNormal::new(-n.ln() - log_var / 2.0, log_var.sqrt())
                    .expect("validated parameters"),
            },
            RenewalKind::GeneralizedPareto { xi } => SamplerInner::Pareto {
                xi,
                sigma: (1.0 - xi) / n,
            },
        };
        Self { inner }
    }

    /// One strictly positive draw; an exact 0 (a measure-zero float event)
    /// is rejected and redrawn.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let y = match &self.inner {
                SamplerInner::Uniform { scale } => {
                    let u: f64 = rng.sample(OpenClosed01);
                    u * scale
                }
                SamplerInner::Beta { dist, scale } => dist.sample(rng) * scale,
                SamplerInner::Exponential { dist } => dist.sample(rng),
                SamplerInner::Lognormal { dist } => dist.sample(rng),
                SamplerInner::Pareto { xi, sigma } => {
                    let u: f64 = rng.random();
                    if *xi == 0.0 {
                        -(1.0 - u).ln() * sigma
                    } else {
                        sigma * ((1.0 - u).powf(-xi) - 1.0) / xi
                    }
                }
            };
            if y > 0.0 {
                return y;
            }
        }
    }
}

/// One draw of the driving term Y.
pub fn draw_renewal<R: Rng + ?Sized>(spec: &RenewalSpec, rng: &mut R) -> f64 {
    RenewalSampler::new(spec).draw(rng)
}

/// AR(1) model for the intersample distances: X_i = ρX_{i−1} + Y_i.
#[derive(Debug, Clone, PartialEq)]
pub struct ARConfig {
    rho: f64,
    renewal: RenewalSpec,
}

impl ARConfig {
    pub fn new(rho: f64, renewal: RenewalSpec) -> Result<Self> {
        if !rho.is_finite() || !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "correlation coefficient rho must lie in [0, 1), got {rho}"
            )));
        }
        Ok(Self { rho, renewal })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn renewal(&self) -> &RenewalSpec {
        &self.renewal
    }
}

/// A realized sampling path: the locations S_1 < … < S_M inside (0, 1], the
/// uncovered remainder R_M = 1 − S_M, and the first overshoot S_{M+1} > 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    /// In-range sample locations S_1..S_M (possibly empty).
    pub locations: Vec<f64>,
    /// 1 − S_M (1.0 when the very first sample overshoots).
    pub remainder: f64,
    /// S_{M+1}, the first accumulated location beyond 1.
    pub overshoot: f64,
}

impl SamplePath {
    /// Number of in-range samples M.
    pub fn m(&self) -> usize {
        self.locations.len()
    }

    /// Two-column CSV (index, location) of the in-range samples.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,location\n");
        for (i, s) in self.locations.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, s));
        }
        out
    }
}

impl Serialize for SamplePath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct PathJson<'a> {
            locations: &'a [f64],
            m: usize,
            remainder: f64,
            overshoot: f64,
        }
        PathJson {
            locations: &self.locations,
            m: self.m(),
            remainder: self.remainder,
            overshoot: self.overshoot,
        }
        .serialize(s)
    }
}

/// Iterates the AR recursion from X_1 = Y_1 until the running sum crosses 1.
///
/// The iteration guard (10·λ·n/(1−ρ) steps, with λ taken as 2 for unbounded
/// kinds) exists only to surface misconfigured specs; under any valid spec
/// the crossing happens far earlier with overwhelming probability.
pub fn generate_path<R: Rng + ?Sized>(cfg: &ARConfig, rng: &mut R) -> Result<SamplePath> {
    let spec = cfg.renewal();
    let sampler = RenewalSampler::new(spec);
    let lambda = spec.lambda().unwrap_or(2.0);
    let guard = (10.0 * lambda * spec.density() / (1.0 - cfg.rho())).ceil() as usize;
    let mut locations = Vec::with_capacity((1.2 * spec.density() * (1.0 - cfg.rho())) as usize + 8);
    let mut x = 0.0f64;
    let mut s = 0.0f64;
    for _ in 0..guard.max(16) {
        x = cfg.rho() * x + sampler.draw(rng);
        s += x;
        if s > 1.0 {
            let s_m = locations.last().copied().unwrap_or(0.0);
            return Ok(SamplePath {
                locations,
                remainder: 1.0 - s_m,
                overshoot: s,
            });
        }
        locations.push(s);
    }
    Err(Error::RunawayPath(guard.max(16)))
}

/// Replays the AR recursion over a fixed driving sequence instead of an rng;
/// the deterministic counterpart of [`generate_path`] used by hand oracles
/// and the CLI's forced-draw mode.
pub fn generate_path_from_draws(draws: &[f64], rho: f64) -> Result<SamplePath> {
    if !rho.is_finite() || !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "correlation coefficient rho must lie in [0, 1), got {rho}"
        )));
    }
    let mut locations = Vec::new();
    let mut x = 0.0f64;
    let mut s = 0.0f64;
    for &y in draws {
        if !y.is_finite() || y <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "driving draws must be positive, got {y}"
            )));
        }
        x = rho * x + y;
        s += x;
        if s > 1.0 {
            let s_m = locations.last().copied().unwrap_or(0.0);
            return Ok(SamplePath {
                locations,
                remainder: 1.0 - s_m,
                overshoot: s,
            });
        }
        locations.push(s);
    }
    Err(Error::InvalidParameter(
        "driving draws exhausted before the path crossed 1".into(),
    ))
}

/// Closed-form location S_i = (1/(1−ρ)) Σ_{r=1}^{i} (1 − ρ^{i−r+1}) Y_r.
///
/// Panics if `i` is outside 1..=y.len().
pub fn closed_form_location(y: &[f64], rho: f64, i: usize) -> f64 {
    assert!(i >= 1 && i <= y.len(), "index i must lie in 1..=len(y)");
    let mut sum = 0.0;
    for (r, &yr) in y.iter().enumerate().take(i) {
        sum += (1.0 - rho.powi((i - r) as i32)) * yr;
    }
    sum / (1.0 - rho)
}

/// Mean squared gap (1/M) Σ (S_i − i/M)² between the realized locations and
/// the uniform surrogate grid the location-unaware estimator assumes.
pub fn grid_deviation(path: &SamplePath) -> Result<f64> {
    let m = path.m();
    if m == 0 {
        return Err(Error::EmptyPath);
    }
    let mf = m as f64;
    let mut acc = 0.0;
    for (i, &s) in path.locations.iter().enumerate() {
        let d = s - (i + 1) as f64 / mf;
        acc += d * d;
    }
    Ok(acc / mf)
}

/// Pass/fail summary of the per-path guarantees. The two distribution-bound
/// checks are `None` (not applicable) for unbounded renewal kinds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    /// M > n(1−ρ)/λ − 1 (bounded kinds only).
    pub m_lower_ok: Option<bool>,
    /// R_M ≤ λ/(n(1−ρ)) (bounded kinds only).
    pub remainder_ok: Option<bool>,
    /// Locations are strictly increasing and start above 0.
    pub strictly_increasing: bool,
    /// S_M ≤ 1 < S_{M+1}.
    pub crossing_ok: bool,
}

impl PathReport {
    /// True when every applicable check passed.
    pub fn all_ok(&self) -> bool {
        self.m_lower_ok.unwrap_or(true)
            && self.remainder_ok.unwrap_or(true)
            && self.strictly_increasing
            && self.crossing_ok
    }
}

/// Structural checks only, with the distribution bounds marked
/// not-applicable; used when no generating config is available.
pub fn structural_report(path: &SamplePath) -> PathReport {
    let increasing = path.locations.windows(2).all(|w| w[0] < w[1])
        && path.locations.first().is_none_or(|&s| s > 0.0);
    let s_m = path.locations.last().copied().unwrap_or(0.0);
    PathReport {
        m_lower_ok: None,
        remainder_ok: None,
        strictly_increasing: increasing,
        crossing_ok: s_m <= 1.0 && path.overshoot > 1.0,
    }
}

/// Evaluates the per-path bounds of a generated path against its config.
pub fn path_report(path: &SamplePath, cfg: &ARConfig) -> PathReport {
    let mut report = structural_report(path);
    if let Some(lambda) = cfg.renewal().lambda() {
        let eff = cfg.renewal().density() * (1.0 - cfg.rho());
        report.m_lower_ok = Some(path.m() as f64 > eff / lambda - 1.0);
        report.remainder_ok = Some(path.remainder <= lambda / eff);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(kind: RenewalKind, n: f64) -> RenewalSpec {
        RenewalSpec::new(kind, n).unwrap()
    }

    #[test]
    fn uniform_draws_stay_in_support_with_the_right_mean() {
        let sp = spec(RenewalKind::Uniform, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = 100_000;
        let mut sum = 0.0;
        for _ in 0..draws {
            let y = draw_renewal(&sp, &mut rng);
            assert!(y > 0.0 && y <= 0.02, "draw {y} outside (0, 0.02]");
            sum += y;
        }
        let stderr = (0.02 / 12f64.sqrt()) / (draws as f64).sqrt();
        assert_abs_diff_eq!(sum / draws as f64, 0.01, epsilon = 5.0 * stderr);
    }

    #[test]
    fn exponential_draws_have_mean_one_over_n() {
        let sp = spec(RenewalKind::Exponential, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 1_000_000;
        let mean = (0..draws).map(|_| draw_renewal(&sp, &mut rng)).sum::<f64>() / draws as f64;
        let stderr = 0.01 / (draws as f64).sqrt();
        assert_abs_diff_eq!(mean, 0.01, epsilon = 5.0 * stderr);
    }

    #[test]
    fn scaled_beta_support_and_mean() {
        let sp = spec(
            RenewalKind::ScaledBeta {
                alpha: 2.0,
                lambda: 2.0,
            },
            10.0,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 100_000;
        let mut sum = 0.0;
        for _ in 0..draws {
            let y = draw_renewal(&sp, &mut rng);
            assert!(y > 0.0 && y <= 0.2, "draw {y} outside (0, 0.2]");
            sum += y;
        }
        // Var of 0.2·Beta(2,2) is 0.04·(4/(16·5)) = 2e−3.
        let stderr = (2e-3f64).sqrt() / (draws as f64).sqrt();
        assert_abs_diff_eq!(sum / draws as f64, 0.1, epsilon = 5.0 * stderr);
    }

    #[test]
    fn lognormal_draws_have_mean_one_over_n() {
        let sp = spec(RenewalKind::Lognormal { log_var: 0.25 }, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let draws = 1_000_000;
        let mean = (0..draws).map(|_| draw_renewal(&sp, &mut rng)).sum::<f64>() / draws as f64;
        // Relative sd of a lognormal with underlying variance s is √(eˢ−1).
        let rel_sd = (0.25f64.exp() - 1.0).sqrt();
        let stderr = 0.01 * rel_sd / (draws as f64).sqrt();
        assert_abs_diff_eq!(mean, 0.01, epsilon = 5.0 * stderr);
    }

    #[test]
    fn pareto_draws_have_mean_one_over_n() {
        let sp = spec(RenewalKind::GeneralizedPareto { xi: 0.4 }, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 1_000_000;
        let mean = (0..draws).map(|_| draw_renewal(&sp, &mut rng)).sum::<f64>() / draws as f64;
        // Var = σ²/((1−ξ)²(1−2ξ)) with σ = (1−ξ)/n, i.e. (1/n²)/(1−2ξ).
        let rel_sd = (1.0 / (1.0 - 0.8f64)).sqrt();
        let stderr = 0.01 * rel_sd / (draws as f64).sqrt();
        assert_abs_diff_eq!(mean, 0.01, epsilon = 5.0 * stderr);
    }

    #[test]
    fn pareto_with_zero_shape_is_exponential() {
        let sp = spec(RenewalKind::GeneralizedPareto { xi: 0.0 }, 50.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let draws = 200_000;
        let mean = (0..draws).map(|_| draw_renewal(&sp, &mut rng)).sum::<f64>() / draws as f64;
        let stderr = 0.02 / (draws as f64).sqrt();
        assert_abs_diff_eq!(mean, 0.02, epsilon = 5.0 * stderr);
    }

    #[test]
    fn every_kind_draws_strictly_positive() {
        let kinds = [
            RenewalKind::Uniform,
            RenewalKind::ScaledBeta {
                alpha: 0.5,
                lambda: 3.0,
            },
            RenewalKind::Exponential,
            RenewalKind::Lognormal { log_var: 1.0 },
            RenewalKind::GeneralizedPareto { xi: 0.45 },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in kinds {
            let sp = spec(kind, 1000.0);
            for _ in 0..10_000 {
                assert!(draw_renewal(&sp, &mut rng) > 0.0);
            }
        }
    }

    #[test]
    fn spec_validation_rejects_bad_parameters() {
        assert!(RenewalSpec::new(RenewalKind::Uniform, 0.0).is_err());
        assert!(RenewalSpec::new(RenewalKind::Uniform, f64::NAN).is_err());
        assert!(RenewalSpec::new(
            RenewalKind::ScaledBeta {
                alpha: 0.0,
                lambda: 2.0
            },
            10.0
        )
        .is_err());
        assert!(RenewalSpec::new(
            RenewalKind::ScaledBeta {
                alpha: 1.0,
                lambda: 1.0
            },
            10.0
        )
        .is_err());
        assert!(RenewalSpec::new(RenewalKind::Lognormal { log_var: 0.0 }, 10.0).is_err());
        assert!(RenewalSpec::new(RenewalKind::GeneralizedPareto { xi: 0.5 }, 10.0).is_err());
        assert!(RenewalSpec::new(RenewalKind::GeneralizedPareto { xi: -0.1 }, 10.0).is_err());
    }

    #[test]
    fn hand_oracle_path() {
        // Forced draws (0.1, 0.2, 0.3, 0.9) at ρ=0.5 give X = (0.1, 0.25,
        // 0.425, 1.1125) and S = (0.1, 0.35, 0.775, 1.8875): M=3.
        let path = generate_path_from_draws(&[0.1, 0.2, 0.3, 0.9], 0.5).unwrap();
        assert_eq!(path.m(), 3);
        assert_abs_diff_eq!(path.locations[0], 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(path.locations[1], 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(path.locations[2], 0.775, epsilon = 1e-15);
        assert_abs_diff_eq!(path.remainder, 0.225, epsilon = 1e-15);
        assert_abs_diff_eq!(path.overshoot, 1.8875, epsilon = 1e-15);
    }

    #[test]
    fn zero_rho_reduces_to_prefix_sums() {
        let draws = [0.3, 0.4, 0.2, 0.5];
        let path = generate_path_from_draws(&draws, 0.0).unwrap();
        assert_eq!(path.m(), 3);
        assert_abs_diff_eq!(path.locations[0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(path.locations[1], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(path.locations[2], 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(path.overshoot, 1.4, epsilon = 1e-15);
    }

    #[test]
    fn exhausted_draws_error() {
        assert!(matches!(
            generate_path_from_draws(&[0.1, 0.1], 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(generate_path_from_draws(&[0.1, -0.2, 2.0], 0.0).is_err());
    }

    #[test]
    fn per_path_lower_bound_holds_at_high_rho() {
        let cfg = ARConfig::new(0.9, spec(RenewalKind::Uniform, 1000.0)).unwrap();
        for t in 0..1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + t);
            let path = generate_path(&cfg, &mut rng).unwrap();
            assert!(path.m() as f64 > 1000.0 * 0.1 / 2.0 - 1.0, "M = {}", path.m());
        }
    }

    #[test]
    fn closed_form_hand_values() {
        let y = [0.1, 0.2, 0.3];
        // 2·(0.875·0.1 + 0.75·0.2 + 0.5·0.3) = 0.775.
        assert_abs_diff_eq!(closed_form_location(&y, 0.5, 3), 0.775, epsilon = 1e-12);
        // ρ=0 degenerates to plain prefix sums.
        assert_abs_diff_eq!(closed_form_location(&y, 0.0, 2), 0.3, epsilon = 1e-15);
        // i=1 recovers Y_1 for every ρ.
        assert_abs_diff_eq!(closed_form_location(&y, 0.73, 1), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn grid_deviation_examples() {
        let m = 8;
        let uniform = SamplePath {
            locations: (1..=m).map(|i| i as f64 / m as f64).collect(),
            remainder: 0.0,
            overshoot: 1.1,
        };
        assert_abs_diff_eq!(grid_deviation(&uniform).unwrap(), 0.0, epsilon = 1e-30);

        let hand = SamplePath {
            locations: vec![0.3, 0.9],
            remainder: 0.1,
            overshoot: 1.6,
        };
        assert_abs_diff_eq!(grid_deviation(&hand).unwrap(), 0.025, epsilon = 1e-15);

        let empty = SamplePath {
            locations: vec![],
            remainder: 1.0,
            overshoot: 1.2,
        };
        assert!(matches!(grid_deviation(&empty), Err(Error::EmptyPath)));
    }

    #[test]
    fn path_report_for_bounded_and_unbounded_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bounded = ARConfig::new(0.5, spec(RenewalKind::Uniform, 200.0)).unwrap();
        for _ in 0..200 {
            let path = generate_path(&bounded, &mut rng).unwrap();
            let report = path_report(&path, &bounded);
            assert_eq!(report.m_lower_ok, Some(true));
            assert_eq!(report.remainder_ok, Some(true));
            assert!(report.strictly_increasing);
            assert!(report.crossing_ok);
        }

        let unbounded = ARConfig::new(0.5, spec(RenewalKind::Exponential, 200.0)).unwrap();
        let path = generate_path(&unbounded, &mut rng).unwrap();
        let report = path_report(&path, &unbounded);
        assert_eq!(report.m_lower_ok, None);
        assert_eq!(report.remainder_ok, None);
        assert!(report.all_ok());
    }

    #[test]
    fn paths_are_strictly_increasing_for_every_kind() {
        let kinds = [
            RenewalKind::Uniform,
            RenewalKind::ScaledBeta {
                alpha: 2.0,
                lambda: 2.0,
            },
            RenewalKind::Exponential,
            RenewalKind::Lognormal { log_var: 0.25 },
            RenewalKind::GeneralizedPareto { xi: 0.4 },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for kind in kinds {
            let cfg = ARConfig::new(0.3, spec(kind, 500.0)).unwrap();
            for _ in 0..100 {
                let path = generate_path(&cfg, &mut rng).unwrap();
                let report = structural_report(&path);
                assert!(report.strictly_increasing && report.crossing_ok);
            }
        }
    }

    #[test]
    fn empirical_mean_m_stays_inside_the_closed_form_bracket() {
        let n = 1000.0;
        let rho = 0.5;
        let cfg = ARConfig::new(rho, spec(RenewalKind::Uniform, n)).unwrap();
        let paths = 2000u64;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for t in 0..paths {
            let mut rng = ChaCha8Rng::seed_from_u64(50_000 + t);
            let m = generate_path(&cfg, &mut rng).unwrap().m() as f64;
            sum += m;
            sumsq += m * m;
        }
        let mean = sum / paths as f64;
        let var = (sumsq - paths as f64 * mean * mean) / (paths as f64 - 1.0);
        let se = (var / paths as f64).sqrt();
        assert!(mean >= n * (1.0 - rho) - 1.0 - 5.0 * se, "mean M = {mean}");
        assert!(mean <= n + 2.0 / (1.0 - rho) - 1.0 + 5.0 * se, "mean M = {mean}");
    }

    #[test]
    fn sample_path_json_shape() {
        let path = generate_path_from_draws(&[0.1, 0.2, 0.3, 0.9], 0.5).unwrap();
        let json = serde_json::to_string(&path).unwrap();
        assert!(json.contains("\"m\":3"));
        assert!(json.contains("\"remainder\":0.225"));
        let csv = path.to_csv();
        assert!(csv.starts_with("index,location\n1,0.1\n"));
        assert_eq!(csv.lines().count(), 4);
    }

    proptest! {
        #[test]
        fn closed_form_matches_recursion(
            rho in 0.0..0.99f64,
            draws in proptest::collection::vec(1e-6..0.2f64, 1..40),
        ) {
            let mut x = 0.0;
            let mut s = 0.0;
            for i in 1..=draws.len() {
                x = rho * x + draws[i - 1];
                s += x;
                let cf = closed_form_location(&draws, rho, i);
                prop_assert!(
                    (cf - s).abs() <= 1e-10 * s.abs().max(1e-12),
                    "i={i}: closed form {cf} vs recursion {s}"
                );
            }
        }

        #[test]
        fn rho_zero_path_never_overtakes(
            rho in 0.01..0.95f64,
            draws in proptest::collection::vec(1e-4..0.3f64, 4..40),
        ) {
            // With identical draws, every AR location dominates its pure-renewal
            // counterpart pointwise (X_i is nondecreasing in ρ for fixed draws).
            let with_rho = generate_path_from_draws(&draws, rho);
            let without = generate_path_from_draws(&draws, 0.0);
            if let (Ok(a), Ok(b)) = (with_rho, without) {
                for i in 0..a.m().min(b.m()) {
                    prop_assert!(b.locations[i] <= a.locations[i] + 1e-15);
                }
            }
        }
    }
}
