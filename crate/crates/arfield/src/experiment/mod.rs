//! Seeded Monte Carlo sweeps over (rho, n) grids: declarative configs, the
//! per-trial pipeline, aggregation into distortion curves, and log-log slope
//! fitting.

pub mod export;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator;
use crate::field::{self, FourierCoefficients};
use crate::noise::{apply_noise, NoiseSpec};
use crate::rng::trial_stream;
use crate::sampling::{generate_path, path_report, ARConfig, RenewalKind, RenewalSpec};

/// Where a sweep's ground-truth field comes from: an explicit spectrum, or a
/// seeded random draw (sup-normalized, independent of the trial streams).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSource {
    Fixed(FourierCoefficients),
    Random { b: u32, seed: u64 },
}

impl FieldSource {
    pub fn resolve(&self) -> FourierCoefficients {
        match self {
            FieldSource::Fixed(f) => f.clone(),
            FieldSource::Random { b, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                field::random_field(*b, &mut rng)
            }
        }
    }
}

/// Declarative renewal choice in a config file. The density n is supplied
/// per grid point at resolve time; only the shape parameters live here.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenewalTemplate {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_var: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
}

impl RenewalTemplate {
    pub fn uniform() -> Self {
        Self {
            kind: "uniform".into(),
            ..Self::default()
        }
    }

    fn require(&self, value: Option<f64>, name: &str) -> Result<f64> {
        value.ok_or_else(|| Error::InvalidConfig {
            field: format!("renewal.{name}"),
            reason: format!("required by the {} kind", self.kind),
        })
    }

    fn forbid(&self, entries: &[(&str, Option<f64>)]) -> Result<()> {
        for (name, value) in entries {
            if value.is_some() {
                return Err(Error::InvalidConfig {
                    field: format!("renewal.{name}"),
                    reason: format!("not used by the {} kind", self.kind),
                });
            }
        }
        Ok(())
    }

    /// Instantiates the template at density n, rejecting missing or
    /// extraneous shape parameters by config-field name.
    pub fn resolve(&self, n: f64) -> Result<RenewalSpec> {
        let kind = match self.kind.as_str() {
            "uniform" => {
                self.forbid(&[
                    ("lambda", self.lambda),
                    ("alpha", self.alpha),
                    ("log_var", self.log_var),
                    ("xi", self.xi),
                ])?;
                RenewalKind::Uniform
            }
            "scaled-beta" => {
                self.forbid(&[("log_var", self.log_var), ("xi", self.xi)])?;
                RenewalKind::ScaledBeta {
                    alpha: self.require(self.alpha, "alpha")?,
                    lambda: self.require(self.lambda, "lambda")?,
                }
            }
            "exponential" => {
                self.forbid(&[
                    ("lambda", self.lambda),
                    ("alpha", self.alpha),
                    ("log_var", self.log_var),
                    ("xi", self.xi),
                ])?;
                RenewalKind::Exponential
            }
            "lognormal" => {
                self.forbid(&[
                    ("lambda", self.lambda),
                    ("alpha", self.alpha),
                    ("xi", self.xi),
                ])?;
                RenewalKind::Lognormal {
                    log_var: self.require(self.log_var, "log_var")?,
                }
            }
            "generalized-pareto" => {
                self.forbid(&[
                    ("lambda", self.lambda),
                    ("alpha", self.alpha),
                    ("log_var", self.log_var),
                ])?;
                RenewalKind::GeneralizedPareto {
                    xi: self.require(self.xi, "xi")?,
                }
            }
            other => {
                return Err(Error::InvalidConfig {
                    field: "renewal.kind".into(),
                    reason: format!(
                        "unknown kind {other:?}; expected uniform, scaled-beta, \
                         exponential, lognormal, or generalized-pareto"
                    ),
                })
            }
        };
        RenewalSpec::new(kind, n).map_err(|e| Error::InvalidConfig {
            field: "renewal".into(),
            reason: e.to_string(),
        })
    }
}

/// Full description of one sweep: ground truth, the (rho, n) grid, renewal
/// and noise models, and the replication plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub field: FieldSource,
    pub rho_list: Vec<f64>,
    pub n_list: Vec<u64>,
    pub renewal: RenewalTemplate,
    pub noise: NoiseSpec,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| {
            Err(Error::InvalidConfig {
                field: field.into(),
                reason,
            })
        };
        if self.rho_list.is_empty() {
            return bad("rho_list", "must not be empty".into());
        }
        if self.rho_list.len() > 1 << 16 {
            return bad("rho_list", "at most 65536 entries are supported".into());
        }
        for (i, &rho) in self.rho_list.iter().enumerate() {
            if !rho.is_finite() || !(0.0..1.0).contains(&rho) {
                return bad(&format!("rho_list[{i}]"), format!("must lie in [0, 1), got {rho}"));
            }
        }
        if self.n_list.is_empty() {
            return bad("n_list", "must not be empty".into());
        }
        if self.n_list.len() > 1 << 16 {
            return bad("n_list", "at most 65536 entries are supported".into());
        }
        for (i, &n) in self.n_list.iter().enumerate() {
            if n == 0 {
                return bad(&format!("n_list[{i}]"), "density must be at least 1".into());
            }
        }
        if self.trials == 0 {
            return bad("trials", "at least one trial is required".into());
        }
        if self.trials > u32::MAX as usize {
            return bad("trials", "at most 2^32 − 1 trials are supported".into());
        }
        self.noise.validate().map_err(|e| Error::InvalidConfig {
            field: "noise".into(),
            reason: e.to_string(),
        })?;
        // Instantiating the template at the first density surfaces renewal
        // shape mistakes before any simulation work starts.
        self.renewal.resolve(self.n_list[0] as f64)?;
        Ok(())
    }
}

/// What one trial produced. A path whose first step already overshoots the
/// interval yields no samples; such trials carry no distortion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub distortion: Option<f64>,
    pub m: usize,
    pub bounds_violated: bool,
}

/// One seeded pass through the full pipeline: sample path → field readings →
/// measurement noise → order-only estimate → summed squared coefficient
/// error against the ground truth.
pub fn run_trial<R: Rng + ?Sized>(
    truth: &FourierCoefficients,
    rho: f64,
    renewal: &RenewalSpec,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let cfg = ARConfig::new(rho, renewal.clone())?;
    let path = generate_path(&cfg, rng)?;
    let bounds_violated = !path_report(&path, &cfg).all_ok();
    if path.m() == 0 {
        return Ok(TrialOutcome {
            distortion: None,
            m: 0,
            bounds_violated,
        });
    }
    let mut values: Vec<f64> = path
        .locations
        .iter()
        .map(|&s| field::evaluate(truth, s))
        .collect();
    apply_noise(&mut values, noise, rng)?;
    let est = estimator::estimate(&values, truth.bandwidth())?;
    let report = estimator::coefficient_distortion(&est, truth)?;
    Ok(TrialOutcome {
        distortion: Some(report.total),
        m: path.m(),
        bounds_violated,
    })
}

/// Aggregate of all trials at one (rho, n) grid point. Failed trials are
/// excluded from the distortion mean but still counted in `mean_m` and
/// `failed_trials`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub rho: f64,
    pub n: u64,
    pub mean_distortion: f64,
    pub stderr: f64,
    pub mean_m: f64,
    pub failed_trials: usize,
    pub bound_violations: usize,
}

/// Folds per-trial outcomes — in trial-index order — into one curve point.
/// Keeping the reduction order fixed makes the aggregate independent of the
/// order in which trials were actually produced.
pub fn aggregate_point(rho: f64, n: u64, outcomes: &[TrialOutcome]) -> CurvePoint {
    let trials = outcomes.len();
    let successes: Vec<f64> = outcomes.iter().filter_map(|o| o.distortion).collect();
    let count = successes.len();
    let mean_distortion = if count > 0 {
        successes.iter().sum::<f64>() / count as f64
    } else {
        f64::NAN
    };
    let stderr = if count >= 2 {
        let ss: f64 = successes
            .iter()
            .map(|d| (d - mean_distortion) * (d - mean_distortion))
            .sum();
        (ss / (count as f64 - 1.0)).sqrt() / (count as f64).sqrt()
    } else {
        0.0
    };
    CurvePoint {
        rho,
        n,
        mean_distortion,
        stderr,
        mean_m: outcomes.iter().map(|o| o.m as f64).sum::<f64>() / trials as f64,
        failed_trials: trials - count,
        bound_violations: outcomes.iter().filter(|o| o.bounds_violated).count(),
    }
}

/// Fitted log-log slope for one rho series, or None when fewer than two
/// usable points exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoSlope {
    pub rho: f64,
    pub slope: Option<f64>,
}

/// A completed sweep: per-point aggregates, per-rho slopes, and enough
/// metadata to trace the run back to its exact inputs.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionCurve {
    pub points: Vec<CurvePoint>,
    pub slopes: Vec<RhoSlope>,
    pub field_digest: String,
    pub renewal_kind: String,
    pub lambda: Option<f64>,
    pub noise_variance: f64,
    pub trials: usize,
}

/// Order-stable FNV-1a digest of the spectrum's canonical JSON form,
/// recorded on every curve so exports can be traced to their exact field.
pub fn field_digest(truth: &FourierCoefficients) -> String {
    let json = serde_json::to_string(truth).expect("spectra always serialize");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in json.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Runs the full (rho, n) sweep with one independent, replayable RNG stream
/// per trial. The result is a pure function of the config: rerunning — or
/// reordering the trial executions — reproduces it bit for bit.
pub fn monte_carlo(config: &ExperimentConfig) -> Result<DistortionCurve> {
    config.validate()?;
    let truth = config.field.resolve();
    let mut points = Vec::with_capacity(config.rho_list.len() * config.n_list.len());
    for (rho_idx, &rho) in config.rho_list.iter().enumerate() {
        for (n_idx, &n) in config.n_list.iter().enumerate() {
            let renewal = config.renewal.resolve(n as f64)?;
            let mut outcomes = Vec::with_capacity(config.trials);
            for trial in 0..config.trials {
                let mut rng = trial_stream(config.master_seed, rho_idx, n_idx, trial);
                outcomes.push(run_trial(&truth, rho, &renewal, &config.noise, &mut rng)?);
            }
            points.push(aggregate_point(rho, n, &outcomes));
        }
    }
    let slopes = config
        .rho_list
        .iter()
        .map(|&rho| {
            let usable: Vec<(f64, f64)> = points
                .iter()
                .filter(|p| p.rho == rho && p.mean_distortion.is_finite() && p.mean_distortion > 0.0)
                .map(|p| (p.n as f64, p.mean_distortion))
                .collect();
            RhoSlope {
                rho,
                slope: fit_loglog_slope(&usable).ok(),
            }
        })
        .collect();
    let probe = config.renewal.resolve(config.n_list[0] as f64)?;
    Ok(DistortionCurve {
        points,
        slopes,
        field_digest: field_digest(&truth),
        renewal_kind: probe.kind().name().to_string(),
        lambda: probe.lambda(),
        noise_variance: config.noise.variance,
        trials: config.trials,
    })
}

/// Ordinary least-squares slope of log10(distortion) against log10(n).
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "slope fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    for &(n, d) in points {
        if !n.is_finite() || !d.is_finite() || n <= 0.0 || d <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "log-log fit needs strictly positive finite points, got ({n}, {d})"
            )));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, d)| (n.log10(), d.log10())).collect();
    let len = logs.len() as f64;
    let xbar = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let ybar = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "slope fit needs at least two distinct n values".into(),
        ));
    }
    Ok(sxy / sxx)
}
