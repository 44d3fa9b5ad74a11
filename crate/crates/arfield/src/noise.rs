//! Additive, independent, zero-mean measurement noise.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Noise distribution family. The estimator's guarantees use only the mean
/// (zero) and the variance, so two concrete shapes are enough to demonstrate
/// distribution-agnostic behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    None,
    Gaussian,
    Uniform,
}

/// Additive noise model W with E[W] = 0 and Var[W] = `variance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    #[serde(default)]
    pub variance: f64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            variance: 0.0,
        }
    }

    pub fn gaussian(variance: f64) -> Self {
        Self {
            kind: NoiseKind::Gaussian,
            variance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.variance.is_finite() || self.variance < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be nonnegative, got {}",
                self.variance
            )));
        }
        if self.kind == NoiseKind::None && self.variance != 0.0 {
            return Err(Error::InvalidParameter(
                "noise kind `none` requires variance 0".into(),
            ));
        }
        Ok(())
    }
}

/// Adds one i.i.d. zero-mean draw of the configured variance to each value
/// in place. The gaussian kind is N(0, σ²); the uniform kind is
/// Uniform[−√(3σ²), +√(3σ²)] (which has variance σ²).
pub fn apply_noise<R: Rng + ?Sized>(
    values: &mut [f64],
    spec: &NoiseSpec,
    rng: &mut R,
) -> Result<()> {
    spec.validate()?;
    match spec.kind {
        NoiseKind::None => {}
        NoiseKind::Gaussian => {
            let sigma = spec.variance.sqrt();
            for v in values.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *v += sigma * z;
            }
        }
        NoiseKind::Uniform => {
            let half_width = (3.0 * spec.variance).sqrt();
            for v in values.iter_mut() {
                *v += rng.random_range(-half_width..=half_width);
            }
        }
    }
    Ok(())
}

/// Allocating variant of [`apply_noise`]: returns the corrupted copy.
pub fn corrupt<R: Rng + ?Sized>(values: &[f64], spec: &NoiseSpec, rng: &mut R) -> Result<Vec<f64>> {
    let mut out = values.to_vec();
    apply_noise(&mut out, spec, rng)?;
    Ok(out)
}
