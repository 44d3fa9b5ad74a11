//! Closed-form guarantees for AR(1) sample paths driven by positive renewal
//! draws: expected-count brackets, per-path floors, remainder caps, and the
//! density threshold past which the path mixes across the unit interval.

use serde::Serialize;

use crate::error::{Error, Result};

/// The full set of closed-form guarantees for one (rho, lambda, n) triple.
///
/// `lambda` is the bounded-support factor: every renewal draw lies in
/// (0, lambda/n]. The per-path fields (`m_lower`, `remainder_upper`) hold for
/// every realization; the `em_*` fields bracket the expected sample count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    /// Lower bracket on the expected sample count: n(1−rho) − 1.
    pub em_lower: f64,
    /// Upper bracket on the expected sample count: n + lambda/(1−rho) − 1.
    pub em_upper: f64,
    /// Every path collects strictly more than n(1−rho)/lambda − 1 samples.
    pub m_lower: f64,
    /// The uncovered tail 1 − S_M never exceeds lambda/(n(1−rho)).
    pub remainder_upper: f64,
    /// Density above which the path's reach outruns its correlation length.
    pub density_threshold: f64,
    /// The correlation-discounted density n(1−rho) that governs scaling.
    pub effective_density: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) || !rho.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rho must lie in [0, 1), got {rho}"
        )));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda must exceed 1, got {lambda}"
        )));
    }
    Ok(())
}

fn check_density(n: f64) -> Result<()> {
    if !n.is_finite() || n < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "n must be at least 1, got {n}"
        )));
    }
    Ok(())
}

/// Minimum sampling density at which the per-step reach of the path exceeds
/// twice its correlation length: (lambda/(1−rho))·(1 − 2/ln rho). The
/// rho → 0 limit is lambda.
pub fn density_threshold(rho: f64, lambda: f64) -> Result<f64> {
    check_rho(rho)?;
    check_lambda(lambda)?;
    if rho == 0.0 {
        return Ok(lambda);
    }
    Ok(lambda / (1.0 - rho) * (1.0 - 2.0 / rho.ln()))
}

/// Computes every closed-form guarantee for a bounded-draw AR(1) path.
pub fn compute_bounds(rho: f64, lambda: f64, n: f64) -> Result<BoundSet> {
    check_rho(rho)?;
    check_lambda(lambda)?;
    check_density(n)?;
    let effective_density = n - rho * n;
    Ok(BoundSet {
        em_lower: effective_density - 1.0,
        em_upper: n + lambda / (1.0 - rho) - 1.0,
        m_lower: effective_density / lambda - 1.0,
        remainder_upper: lambda / effective_density,
        density_threshold: density_threshold(rho, lambda)?,
        effective_density,
    })
}

/// The distortion envelope (c − c′·rhoⁿ)/n. The constants are never
/// universal; fit them to measured curves with [`fit_envelope`].
pub fn distortion_envelope(c: f64, c_prime: f64, rho: f64, n: f64) -> f64 {
    (c - c_prime * rho.powf(n)) / n
}

/// Least-squares fit of [`distortion_envelope`] to measured (n, distortion)
/// points for a known rho.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeFit {
    pub c: f64,
    pub c_prime: f64,
    pub r_squared: f64,
}

/// Fits the envelope constants by ordinary least squares on the basis
/// {1/n, −rhoⁿ/n}. When the second basis vector is numerically degenerate
/// (rho = 0, or rhoⁿ underflows at every observed n) the fit collapses to
/// the single-constant model c/n.
pub fn fit_envelope(points: &[(f64, f64)], rho: f64) -> Result<EnvelopeFit> {
    check_rho(rho)?;
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "envelope fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    for &(n, d) in points {
        if !n.is_finite() || !d.is_finite() || n < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "envelope fit needs finite points with n ≥ 1, got ({n}, {d})"
            )));
        }
    }
    let phi: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, _)| (1.0 / n, -rho.powf(n) / n))
        .collect();
    let s11: f64 = phi.iter().map(|p| p.0 * p.0).sum();
    let s12: f64 = phi.iter().map(|p| p.0 * p.1).sum();
    let s22: f64 = phi.iter().map(|p| p.1 * p.1).sum();
    let t1: f64 = phi.iter().zip(points).map(|(p, &(_, d))| p.0 * d).sum();
    let t2: f64 = phi.iter().zip(points).map(|(p, &(_, d))| p.1 * d).sum();
    let det = s11 * s22 - s12 * s12;
    let (c, c_prime) = if det > 1e-12 * s11 * s22 && s22 > 0.0 {
        ((s22 * t1 - s12 * t2) / det, (s11 * t2 - s12 * t1) / det)
    } else {
        (t1 / s11, 0.0)
    };
    let mean = points.iter().map(|&(_, d)| d).sum::<f64>() / points.len() as f64;
    let ss_tot: f64 = points.iter().map(|&(_, d)| (d - mean) * (d - mean)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|&(n, d)| {
            let r = d - distortion_envelope(c, c_prime, rho, n);
            r * r
        })
        .sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res <= f64::EPSILON {
        1.0
    } else {
        0.0
    };
    Ok(EnvelopeFit {
        c,
        c_prime,
        r_squared,
    })
}
