//! Location-unaware Fourier coefficient estimation from ordered noisy
//! samples, field reconstruction, and distortion scoring.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{self, FourierCoefficients};

/// Coefficients recovered by the uniform-grid surrogate sum, together with
/// the sample count they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedCoefficients {
    b: u32,
    coeffs: Vec<Complex64>,
    m_used: usize,
}

impl EstimatedCoefficients {
    pub fn bandwidth(&self) -> u32 {
        self.b
    }

    /// Estimated coefficient for |k| ≤ b.
    pub fn coeff(&self, k: i32) -> Complex64 {
        debug_assert!(k.unsigned_abs() <= self.b, "|k| must be ≤ b");
        self.coeffs[(k + self.b as i32) as usize]
    }

    /// All estimates in k = −b..b order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of samples M the estimate was computed from.
    pub fn m_used(&self) -> usize {
        self.m_used
    }
}

impl Serialize for EstimatedCoefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct EstJson {
            b: u32,
            coeffs: Vec<(f64, f64)>,
            m_used: usize,
        }
        EstJson {
            b: self.b,
            coeffs: self.coeffs.iter().map(|c| (c.re, c.im)).collect(),
            m_used: self.m_used,
        }
        .serialize(s)
    }
}

/// Squared coefficient errors |est[k] − a[k]|² and their sum — the
/// single-realization distortion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub per_k: Vec<f64>,
    pub total: f64,
}

/// Estimates the coefficients for k = −b..b from ordered noisy readings by
/// the surrogate sum (1/M) Σ_{i=1}^{M} v_i·exp(−j2πki/M).
///
/// Only the order and count of the samples are consumed; the true sample
/// locations never enter. Fewer samples than coefficients (M < 2b+1) is
/// allowed and yields an aliased estimate rather than an error.
pub fn estimate(samples: &[f64], b: u32) -> Result<EstimatedCoefficients> {
    let m = samples.len();
    if m == 0 {
        return Err(Error::NoSamples);
    }
    let mf = m as f64;
    let mut pos = vec![Complex64::new(0.0, 0.0); b as usize + 1];
    for (i, &v) in samples.iter().enumerate() {
        let theta = -2.0 * std::f64::consts::PI * (i + 1) as f64 / mf;
        let (sin, cos) = theta.sin_cos();
        let z = Complex64::new(cos, sin);
        let mut p = Complex64::new(1.0, 0.0);
        pos[0] += v;
        for acc in pos[1..].iter_mut() {
            p *= z;
            *acc += v * p;
        }
    }
    // For real inputs the negative-k sums are exactly the conjugates of the
    // positive-k sums, so they are mirrored rather than re-accumulated.
    let mut coeffs = Vec::with_capacity(2 * b as usize + 1);
    coeffs.extend(pos[1..].iter().rev().map(|c| (c / mf).conj()));
    coeffs.push(pos[0] / mf);
    coeffs.extend(pos[1..].iter().map(|c| c / mf));
    Ok(EstimatedCoefficients {
        b,
        coeffs,
        m_used: m,
    })
}

/// Synthesized field estimate Ĝ(x) = Re Σ est[k]·exp(j2πkx).
pub fn reconstruct(est: &EstimatedCoefficients, x: f64) -> f64 {
    field::harmonic_sum(&est.coeffs, x).re
}

/// Squared coefficient errors against the ground truth.
pub fn coefficient_distortion(
    est: &EstimatedCoefficients,
    truth: &FourierCoefficients,
) -> Result<DistortionReport> {
    if est.b != truth.bandwidth() {
        return Err(Error::BandwidthMismatch {
            expected: truth.bandwidth(),
            got: est.b,
        });
    }
    let per_k: Vec<f64> = est
        .coeffs
        .iter()
        .zip(truth.coeffs())
        .map(|(e, a)| (e - a).norm_sqr())
        .collect();
    let total = per_k.iter().sum();
    Ok(DistortionReport { per_k, total })
}

/// Quadrature counterpart of [`coefficient_distortion`]: composite trapezoid
/// of ∫₀¹ |Ĝ(x) − g(x)|² dx on the default grid. The two agree to below
/// 1e−8 (the fields are bandlimited, so the quadrature is exact to roundoff).
pub fn integral_distortion(est: &EstimatedCoefficients, truth: &FourierCoefficients) -> Result<f64> {
    if est.b != truth.bandwidth() {
        return Err(Error::BandwidthMismatch {
            expected: truth.bandwidth(),
            got: est.b,
        });
    }
    let n = field::DEFAULT_GRID;
    let mut acc = 0.0;
    for j in 0..=n {
        let x = j as f64 / n as f64;
        let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
        let d = reconstruct(est, x) - field::evaluate(truth, x);
        acc += weight * d * d;
    }
    Ok(acc / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::field::{demo_field, evaluate, random_field};
    use crate::noise::{apply_noise, NoiseSpec};
    use crate::sampling::{generate_path, ARConfig, RenewalKind, RenewalSpec};

    /// Direct per-harmonic Riemann sum used as an independent oracle.
    fn riemann_sum(values: &[f64], b: u32) -> Vec<Complex64> {
        let m = values.len() as f64;
        (-(b as i32)..=b as i32)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, &v) in values.iter().enumerate() {
                    let theta = -2.0 * std::f64::consts::PI * k as f64 * (i + 1) as f64 / m;
                    acc += v * Complex64::new(theta.cos(), theta.sin());
                }
                acc / m
            })
            .collect()
    }

    #[test]
    fn no_samples_is_an_error() {
        assert!(matches!(estimate(&[], 3), Err(Error::NoSamples)));
    }

    #[test]
    fn constant_samples_recover_the_dc_coefficient_exactly() {
        let values = vec![0.5; 377];
        let est = estimate(&values, 3).unwrap();
        assert_eq!(est.coeff(0).re, 0.5);
        assert_eq!(est.coeff(0).im, 0.0);
        for k in [-3, -2, -1, 1, 2, 3] {
            assert!(
                est.coeff(k).norm() <= 1e-12,
                "k={k} should vanish, got {}",
                est.coeff(k)
            );
        }
    }

    #[test]
    fn exact_grid_samples_match_the_riemann_sum() {
        let f = demo_field();
        let m = 64;
        let values: Vec<f64> = (1..=m).map(|i| evaluate(&f, i as f64 / m as f64)).collect();
        let est = estimate(&values, 3).unwrap();
        let oracle = riemann_sum(&values, 3);
        for (k, (e, o)) in est.coeffs().iter().zip(&oracle).enumerate() {
            assert!(
                (e - o).norm() <= 1e-12,
                "k index {k}: {e} vs oracle {o}"
            );
        }
        // The Riemann sum itself sits within the smoothness-driven band of
        // the true coefficients: |A_R[k] − a[k]| ≤ 4bπ/M.
        let band = 4.0 * 3.0 * std::f64::consts::PI / m as f64;
        for k in -3..=3 {
            let err = (est.coeff(k) - f.coeff(k)).norm();
            assert!(err <= band, "k={k}: |A_R − a| = {err} > {band}");
        }
    }

    #[test]
    fn estimates_are_conjugate_symmetric_for_real_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let values: Vec<f64> = (0..501).map(|_| rng.random_range(-1.0..1.0)).collect();
        let est = estimate(&values, 4).unwrap();
        for k in 1..=4 {
            let d = (est.coeff(-k) - est.coeff(k).conj()).norm();
            assert!(d <= 1e-12, "k={k}: asymmetry {d}");
        }
        assert!(est.coeff(0).im.abs() <= 1e-12);
    }

    #[test]
    fn estimation_is_linear_in_the_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let signal: Vec<f64> = (0..300).map(|_| rng.random_range(-1.0..1.0)).collect();
        let noise: Vec<f64> = (0..300).map(|_| rng.random_range(-0.3..0.3)).collect();
        let combined: Vec<f64> = signal.iter().zip(&noise).map(|(s, w)| s + w).collect();
        let est_combined = estimate(&combined, 3).unwrap();
        let est_signal = estimate(&signal, 3).unwrap();
        let est_noise = estimate(&noise, 3).unwrap();
        for k in -3..=3 {
            let d = (est_combined.coeff(k) - est_signal.coeff(k) - est_noise.coeff(k)).norm();
            assert!(d <= 1e-12, "k={k}: linearity gap {d}");
        }
    }

    #[test]
    fn small_sample_counts_alias_instead_of_failing() {
        let est = estimate(&[0.3, -0.1, 0.4], 3).unwrap();
        assert_eq!(est.m_used(), 3);
        assert!(est.coeffs().iter().all(|c| c.norm().is_finite()));
    }

    #[test]
    fn location_metadata_cannot_influence_the_estimate() {
        // The estimator's signature admits only ordered values; shuffling a
        // parallel location vector (as a caller might carry) is invisible.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = demo_field();
        let spec = RenewalSpec::new(RenewalKind::Uniform, 300.0).unwrap();
        let cfg = ARConfig::new(0.5, spec).unwrap();
        let path = generate_path(&cfg, &mut rng).unwrap();
        let values: Vec<f64> = path.locations.iter().map(|&s| evaluate(&f, s)).collect();
        let before = estimate(&values, 3).unwrap();
        let mut scrambled_locations = path.locations.clone();
        scrambled_locations.reverse();
        let after = estimate(&values, 3).unwrap();
        assert_eq!(before, after);
        assert_ne!(scrambled_locations, path.locations);
    }

    #[test]
    fn reconstruct_with_true_coefficients_is_evaluate() {
        let f = demo_field();
        let est = EstimatedCoefficients {
            b: 3,
            coeffs: f.coeffs().to_vec(),
            m_used: 10,
        };
        for x in [0.0, 0.13, 0.5, 0.77] {
            assert_abs_diff_eq!(reconstruct(&est, x), evaluate(&f, x), epsilon = 1e-15);
        }
        let report = coefficient_distortion(&est, &f).unwrap();
        assert_eq!(report.total, 0.0);
    }

    #[test]
    fn zero_estimate_scores_the_field_energy() {
        let f = demo_field();
        let est = EstimatedCoefficients {
            b: 3,
            coeffs: vec![Complex64::new(0.0, 0.0); 7],
            m_used: 5,
        };
        let energy: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let report = coefficient_distortion(&est, &f).unwrap();
        assert_abs_diff_eq!(report.total, energy, epsilon = 1e-15);
        assert_abs_diff_eq!(
            integral_distortion(&est, &f).unwrap(),
            energy,
            epsilon = 1e-10
        );
    }

    #[test]
    fn single_entry_perturbation_scores_its_square() {
        let f = demo_field();
        let mut coeffs = f.coeffs().to_vec();
        coeffs[3] += 0.1;
        let est = EstimatedCoefficients {
            b: 3,
            coeffs,
            m_used: 5,
        };
        let report = coefficient_distortion(&est, &f).unwrap();
        assert_abs_diff_eq!(report.total, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(report.per_k[3], 0.01, epsilon = 1e-15);
    }

    #[test]
    fn bandwidth_mismatch_is_rejected() {
        let f = demo_field();
        let est = estimate(&[0.1, 0.2, 0.3, 0.4], 2).unwrap();
        assert!(matches!(
            coefficient_distortion(&est, &f),
            Err(Error::BandwidthMismatch { expected: 3, got: 2 })
        ));
        assert!(integral_distortion(&est, &f).is_err());
    }

    #[test]
    fn coefficient_and_integral_distortion_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let b = rng.random_range(1..=5u32);
            let truth = random_field(b, &mut rng);
            let samples: Vec<f64> = (0..200).map(|_| rng.random_range(-1.0..1.0)).collect();
            let est = estimate(&samples, b).unwrap();
            let total = coefficient_distortion(&est, &truth).unwrap().total;
            let integral = integral_distortion(&est, &truth).unwrap();
            assert_abs_diff_eq!(total, integral, epsilon = 1e-8);
        }
    }

    #[test]
    fn noisy_pipeline_distortion_shrinks_with_density() {
        // One-seed smoke test of the full pipeline; the statistical scaling
        // suites live in the integration tests.
        let f = demo_field();
        let noise = NoiseSpec::gaussian(0.125);
        let mut total = [0.0f64; 2];
        for (slot, n) in [(0usize, 1000.0), (1usize, 10000.0)] {
            let spec = RenewalSpec::new(RenewalKind::Uniform, n).unwrap();
            let cfg = ARConfig::new(0.5, spec).unwrap();
            for t in 0..64u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(900 + t);
                let path = generate_path(&cfg, &mut rng).unwrap();
                let mut vals: Vec<f64> =
                    path.locations.iter().map(|&s| evaluate(&f, s)).collect();
                apply_noise(&mut vals, &noise, &mut rng).unwrap();
                let est = estimate(&vals, 3).unwrap();
                total[slot] += coefficient_distortion(&est, &f).unwrap().total;
            }
        }
        assert!(
            total[1] < total[0] / 2.0,
            "distortion did not shrink: {total:?}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scaling_the_samples_scales_the_estimate(
            scale in -4.0..4.0f64,
            values in proptest::collection::vec(-1.0..1.0f64, 1..120),
        ) {
            let est = estimate(&values, 3).unwrap();
            let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
            let est_scaled = estimate(&scaled, 3).unwrap();
            for k in -3..=3 {
                let want = est.coeff(k) * scale;
                prop_assert!((est_scaled.coeff(k) - want).norm() <= 1e-12);
            }
        }

        #[test]
        fn conjugate_symmetry_holds_for_arbitrary_real_samples(
            values in proptest::collection::vec(-10.0..10.0f64, 1..200),
        ) {
            let est = estimate(&values, 5).unwrap();
            for k in 1..=5 {
                prop_assert!((est.coeff(-k) - est.coeff(k).conj()).norm() <= 1e-12);
            }
        }
    }
}
