//! Simulation toolkit for reconstructing a bandlimited spatial field from
//! the readings of a mobile sensor whose step sizes are AR(1)-correlated
//! positive renewal draws — using only the order and count of the readings,
//! never their locations.
//!
//! The pipeline runs: [`field`] (conjugate-symmetric spectra and evaluation)
//! → [`sampling`] (correlated sample paths over the unit interval) →
//! [`noise`] (measurement corruption) → [`estimator`] (order-only
//! coefficient recovery and distortion scoring). [`bounds`] provides the
//! closed-form path guarantees, [`experiment`] the seeded Monte Carlo sweeps
//! with CSV/JSON/SVG export, and [`rng`] the replayable per-trial streams.
//!
//! ```
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//! use arfield::{estimator, field, sampling};
//!
//! let truth = field::demo_field();
//! let renewal = sampling::RenewalSpec::new(sampling::RenewalKind::Uniform, 1000.0)?;
//! let config = sampling::ARConfig::new(0.5, renewal)?;
//!
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//! let path = sampling::generate_path(&config, &mut rng)?;
//! let readings: Vec<f64> = path
//!     .locations
//!     .iter()
//!     .map(|&s| field::evaluate(&truth, s))
//!     .collect();
//!
//! // The estimator sees the readings alone — no locations.
//! let estimate = estimator::estimate(&readings, truth.bandwidth())?;
//! let report = estimator::coefficient_distortion(&estimate, &truth)?;
//! assert!(report.total < 0.01);
//! # Ok::<(), arfield::Error>(())
//! ```

pub mod bounds;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod field;
pub mod noise;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
