//! Bandlimited real fields on the unit interval, represented by their
//! complex Fourier coefficients `a[k]`, k = −b..b.

use num_complex::Complex64;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of uniform grid points used for sup-norm and quadrature defaults.
/// For b ≤ 8 this oversamples the Nyquist rate by >500×, so the grid max
/// equals the true sup far below every tolerance used in the tests.
pub const DEFAULT_GRID: usize = 8192;

/// Complex spectrum of a real, 1-periodic, bandlimited field
/// g(x) = Re Σ_{k=−b}^{b} a[k]·exp(j2πkx).
///
/// Invariants: `coeffs.len() == 2b+1`, `a[−k] = conj(a[k])` (so g is real),
/// and `a[0]` has zero imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    b: u32,
    coeffs: Vec<Complex64>,
}

impl FourierCoefficients {
    /// Validates and wraps a coefficient vector listing k = −b..b in order.
    pub fn new(b: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        let expect = 2 * b as usize + 1;
        if coeffs.len() != expect {
            return Err(Error::InvalidParameter(format!(
                "coefficient count {} does not match 2b+1 = {}",
                coeffs.len(),
                expect
            )));
        }
        let tol = 1e-9;
        for k in 1..=b as usize {
            let lo = coeffs[b as usize - k];
            let hi = coeffs[b as usize + k];
            if (lo - hi.conj()).norm() > tol {
                return Err(Error::InvalidParameter(format!(
                    "coefficients for k = ±{k} are not conjugate-symmetric"
                )));
            }
        }
        if coeffs[b as usize].im.abs() > tol {
            return Err(Error::InvalidParameter(
                "coefficient for k = 0 must be real".into(),
            ));
        }
        Ok(Self { b, coeffs })
    }

    /// Bandwidth index b.
    pub fn bandwidth(&self) -> u32 {
        self.b
    }

    /// Coefficient a[k] for |k| ≤ b.
    pub fn coeff(&self, k: i32) -> Complex64 {
        debug_assert!(k.unsigned_abs() <= self.b, "|k| must be ≤ b");
        self.coeffs[(k + self.b as i32) as usize]
    }

    /// All coefficients in k = −b..b order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    b: u32,
    coeffs: Vec<(f64, f64)>,
}

impl Serialize for FourierCoefficients {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldJson {
            b: self.b,
            coeffs: self.coeffs.iter().map(|c| (c.re, c.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierCoefficients {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FieldJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        FourierCoefficients::new(raw.b, coeffs).map_err(D::Error::custom)
    }
}

/// Full complex harmonic sum Σ_{k=−b}^{b} c[k]·exp(j2πkx) for a coefficient
/// slice listing k = −b..b. Exposed so tests can inspect the imaginary part
/// that [`evaluate`] discards.
pub fn harmonic_sum(coeffs: &[Complex64], x: f64) -> Complex64 {
    debug_assert!(coeffs.len() % 2 == 1, "coefficients must list k = −b..b");
    let b = coeffs.len() / 2;
    let theta = 2.0 * std::f64::consts::PI * x;
    let (sin, cos) = theta.sin_cos();
    let w = Complex64::new(cos, sin);
    let mut acc = coeffs[b];
    let mut wk = Complex64::new(1.0, 0.0);
    for k in 1..=b {
        wk *= w;
        acc += coeffs[b + k] * wk + coeffs[b - k] * wk.conj();
    }
    acc
}

/// Field value g(x) = Re Σ a[k]·exp(j2πkx). The field is 1-periodic, so any
/// real x is accepted; under conjugate symmetry the discarded imaginary part
/// is below 1e−12.
pub fn evaluate(f: &FourierCoefficients, x: f64) -> f64 {
    harmonic_sum(&f.coeffs, x).re
}

/// Maximum of |g(x)| over the default uniform grid on [0, 1).
pub fn grid_max(f: &FourierCoefficients) -> f64 {
    let mut max = 0.0f64;
    for j in 0..DEFAULT_GRID {
        let v = evaluate(f, j as f64 / DEFAULT_GRID as f64).abs();
        if v > max {
            max = v;
        }
    }
    max
}

/// Rescales the coefficients so the grid max of |g| is 1.
///
/// Errors with [`Error::DegenerateField`] when every coefficient is zero.
pub fn normalize_sup(f: &FourierCoefficients) -> Result<FourierCoefficients> {
    let m = grid_max(f);
    if m == 0.0 {
        return Err(Error::DegenerateField);
    }
    let coeffs = f.coeffs.iter().map(|c| c / m).collect();
    Ok(FourierCoefficients { b: f.b, coeffs })
}

/// Smoothness bound on the derivative: |g'(x)| ≤ 2bπ·sup|g|, computed with
/// the grid sup. For a sup-normalized field this is simply 2bπ.
pub fn derivative_bound(f: &FourierCoefficients) -> f64 {
    2.0 * f.b as f64 * std::f64::consts::PI * grid_max(f)
}

/// Draws a random conjugate-symmetric spectrum — real and imaginary parts of
/// a[1..b] and the real a[0] i.i.d. Uniform[−1,1] — then sup-normalizes it.
pub fn random_field<R: Rng + ?Sized>(b: u32, rng: &mut R) -> FourierCoefficients {
    loop {
        let a0 = Complex64::new(rng.random_range(-1.0..=1.0), 0.0);
        let pos: Vec<Complex64> = (0..b)
            .map(|_| {
                let re = rng.random_range(-1.0..=1.0);
                let im = rng.random_range(-1.0..=1.0);
                Complex64::new(re, im)
            })
            .collect();
        let mut coeffs = Vec::with_capacity(2 * b as usize + 1);
        coeffs.extend(pos.iter().rev().map(|c| c.conj()));
        coeffs.push(a0);
        coeffs.extend(pos.iter().copied());
        let field = FourierCoefficients { b, coeffs };
        // An all-zero draw has probability zero; redraw rather than error.
        match normalize_sup(&field) {
            Ok(f) => return f,
            Err(_) => continue,
        }
    }
}

/// The bundled b = 3 demonstration spectrum used by the example configs and
/// throughout the test suite. Its sup over the unit interval is ≈ 0.918.
pub fn demo_field() -> FourierCoefficients {
    FourierCoefficients::new(
        3,
        vec![
            Complex64::new(-0.1679, 0.0586),
            Complex64::new(0.0871, -0.0343),
            Complex64::new(-0.04131, -0.0216),
            Complex64::new(0.3002, 0.0),
            Complex64::new(-0.04131, 0.0216),
            Complex64::new(0.0871, 0.0343),
            Complex64::new(-0.1679, -0.0586),
        ],
    )
    .expect("the bundled spectrum is conjugate-symmetric by construction")
}

/// Recovers Fourier coefficients of a 1-periodic callable by composite
/// trapezoid quadrature of ∫₀¹ g(x)·exp(−j2πkx) dx on [`DEFAULT_GRID`]
/// points. Exact (to roundoff) for inputs bandlimited to b.
pub fn exact_coefficients<F: Fn(f64) -> f64>(g: F, b: u32) -> FourierCoefficients {
    let n = DEFAULT_GRID;
    let mut pos = vec![Complex64::new(0.0, 0.0); b as usize + 1];
    for j in 0..=n {
        let x = j as f64 / n as f64;
        let weight = if j == 0 || j == n { 0.5 } else { 1.0 } / n as f64;
        let gv = g(x) * weight;
        let theta = -2.0 * std::f64::consts::PI * x;
        let (sin, cos) = theta.sin_cos();
        let w = Complex64::new(cos, sin);
        let mut wk = Complex64::new(1.0, 0.0);
        for acc in pos.iter_mut() {
            *acc += gv * wk;
            wk *= w;
        }
    }
    let mut coeffs = Vec::with_capacity(2 * b as usize + 1);
    coeffs.extend(pos[1..].iter().rev().map(|c| c.conj()));
    coeffs.push(Complex64::new(pos[0].re, 0.0));
    coeffs.extend(pos[1..].iter().copied());
    FourierCoefficients { b, coeffs }
}
