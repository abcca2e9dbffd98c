//! Test-function pairs and the two sides of the explicit formula.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ap::{ap_point_count, primes_up_to};
use super::{normalize_zeros, CurveRecord};
use crate::error::{Error, Result};

/// An even test function `φ` whose Fourier transform `φ̂` vanishes outside
/// `[-σ, σ]`.
pub trait TestFunction: Send + Sync {
    fn name(&self) -> &str;
    fn phi(&self, x: f64) -> f64;
    fn phi_hat(&self, u: f64) -> f64;
    fn support(&self) -> f64;
    /// Non-increasing `M(x) ≥ sup_{y ≥ x} |φ(y)|` for `x > 0`.
    fn majorant(&self, x: f64) -> f64;
    /// `∫_x^∞ M`.
    fn majorant_tail(&self, x: f64) -> f64;
}

/// `φ(x) = σ (sin πσx / πσx)²`, `φ̂(u) = (1 - |u|/σ)⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FejerPair {
    pub sigma: f64,
}

impl FejerPair {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "support must be positive, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }
}

impl TestFunction for FejerPair {
    fn name(&self) -> &str {
        "fejer"
    }

    fn phi(&self, x: f64) -> f64 {
        let y = PI * self.sigma * x;
        if y.abs() < 1e-8 {
            self.sigma * (1.0 - y * y / 3.0)
        } else {
            self.sigma * (y.sin() / y).powi(2)
        }
    }

    fn phi_hat(&self, u: f64) -> f64 {
        (1.0 - u.abs() / self.sigma).max(0.0)
    }

    fn support(&self) -> f64 {
        self.sigma
    }

    fn majorant(&self, x: f64) -> f64 {
        let x = x.abs();
        let bound = 1.0 / (PI * PI * self.sigma * x * x);
        if x == 0.0 {
            self.sigma
        } else {
            bound.min(self.sigma)
        }
    }

    fn majorant_tail(&self, x: f64) -> f64 {
        1.0 / (PI * PI * self.sigma * x.max(f64::MIN_POSITIVE))
    }
}

/// Evenness of both functions and support of `φ̂`, checked on a grid.
pub fn validate_test_function(tf: &dyn TestFunction) -> Result<()> {
    let sigma = tf.support();
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Validation(format!(
            "{}: support must be positive",
            tf.name()
        )));
    }
    for i in 0..=400 {
        let x = i as f64 * 0.025;
        let (a, b) = (tf.phi(x), tf.phi(-x));
        if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
            return Err(Error::Validation(format!(
                "{}: φ is not even at {x}",
                tf.name()
            )));
        }
        let u = sigma * i as f64 / 200.0;
        let (a, b) = (tf.phi_hat(u), tf.phi_hat(-u));
        if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
            return Err(Error::Validation(format!(
                "{}: φ̂ is not even at {u}",
                tf.name()
            )));
        }
        if u > sigma && tf.phi_hat(u) != 0.0 {
            return Err(Error::Validation(format!(
                "{}: φ̂({u}) is nonzero outside the support",
                tf.name()
            )));
        }
    }
    Ok(())
}

/// Prime side of the explicit formula without the
/// `O(log log C / log C)` remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitFormulaValue {
    pub value: f64,
    pub phi_hat_zero: f64,
    pub phi_zero: f64,
    pub first_sum: f64,
    pub second_sum: f64,
    /// `C^σ`; primes beyond it contribute nothing.
    pub support_cutoff: f64,
    pub primes_used: usize,
    /// Whether `prime_cutoff ≥ C^σ`, so that the truncation is exact.
    pub complete: bool,
    pub label: String,
}

/// `φ̂(0) + φ(0) - 2 Σ_p (log p / log C) φ̂(log p / log C) λ(p)/√p
///  - 2 Σ_p (log p / log C) φ̂(2 log p / log C) λ(p)²/p`
/// with `λ(p) = a_p/√p`, over primes `p ≤ prime_cutoff`.
pub fn explicit_formula_prime_side(
    weierstrass: [i64; 5],
    log_conductor: f64,
    tf: &dyn TestFunction,
    prime_cutoff: u64,
) -> Result<ExplicitFormulaValue> {
    if prime_cutoff < 2 {
        return Err(Error::InvalidParameters(
            "prime cutoff must be at least 2".into(),
        ));
    }
    if !(log_conductor > 0.0) {
        return Err(Error::Domain(format!(
            "log-conductor must be positive, got {log_conductor}"
        )));
    }
    validate_test_function(tf)?;
    let sigma = tf.support();
    let support_cutoff = (sigma * log_conductor).exp();
    let limit = (prime_cutoff as f64).min(support_cutoff.floor()) as u64;
    let mut first_sum = 0.0;
    let mut second_sum = 0.0;
    let mut used = 0;
    for p in primes_up_to(limit) {
        let w = (p as f64).ln() / log_conductor;
        let h1 = tf.phi_hat(w);
        let h2 = tf.phi_hat(2.0 * w);
        if h1 == 0.0 && h2 == 0.0 {
            continue;
        }
        let ap = ap_point_count(weierstrass, p)?.ap as f64;
        let lambda = ap / (p as f64).sqrt();
        first_sum += w * h1 * lambda / (p as f64).sqrt();
        second_sum += w * h2 * lambda * lambda / p as f64;
        used += 1;
    }
    let phi_hat_zero = tf.phi_hat(0.0);
    let phi_zero = tf.phi(0.0);
    Ok(ExplicitFormulaValue {
        value: phi_hat_zero + phi_zero - 2.0 * first_sum - 2.0 * second_sum,
        phi_hat_zero,
        phi_zero,
        first_sum,
        second_sum,
        support_cutoff,
        primes_used: used,
        complete: prime_cutoff as f64 >= support_cutoff,
        label: "prime side; O(log log C / log C) remainder not modeled".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSideValue {
    pub value: f64,
    pub zeros_used: usize,
    /// Bound on the omitted zeros, assuming normalized zeros beyond the
    /// last stored one have unit mean spacing.
    pub truncation_bound: f64,
}

/// `2 Σ_j φ(γ_j log C / 2π) + rank · φ(0)` over stored zeros; the factor 2
/// counts the conjugate zeros below the central point.
pub fn zero_side_sum(record: &CurveRecord, tf: &dyn TestFunction) -> Result<ZeroSideValue> {
    if record.zeros.is_empty() {
        return Err(Error::EmptyInput(
            "zero side needs at least one zero".into(),
        ));
    }
    let z = normalize_zeros(record)?;
    let sum: f64 = z.iter().map(|&x| tf.phi(x)).sum();
    let last = *z.last().expect("nonempty");
    let truncation_bound = 2.0 * (tf.majorant(last) + tf.majorant_tail(last));
    Ok(ZeroSideValue {
        value: 2.0 * sum + record.rank as f64 * tf.phi(0.0),
        zeros_used: z.len(),
        truncation_bound,
    })
}
