//! Descriptive summaries, two-sample t-procedures, the sign test, and a few
//! goodness-of-fit helpers used to validate the samplers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (denominator `n - 1`); zero when `n = 1`.
    pub stdev: f64,
    pub min: f64,
    pub max: f64,
    /// Set when `n = 1` and the standard deviation is undefined.
    pub degenerate: bool,
}

/// Mean, median and sample standard deviation.
///
/// Sums run over the sorted data so the result does not depend on input
/// order, bit for bit.
pub fn descriptive(data: &[f64]) -> Result<SampleSummary> {
    if data.is_empty() {
        return Err(Error::EmptyInput(
            "descriptive statistics of no data".into(),
        ));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("data must be finite".into()));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let stdev = if n > 1 {
        let ss: f64 = sorted.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(SampleSummary {
        n,
        mean,
        median,
        stdev,
        min: sorted[0],
        max: sorted[n - 1],
        degenerate: n == 1,
    })
}

/// `(n, mean, sd)` of one group, as tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

impl GroupSummary {
    pub fn new(n: usize, mean: f64, sd: f64) -> Self {
        Self { n, mean, sd }
    }

    pub fn from_data(data: &[f64]) -> Result<Self> {
        let s = descriptive(data)?;
        Ok(Self::new(s.n, s.mean, s.stdev))
    }
}

impl From<SampleSummary> for GroupSummary {
    fn from(s: SampleSummary) -> Self {
        Self::new(s.n, s.mean, s.stdev)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    PooledT,
    UnpooledT,
    Sign,
    Z,
    ChiSquare,
    KolmogorovSmirnov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    #[default]
    TwoSided,
    /// `P(T ≤ t)`.
    Lower,
    /// `P(T ≥ t)`.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub df: f64,
    pub p_value: f64,
    pub kind: TestKind,
}

fn t_tail(t: f64, df: f64, tail: Tail) -> Result<f64> {
    let dist = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| Error::InvalidParameters(format!("t distribution with df = {df}: {e}")))?;
    let p = match tail {
        Tail::TwoSided => 2.0 * dist.sf(t.abs()),
        Tail::Lower => dist.cdf(t),
        Tail::Upper => dist.sf(t),
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Tail probability of a Student t statistic.
pub fn t_p_value(t: f64, df: f64, tail: Tail) -> Result<f64> {
    t_tail(t, df, tail)
}

fn check_sizes(a: &GroupSummary, b: &GroupSummary) -> Result<()> {
    if a.n < 2 || b.n < 2 {
        return Err(Error::InvalidParameters(format!(
            "two-sample t needs at least two observations per group (got {} and {})",
            a.n, b.n
        )));
    }
    if [a.mean, a.sd, b.mean, b.sd].iter().any(|v| !v.is_finite()) || a.sd < 0.0 || b.sd < 0.0 {
        return Err(Error::Domain(
            "group summaries must be finite with sd >= 0".into(),
        ));
    }
    Ok(())
}

/// Pooled two-sample t from group summaries, `df = n₁ + n₂ - 2`.
pub fn pooled_t_summary(a: GroupSummary, b: GroupSummary, tail: Tail) -> Result<TestResult> {
    check_sizes(&a, &b)?;
    let (n1, n2) = (a.n as f64, b.n as f64);
    let df = n1 + n2 - 2.0;
    let sp2 = ((n1 - 1.0) * a.sd * a.sd + (n2 - 1.0) * b.sd * b.sd) / df;
    if sp2 <= 0.0 {
        return Err(Error::DegenerateVariance("pooled variance is zero".into()));
    }
    let t = (a.mean - b.mean) / (sp2.sqrt() * (1.0 / n1 + 1.0 / n2).sqrt());
    Ok(TestResult {
        statistic: t,
        df,
        p_value: t_tail(t, df, tail)?,
        kind: TestKind::PooledT,
    })
}

/// Unpooled (Welch) two-sample t from group summaries with
/// `df = (n₁-1)(n₂-1)(n₂s₁² + n₁s₂²)² / ((n₂-1)n₂²s₁⁴ + (n₁-1)n₁²s₂⁴)`.
pub fn unpooled_t_summary(a: GroupSummary, b: GroupSummary, tail: Tail) -> Result<TestResult> {
    check_sizes(&a, &b)?;
    let (n1, n2) = (a.n as f64, b.n as f64);
    let (v1, v2) = (a.sd * a.sd, b.sd * b.sd);
    if v1 + v2 <= 0.0 {
        return Err(Error::DegenerateVariance(
            "both group variances are zero".into(),
        ));
    }
    let t = (a.mean - b.mean) / (v1 / n1 + v2 / n2).sqrt();
    let df = (n1 - 1.0) * (n2 - 1.0) * (n2 * v1 + n1 * v2).powi(2)
        / ((n2 - 1.0) * n2 * n2 * v1 * v1 + (n1 - 1.0) * n1 * n1 * v2 * v2);
    Ok(TestResult {
        statistic: t,
        df,
        p_value: t_tail(t, df, tail)?,
        kind: TestKind::UnpooledT,
    })
}

pub fn pooled_t(x1: &[f64], x2: &[f64]) -> Result<TestResult> {
    pooled_t_summary(
        GroupSummary::from_data(x1)?,
        GroupSummary::from_data(x2)?,
        Tail::TwoSided,
    )
}

pub fn unpooled_t(x1: &[f64], x2: &[f64]) -> Result<TestResult> {
    unpooled_t_summary(
        GroupSummary::from_data(x1)?,
        GroupSummary::from_data(x2)?,
        Tail::TwoSided,
    )
}

/// `P(X ≤ n_minus)` for `X ~ Binomial(n, 1/2)`, summed exactly.
pub fn sign_test(n_minus: u64, n: u64) -> Result<TestResult> {
    if n_minus > n {
        return Err(Error::InvalidParameters(format!(
            "sign test needs n_minus <= n (got {n_minus} > {n})"
        )));
    }
    let mut term = BigUint::one();
    let mut total = BigUint::zero();
    for k in 0..=n_minus {
        if k > 0 {
            term = term * BigUint::from(n - k + 1) / BigUint::from(k);
        }
        total += &term;
    }
    let p = ratio_pow2(&total, n);
    Ok(TestResult {
        statistic: n_minus as f64,
        df: n as f64,
        p_value: p.clamp(0.0, 1.0),
        kind: TestKind::Sign,
    })
}

/// `num / 2^exp` as `f64` without overflowing the intermediate.
fn ratio_pow2(num: &BigUint, exp: u64) -> f64 {
    let bits = num.bits();
    let shift = bits.saturating_sub(64);
    let top = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let e = shift as i64 - exp as i64;
    top * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Two-sided normal tail `2(1 - Φ(|z|)) = erfc(|z|/√2)`.
pub fn normal_tail(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// A z-test result from a statistic.
pub fn z_test(z: f64) -> TestResult {
    TestResult {
        statistic: z,
        df: f64::INFINITY,
        p_value: normal_tail(z),
        kind: TestKind::Z,
    }
}

/// `(z₂ - z₁, z₃ - z₂, z₃ - z₁)` of the first three zeros scaled by `scale`.
pub fn spacing_differences(zeros: &[f64], scale: f64) -> Result<[f64; 3]> {
    if zeros.len() < 3 {
        return Err(Error::InvalidParameters(format!(
            "spacing differences need three zeros, got {}",
            zeros.len()
        )));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let z: Vec<f64> = zeros[..3].iter().map(|g| g * scale).collect();
    if !(z[0] < z[1] && z[1] < z[2]) {
        return Err(Error::Validation(
            "zeros must be strictly increasing".into(),
        ));
    }
    Ok([z[1] - z[0], z[2] - z[1], z[2] - z[0]])
}

/// Pearson chi-square of observed counts against bin probabilities.
/// Bins with expected count below 5 should be merged by the caller.
pub fn chi_square_test(observed: &[u64], probabilities: &[f64]) -> Result<TestResult> {
    if observed.len() != probabilities.len() || observed.len() < 2 {
        return Err(Error::InvalidParameters(
            "chi-square needs matching bin counts and at least two bins".into(),
        ));
    }
    let total: u64 = observed.iter().sum();
    let mass: f64 = probabilities.iter().sum();
    if total == 0 || mass <= 0.0 {
        return Err(Error::EmptyInput("chi-square with no observations".into()));
    }
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probabilities) {
        let e = total as f64 * p / mass;
        if e <= 0.0 {
            return Err(Error::Domain("bin with zero expected count".into()));
        }
        stat += (o as f64 - e).powi(2) / e;
    }
    let df = (observed.len() - 1) as f64;
    let dist = ChiSquared::new(df)
        .map_err(|e| Error::InvalidParameters(format!("chi-square df = {df}: {e}")))?;
    Ok(TestResult {
        statistic: stat,
        df,
        p_value: dist.sf(stat).clamp(0.0, 1.0),
        kind: TestKind::ChiSquare,
    })
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF, with the
/// asymptotic Kolmogorov tail.
pub fn ks_test<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> Result<TestResult> {
    if data.is_empty() {
        return Err(Error::EmptyInput("KS test of no data".into()));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    Ok(TestResult {
        statistic: d,
        df: n,
        p_value: kolmogorov_tail(lambda),
        kind: TestKind::KolmogorovSmirnov,
    })
}

fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = 2.0 * (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}
