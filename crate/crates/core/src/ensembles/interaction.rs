//! Metropolis–Hastings sampler for the Interaction Model levels.
//!
//! The target density on `x ∈ [-1, 1]^pairs` is
//! `∏_{j<k} (x_k - x_j)² ∏_j (1 - x_j)^{m - 1/2} (1 + x_j)^{-1/2}`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{rng_for, LevelVector};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    /// Single-coordinate updates discarded before the first draw.
    pub burn_in: u64,
    /// Single-coordinate updates between successive draws.
    pub thinning: u64,
    pub proposal_width: f64,
    pub seed: u64,
}

impl McmcConfig {
    /// `burn_in = 10⁴·pairs`, `thinning = 10·pairs`, width `0.1`.
    pub fn for_pairs(pairs: usize, seed: u64) -> Self {
        let p = pairs.max(1) as u64;
        Self {
            burn_in: 10_000 * p,
            thinning: 10 * p,
            proposal_width: 0.1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thinning < 1 {
            return Err(Error::InvalidParameters(
                "thinning must be at least 1".into(),
            ));
        }
        if !(self.proposal_width > 0.0 && self.proposal_width.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "proposal width must be positive, got {}",
                self.proposal_width
            )));
        }
        Ok(())
    }
}

fn log_weight(x: f64, m: u32) -> f64 {
    (m as f64 - 0.5) * (1.0 - x).ln() - 0.5 * (1.0 + x).ln()
}

fn log_density(levels: &[f64], m: u32) -> f64 {
    let mut total = 0.0;
    for (j, &xj) in levels.iter().enumerate() {
        total += log_weight(xj, m);
        for &xk in &levels[j + 1..] {
            total += 2.0 * (xk - xj).abs().ln();
        }
    }
    total
}

/// Reflect into `[-1, 1]`.
fn reflect(mut y: f64) -> f64 {
    loop {
        if y > 1.0 {
            y = 2.0 - y;
        } else if y < -1.0 {
            y = -2.0 - y;
        } else {
            return y;
        }
    }
}

/// A running chain; successive [`InteractionChain::draw`] calls are
/// `thinning` updates apart.
#[derive(Debug, Clone)]
pub struct InteractionChain {
    state: Vec<f64>,
    hardness: u32,
    config: McmcConfig,
    rng: ChaCha8Rng,
    cursor: usize,
    proposed: u64,
    accepted: u64,
}

impl InteractionChain {
    /// Start from equispaced interior points and run the burn-in.
    pub fn new(pairs: usize, m: u32, config: McmcConfig) -> Result<Self> {
        if pairs < 1 {
            return Err(Error::InvalidParameters("pairs must be at least 1".into()));
        }
        config.validate()?;
        let state: Vec<f64> = (1..=pairs)
            .map(|k| -1.0 + 2.0 * k as f64 / (pairs + 1) as f64)
            .collect();
        let start = log_density(&state, m);
        if !start.is_finite() {
            return Err(Error::Initialization(format!(
                "log-density {start} at the equispaced start"
            )));
        }
        let mut chain = Self {
            state,
            hardness: m,
            config,
            rng: rng_for(config.seed),
            cursor: 0,
            proposed: 0,
            accepted: 0,
        };
        chain.advance(config.burn_in);
        Ok(chain)
    }

    fn delta(&self, idx: usize, y: f64) -> f64 {
        let m = self.hardness;
        let x = self.state[idx];
        let mut d = log_weight(y, m) - log_weight(x, m);
        for (k, &xk) in self.state.iter().enumerate() {
            if k != idx {
                d += 2.0 * ((y - xk).abs().ln() - (x - xk).abs().ln());
            }
        }
        d
    }

    fn advance(&mut self, steps: u64) {
        let n = self.state.len();
        for _ in 0..steps {
            let idx = self.cursor;
            self.cursor = (self.cursor + 1) % n;
            let z: f64 = StandardNormal.sample(&mut self.rng);
            let y = reflect(self.state[idx] + self.config.proposal_width * z);
            let u: f64 = self.rng.random();
            self.proposed += 1;
            if y.abs() >= 1.0 {
                continue;
            }
            let d = self.delta(idx, y);
            if d.is_finite() && (d >= 0.0 || u.ln() < d) {
                self.state[idx] = y;
                self.accepted += 1;
            }
        }
    }

    /// Advance by `thinning` updates and return the sorted levels.
    pub fn draw(&mut self) -> LevelVector {
        self.advance(self.config.thinning);
        let mut levels = self.state.clone();
        levels.sort_by(f64::total_cmp);
        LevelVector {
            pairs: levels.len(),
            levels,
            hardness: self.hardness,
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

/// One draw after burn-in.
pub fn sample_interaction_levels(pairs: usize, m: u32, config: McmcConfig) -> Result<LevelVector> {
    Ok(InteractionChain::new(pairs, m, config)?.draw())
}

/// `E[f(levels)]` under the Interaction Model density for `pairs ≤ 2`, by
/// Gauss–Legendre quadrature in the angle variables.
///
/// With `x = cos θ` the density becomes
/// `∏ (cos θ_k - cos θ_j)² ∏ sin^{2m}(θ_j / 2)`, smooth on `[0, π]`.
/// `f` receives levels in ascending order.
pub fn interaction_expectation<F>(pairs: usize, m: u32, order: usize, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let pi = std::f64::consts::PI;
    let w = |t: f64| (0.5 * t).sin().powi(2 * m as i32);
    match pairs {
        1 => {
            let rule = GaussLegendre::on_interval(order, 0.0, pi);
            let z = rule.integrate(w);
            Ok(rule.integrate(|t| w(t) * f(&[t.cos()])) / z)
        }
        2 => {
            // θ1 < θ2 so that cos θ1 > cos θ2
            let outer = GaussLegendre::on_interval(order, 0.0, pi);
            let mut z = 0.0;
            let mut num = 0.0;
            for (&t1, &w1) in outer.nodes.iter().zip(&outer.weights) {
                let inner = GaussLegendre::on_interval(order, t1, pi);
                for (&t2, &w2) in inner.nodes.iter().zip(&inner.weights) {
                    let (x1, x2) = (t1.cos(), t2.cos());
                    let d = w1 * w2 * (x1 - x2).powi(2) * w(t1) * w(t2);
                    z += d;
                    num += d * f(&[x2, x1]);
                }
            }
            Ok(num / z)
        }
        _ => Err(Error::Unsupported(format!(
            "quadrature expectation implemented for pairs <= 2, got {pairs}"
        ))),
    }
}
