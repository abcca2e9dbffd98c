//! Batch driver for first-angle statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::interaction::{InteractionChain, McmcConfig};
use super::{derive_seed, haar_sample_so, sample_independent_model, scale_angles};
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::stats::{descriptive, SampleSummary};

/// Which ensemble to sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum EnsembleSpec {
    /// Haar measure on `SO(size)`.
    Haar { size: usize },
    /// `diag(I_{2 forced}, SO(2 pairs - 2 forced))`.
    Independent { pairs: usize, forced: usize },
    /// `pairs` free levels with hardness `m` (the group has `2 pairs + m`
    /// dimensions).
    Interaction {
        pairs: usize,
        m: u32,
        burn_in: u64,
        thinning: u64,
        proposal_width: f64,
    },
}

impl EnsembleSpec {
    /// Interaction Model with the default chain settings.
    pub fn interaction(pairs: usize, m: u32) -> Self {
        let d = McmcConfig::for_pairs(pairs, 0);
        Self::Interaction {
            pairs,
            m,
            burn_in: d.burn_in,
            thinning: d.thinning,
            proposal_width: d.proposal_width,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Haar { size } if size < 2 => Err(Error::InvalidDimension(size)),
            Self::Independent { pairs, forced } if forced >= pairs => {
                Err(Error::InvalidParameters(format!(
                    "independent model needs pairs > forced (got {pairs}, {forced})"
                )))
            }
            Self::Interaction {
                pairs,
                thinning,
                proposal_width,
                burn_in,
                ..
            } => {
                if pairs < 1 {
                    return Err(Error::InvalidParameters("pairs must be at least 1".into()));
                }
                McmcConfig {
                    burn_in,
                    thinning,
                    proposal_width,
                    seed: 0,
                }
                .validate()
            }
            _ => Ok(()),
        }
    }

    /// Dimension of the ambient orthogonal group.
    pub fn group_dimension(&self) -> usize {
        match *self {
            Self::Haar { size } => size,
            Self::Independent { pairs, .. } => 2 * pairs,
            Self::Interaction { pairs, m, .. } => 2 * pairs + m as usize,
        }
    }

    /// Number of eigenvalue pairs `N` of the ambient group.
    pub fn group_pairs(&self) -> usize {
        self.group_dimension() / 2
    }

    /// Eigenvalues pinned at `+1` by construction (the lone `+1` of odd
    /// Haar dimension is not counted).
    pub fn forced_multiplicity(&self) -> usize {
        match *self {
            Self::Haar { .. } => 0,
            Self::Independent { forced, .. } => 2 * forced,
            Self::Interaction { m, .. } => m as usize,
        }
    }
}

/// How raw angles are rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleScale {
    /// `θ N / π` with `N` the number of eigenvalue pairs.
    #[default]
    Pairs,
    /// `θ n / (2π)` with `n` the matrix dimension; differs from `Pairs`
    /// only in odd dimension.
    HalfDimension,
}

impl AngleScale {
    pub fn factor(&self, spec: &EnsembleSpec) -> f64 {
        match self {
            Self::Pairs => spec.group_pairs() as f64,
            Self::HalfDimension => 0.5 * spec.group_dimension() as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub spec: EnsembleSpec,
    pub samples: usize,
    pub seed: u64,
    pub scale: AngleScale,
    pub bins: usize,
    pub hist_lo: f64,
    pub hist_hi: f64,
    /// Draws per independent chain for the Interaction Model.
    pub chain_length: usize,
}

impl SimulationConfig {
    pub fn new(spec: EnsembleSpec, samples: usize, seed: u64) -> Self {
        Self {
            spec,
            samples,
            seed,
            scale: AngleScale::Pairs,
            bins: 60,
            hist_lo: 0.0,
            hist_hi: 3.0,
            chain_length: 1000,
        }
    }
}

/// Summary of the first normalized angle above zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstAngleStats {
    pub mean: f64,
    pub median: f64,
    pub stdev: f64,
    pub n: usize,
    /// Standard error of the mean; batch means over chains for the
    /// Interaction Model.
    pub standard_error: f64,
    pub seed: u64,
    pub spec: EnsembleSpec,
    pub scale: AngleScale,
    pub forced_multiplicity: usize,
    #[serde(skip)]
    pub histogram: Option<Histogram>,
    #[serde(skip)]
    pub values: Vec<f64>,
}

impl FirstAngleStats {
    pub fn summary(&self) -> Result<SampleSummary> {
        descriptive(&self.values)
    }
}

fn first_positive(angles: &[f64]) -> Result<f64> {
    angles
        .iter()
        .copied()
        .find(|&t| t > 0.0)
        .ok_or_else(|| Error::Consistency("sample has no angle above zero".into()))
}

/// Sample the ensemble `samples` times and summarize the first normalized
/// angle above zero.
///
/// Sample `i` (or chain `i` for the Interaction Model) is seeded with
/// `derive_seed(seed, i)` and results are gathered in index order, so the
/// output does not depend on the number of worker threads.
pub fn simulate_first_angle_stats(config: &SimulationConfig) -> Result<FirstAngleStats> {
    let spec = config.spec;
    spec.validate()?;
    if config.samples < 1 {
        return Err(Error::InvalidParameters(
            "samples must be at least 1".into(),
        ));
    }
    let factor = config.scale.factor(&spec);
    let seed = config.seed;
    let (raw, groups): (Vec<f64>, Vec<(usize, usize)>) = match spec {
        EnsembleSpec::Haar { size } => {
            let v = (0..config.samples)
                .into_par_iter()
                .map(|i| first_positive(&haar_sample_so(size, derive_seed(seed, i as u64))?.angles))
                .collect::<Result<Vec<f64>>>()?;
            (v, Vec::new())
        }
        EnsembleSpec::Independent { pairs, forced } => {
            let v = (0..config.samples)
                .into_par_iter()
                .map(|i| {
                    let s = sample_independent_model(pairs, forced, derive_seed(seed, i as u64))?;
                    first_positive(&s.angles)
                })
                .collect::<Result<Vec<f64>>>()?;
            (v, Vec::new())
        }
        EnsembleSpec::Interaction {
            pairs,
            m,
            burn_in,
            thinning,
            proposal_width,
        } => {
            let len = config.chain_length.max(1);
            let chains = config.samples.div_ceil(len);
            let per_chain = (0..chains)
                .into_par_iter()
                .map(|c| {
                    let draws = len.min(config.samples - c * len);
                    let mcmc = McmcConfig {
                        burn_in,
                        thinning,
                        proposal_width,
                        seed: derive_seed(seed, c as u64),
                    };
                    let mut chain = InteractionChain::new(pairs, m, mcmc)?;
                    (0..draws)
                        .map(|_| first_positive(&chain.draw().angles()))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let mut spans = Vec::with_capacity(chains);
            let mut flat = Vec::with_capacity(config.samples);
            for v in per_chain {
                spans.push((flat.len(), v.len()));
                flat.extend(v);
            }
            (flat, spans)
        }
    };
    let values = scale_angles(&raw, factor);
    let summary = descriptive(&values)?;
    let standard_error = if groups.len() >= 2 {
        batch_means_error(&values, &groups, summary.mean)
    } else if groups.is_empty() && summary.n >= 2 {
        summary.stdev / (summary.n as f64).sqrt()
    } else {
        f64::NAN
    };
    let histogram = Histogram::from_values(config.hist_lo, config.hist_hi, config.bins, &values)?;
    Ok(FirstAngleStats {
        mean: summary.mean,
        median: summary.median,
        stdev: summary.stdev,
        n: summary.n,
        standard_error,
        seed,
        spec,
        scale: config.scale,
        forced_multiplicity: spec.forced_multiplicity(),
        histogram: Some(histogram),
        values,
    })
}

/// `sqrt(Σ n_b (m_b - m)² / ((B - 1) n))` over batches `b`.
fn batch_means_error(values: &[f64], spans: &[(usize, usize)], mean: f64) -> f64 {
    let total: usize = spans.iter().map(|s| s.1).sum();
    let ss: f64 = spans
        .iter()
        .map(|&(start, len)| {
            let mb = values[start..start + len].iter().sum::<f64>() / len as f64;
            len as f64 * (mb - mean).powi(2)
        })
        .sum();
    (ss / ((spans.len() - 1) as f64 * total as f64)).sqrt()
}
