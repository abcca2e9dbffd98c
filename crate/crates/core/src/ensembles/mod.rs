//! Haar orthogonal matrices and the two sub-ensembles with forced
//! eigenvalues at `+1`.
//!
//! A matrix in `SO(2N)` or `SO(2N+1)` has eigenvalues `e^{±iθ_j}`,
//! `θ_j ∈ [0, π]` (plus a forced `+1` in odd dimension). Angles are reported
//! one per pair, ascending. Levels are `x_j = cos θ_j`.

mod batch;
mod interaction;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use batch::{
    simulate_first_angle_stats, AngleScale, EnsembleSpec, FirstAngleStats, SimulationConfig,
};
pub use interaction::{
    interaction_expectation, sample_interaction_levels, InteractionChain, McmcConfig,
};

/// Tolerance for orthogonality and determinant checks on sampled matrices.
pub const GROUP_TOLERANCE: f64 = 1e-10;
/// Tolerance accepted by [`eigenangles`] on caller-provided matrices.
pub const INPUT_TOLERANCE: f64 = 1e-8;

/// Deterministic per-stream seed, `hash(seed, k)` (splitmix64 finalizer).
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(k.wrapping_add(0x632B_E59B_D9B4_E019)))
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A special orthogonal matrix and its eigenangles.
#[derive(Debug, Clone)]
pub struct OrthogonalSample {
    pub size: usize,
    pub entries: DMatrix<f64>,
    /// `⌊size/2⌋` angles in `[0, π]`, ascending.
    pub angles: Vec<f64>,
}

/// Levels `x_j = cos θ_j` of an ensemble with hardness `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelVector {
    pub levels: Vec<f64>,
    pub hardness: u32,
    pub pairs: usize,
}

impl LevelVector {
    pub fn new(mut levels: Vec<f64>, hardness: u32) -> Result<Self> {
        if levels.iter().any(|x| !(-1.0..=1.0).contains(x)) {
            return Err(Error::Validation("levels must lie in [-1, 1]".into()));
        }
        levels.sort_by(f64::total_cmp);
        let pairs = levels.len();
        Ok(Self {
            levels,
            hardness,
            pairs,
        })
    }

    /// `θ_j = arccos x_j`, ascending.
    pub fn angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self
            .levels
            .iter()
            .map(|x| x.clamp(-1.0, 1.0).acos())
            .collect();
        a.sort_by(f64::total_cmp);
        a
    }

    /// Pair count of the source group, `pairs + ⌊m/2⌋`.
    pub fn group_pairs(&self) -> usize {
        self.pairs + (self.hardness / 2) as usize
    }
}

/// Draw from Haar measure on `SO(n)`.
///
/// A standard Gaussian matrix is QR-factored; multiplying the columns of `Q`
/// by the signs of `R`'s diagonal gives Haar measure on `O(n)`, and negating
/// the first column on the `det = -1` coset maps it onto `SO(n)`.
pub fn haar_sample_so(n: usize, seed: u64) -> Result<OrthogonalSample> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let mut rng = rng_for(seed);
    let gaussian = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    let angles = eigenangles_unchecked(&q)?;
    Ok(OrthogonalSample {
        size: n,
        entries: q,
        angles,
    })
}

/// Largest entrywise deviation of `M Mᵀ` from the identity.
pub fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let prod = m * m.transpose();
    (prod - DMatrix::<f64>::identity(n, n)).amax()
}

/// Eigenangles `θ_j ∈ [0, π]` of a special orthogonal matrix, one per
/// conjugate pair, ascending; the forced `+1` of odd dimension is dropped.
pub fn eigenangles(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = matrix.nrows();
    if n != matrix.ncols() || n < 2 {
        return Err(Error::Validation(format!(
            "expected a square matrix of size >= 2, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let defect = orthogonality_defect(matrix);
    if defect > INPUT_TOLERANCE {
        return Err(Error::Validation(format!(
            "matrix is not orthogonal: max |MMᵀ - I| = {defect:e}"
        )));
    }
    let det = matrix.determinant();
    if (det - 1.0).abs() > INPUT_TOLERANCE {
        return Err(Error::Validation(format!(
            "matrix is not special orthogonal: det = {det}"
        )));
    }
    eigenangles_unchecked(matrix)
}

fn eigenangles_unchecked(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = matrix.nrows();
    // cos θ_j with multiplicity two, plus a lone +1 in odd dimension
    let sym = (matrix + matrix.transpose()) * 0.5;
    let mut cosines: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    cosines.sort_by(f64::total_cmp);
    if n % 2 == 1 {
        let (idx, closest) = cosines
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c - 1.0).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty spectrum");
        if closest > 1e-6 {
            return Err(Error::Consistency(format!(
                "odd-dimensional matrix has no eigenvalue near +1 (closest at distance {closest:e})"
            )));
        }
        cosines.remove(idx);
    }
    let mut angles: Vec<f64> = cosines
        .chunks_exact(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).clamp(-1.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// `θ_j N / π`, order preserved.
pub fn normalize_eigenangles(angles: &[f64], pairs: usize) -> Vec<f64> {
    scale_angles(angles, pairs as f64)
}

pub(crate) fn scale_angles(angles: &[f64], scale: f64) -> Vec<f64> {
    angles
        .iter()
        .map(|t| t * scale / std::f64::consts::PI)
        .collect()
}

/// A draw from a sub-ensemble with eigenvalues forced at `+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSample {
    /// Dimension of the ambient group (`2N` for the independent model,
    /// `2 pairs + m` for the interaction model).
    pub group_dimension: usize,
    /// Number of eigenvalues pinned at `+1`.
    pub forced: usize,
    /// Free eigenangles, one per pair, ascending.
    pub angles: Vec<f64>,
}

impl ModelSample {
    /// Pair count `N` of the ambient group.
    pub fn group_pairs(&self) -> usize {
        self.group_dimension / 2
    }

    /// The free angles preceded by one zero per forced eigenvalue.
    pub fn with_forced_angles(&self) -> Vec<f64> {
        let mut all = vec![0.0; self.forced];
        all.extend_from_slice(&self.angles);
        all
    }

    /// First free angle strictly above zero.
    pub fn first_free_angle(&self) -> Option<f64> {
        self.angles.iter().copied().find(|&t| t > 0.0)
    }
}

/// The independent model: `diag(I_{2r}, g)` with `g` Haar on `SO(2N - 2r)`.
/// The free angles are exactly those of `haar_sample_so(2N - 2r, seed)`.
pub fn sample_independent_model(n: usize, r: usize, seed: u64) -> Result<ModelSample> {
    if r >= n {
        return Err(Error::InvalidParameters(format!(
            "independent model needs N > r (got N = {n}, r = {r})"
        )));
    }
    let block = haar_sample_so(2 * (n - r), seed)?;
    Ok(ModelSample {
        group_dimension: 2 * n,
        forced: 2 * r,
        angles: block.angles,
    })
}

/// The full `2N × 2N` independent-model matrix for the same seed.
pub fn independent_model_matrix(n: usize, r: usize, seed: u64) -> Result<DMatrix<f64>> {
    if r >= n {
        return Err(Error::InvalidParameters(format!(
            "independent model needs N > r (got N = {n}, r = {r})"
        )));
    }
    let block = haar_sample_so(2 * (n - r), seed)?;
    let mut full = DMatrix::<f64>::identity(2 * n, 2 * n);
    full.view_mut((2 * r, 2 * r), (2 * (n - r), 2 * (n - r)))
        .copy_from(&block.entries);
    Ok(full)
}
