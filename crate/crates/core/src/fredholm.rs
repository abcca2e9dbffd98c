//! Gap probabilities and spacing densities through Fredholm determinants.
//!
//! The operator `K|_s` (kernel restricted to `[0, s]`) is discretized by a
//! Gauss–Legendre Nyström rule. `det(I + T K|_s)` then becomes
//! `∏_i (1 + T λ_i)` over the eigenvalues of the symmetrized matrix
//! `√w_i K(x_i, x_j) √w_j`, and
//!
//! `E(k; s) = (1/k!) ∂_T^k det(I + T K|_s) |_{T = -1}`
//!
//! is read off exactly as the coefficient of `u^k` in `∏_i ((1 - λ_i) + λ_i u)`.
//!
//! Finite-N operators use the same machinery with the Christoffel–Darboux
//! projection kernel acting on `L^2([-1, 1], (1-x)^a (1+x)^b dx)`. Their gap
//! variable `s` is measured in normalized angle `θN/π`, so the interval is
//! `x ∈ [cos(πs/N), 1]`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{HalfOrderBessel, JacobiBasis, KernelSpec, DIAGONAL_SWITCH};
use crate::quadrature::GaussLegendre;

/// Default Nyström order.
pub const DEFAULT_ORDER: usize = 60;
/// Upper integration limit for first-level means.
pub const MEAN_CUTOFF: f64 = 8.0;
/// `E(0; s)` must have decayed below this at the cutoff.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Largest `k` for which `E(k; s)` is offered.
pub const MAX_GAP_COUNT: usize = 6;

/// Nyström discretization of a kernel on `[0, s]`.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub spec: KernelSpec,
    pub s: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

impl DiscretizedOperator {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Eigenvalues of the symmetrized matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Gap probability `E(k; s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub k: usize,
    pub s: f64,
    pub probability: f64,
}

/// Build the symmetrized Nyström matrix for `spec` on `[0, s]`.
pub fn discretize_operator(spec: KernelSpec, s: f64, order: usize) -> Result<DiscretizedOperator> {
    spec.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "interval length must be positive, got {s}"
        )));
    }
    if order < 4 {
        return Err(Error::InvalidParameters(format!(
            "quadrature order must be at least 4, got {order}"
        )));
    }
    let rule = GaussLegendre::on_interval(order, 0.0, s);
    let matrix = match spec {
        KernelSpec::LimitingHard { m } => limiting_matrix(m, &rule)?,
        KernelSpec::FiniteJacobi { n, a, b } => {
            if s > n as f64 {
                return Err(Error::Domain(format!(
                    "finite-N gap length {s} exceeds the angular range N = {n}"
                )));
            }
            finite_matrix(n, a, b, &rule)?
        }
    };
    Ok(DiscretizedOperator {
        spec,
        s,
        nodes: rule.nodes,
        weights: rule.weights,
        matrix,
    })
}

fn limiting_matrix(m: u32, rule: &GaussLegendre) -> Result<DMatrix<f64>> {
    let l = m as i32 - 1; // a = m - 1/2 = l + 1/2
    let n = rule.nodes.len();
    let tables = rule
        .nodes
        .iter()
        .map(|&x| HalfOrderBessel::new(l + 1, PI * x))
        .collect::<Result<Vec<_>>>()?;
    let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut mat = DMatrix::zeros(n, n);
    for i in 0..n {
        let xi = rule.nodes[i];
        let ti = &tables[i];
        let z = PI * xi;
        let diag = 0.5 * PI * z * (ti.at(l).powi(2) - ti.at(l - 1) * ti.at(l + 1));
        mat[(i, i)] = sqrt_w[i] * diag * sqrt_w[i];
        for j in 0..i {
            let xj = rule.nodes[j];
            let tj = &tables[j];
            let k = if (xi - xj).abs() < DIAGONAL_SWITCH {
                crate::kernels::bessel_kernel_diagonal(m as f64 - 0.5, 0.5 * (xi + xj))?
            } else {
                let num = PI * xi * ti.at(l + 1) * tj.at(l) - ti.at(l) * PI * xj * tj.at(l + 1);
                (xi * xj).sqrt() * num / (xi * xi - xj * xj)
            };
            let v = sqrt_w[i] * k * sqrt_w[j];
            mat[(i, j)] = v;
            mat[(j, i)] = v;
        }
    }
    Ok(mat)
}

/// Weight times Jacobian of `t -> x = cos(πt/N)`:
/// `(1-x)^a (1+x)^b |dx/dt| = 2^{a+b+1} sin^{2a+1}(θ/2) cos^{2b+1}(θ/2) π/N`.
fn angular_measure(theta: f64, a: f64, b: f64, n: usize) -> f64 {
    2f64.powf(a + b + 1.0)
        * (0.5 * theta).sin().powf(2.0 * a + 1.0)
        * (0.5 * theta).cos().powf(2.0 * b + 1.0)
        * PI
        / n as f64
}

fn finite_matrix(n: usize, a: f64, b: f64, rule: &GaussLegendre) -> Result<DMatrix<f64>> {
    let basis = JacobiBasis::new(n, a, b)?;
    let order = rule.nodes.len();
    // Rows are √(ω μ) p_k(x_i), k < N. Nodes cluster at the edge in the level
    // variable, where the Christoffel–Darboux quotient cancels badly, so the
    // projection is assembled as Φ Φᵀ.
    let mut phi = DMatrix::zeros(order, n);
    for (i, (&t, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let theta = PI * t / n as f64;
        let scale = (w * angular_measure(theta, a, b, n)).sqrt();
        let p = basis.evaluate(theta.cos());
        for k in 0..n {
            phi[(i, k)] = scale * p[k];
        }
    }
    Ok(&phi * phi.transpose())
}

/// `det(I + T K) = ∏ (1 + T λ_i)`.
pub fn fredholm_det(op: &DiscretizedOperator, t: f64) -> f64 {
    op.eigenvalues().iter().map(|l| 1.0 + t * l).product()
}

/// `E(0; s), ..., E(kmax; s)` from the operator's eigenvalues.
pub fn gap_probabilities_from_eigenvalues(eigenvalues: &[f64], kmax: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; kmax + 1];
    coeffs[0] = 1.0;
    for &lambda in eigenvalues {
        for k in (0..=kmax).rev() {
            let carry = if k > 0 { coeffs[k - 1] * lambda } else { 0.0 };
            coeffs[k] = coeffs[k] * (1.0 - lambda) + carry;
        }
    }
    coeffs
}

/// `E(0; s), ..., E(kmax; s)` for a discretized operator.
pub fn gap_probabilities(op: &DiscretizedOperator, kmax: usize) -> Vec<f64> {
    gap_probabilities_from_eigenvalues(&op.eigenvalues(), kmax)
}

fn check_gap_count(k: usize) -> Result<()> {
    if k > MAX_GAP_COUNT {
        Err(Error::Unsupported(format!(
            "E(k; s) is offered for k <= {MAX_GAP_COUNT}, got k = {k}"
        )))
    } else {
        Ok(())
    }
}

/// `E^(m)(k; s)` for the limiting hard-edge kernel.
pub fn gap_probability(m: u32, k: usize, s: f64, order: usize) -> Result<GapResult> {
    check_gap_count(k)?;
    let op = discretize_operator(KernelSpec::LimitingHard { m }, s, order)?;
    let e = gap_probabilities(&op, k);
    Ok(GapResult {
        k,
        s,
        probability: e[k],
    })
}

/// `Σ_{j<=k} E(j; s)` for any kernel spec.
fn cumulative_gap(spec: KernelSpec, k: usize, s: f64, order: usize) -> Result<f64> {
    if s <= 0.0 {
        return Ok(1.0);
    }
    let op = discretize_operator(spec, s, order)?;
    Ok(gap_probabilities(&op, k).iter().sum())
}

/// `-d/ds Σ_{j<=k} E(j; s)` by a central difference with one Richardson step.
pub fn spacing_density_for(spec: KernelSpec, k: usize, s: f64, order: usize) -> Result<f64> {
    check_gap_count(k)?;
    if !(s > 0.0) {
        return Err(Error::Domain(format!(
            "spacing density needs s > 0, got {s}"
        )));
    }
    let mut h = (1e-3 * s).max(1e-4);
    h = h.min(0.5 * s);
    if let KernelSpec::FiniteJacobi { n, .. } = spec {
        h = h.min(0.5 * (n as f64 - s)).max(1e-7);
    }
    let diff = |h: f64| -> Result<f64> {
        let up = cumulative_gap(spec, k, s + h, order)?;
        let down = cumulative_gap(spec, k, s - h, order)?;
        Ok(-(up - down) / (2.0 * h))
    };
    let coarse = diff(h)?;
    let fine = diff(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `p^(m)(k; s)` for the limiting kernel at the default order.
pub fn spacing_density(m: u32, k: usize, s: f64) -> Result<f64> {
    spacing_density_for(KernelSpec::LimitingHard { m }, k, s, DEFAULT_ORDER)
}

/// A mean computed as `∫_0^{cutoff} E(0; s) ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub cutoff: f64,
    /// `E(0; cutoff)`; the neglected tail is of the same order or smaller.
    pub tail_gap: f64,
    pub evaluations: usize,
}

/// Adaptive trapezoid integration. Each panel's trapezoid pair (one and two
/// intervals) is Richardson-extrapolated; a panel is accepted once the
/// extrapolated value agrees with the sum over its two halves.
fn adaptive_integral<F>(f: &mut F, lo: f64, hi: f64, tol: f64, evals: &mut usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (lo + hi);
    let samples = [
        f(lo)?,
        f(0.5 * (lo + mid))?,
        f(mid)?,
        f(0.5 * (mid + hi))?,
        f(hi)?,
    ];
    *evals += 5;
    refine(f, lo, hi, samples, tol, 0, evals)
}

fn richardson_trapezoid(h: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let coarse = h * 0.5 * (f0 + f2);
    let fine = h * 0.25 * (f0 + 2.0 * f1 + f2);
    (4.0 * fine - coarse) / 3.0
}

fn refine<F>(
    f: &mut F,
    lo: f64,
    hi: f64,
    s: [f64; 5],
    tol: f64,
    depth: usize,
    evals: &mut usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = hi - lo;
    let whole = richardson_trapezoid(h, s[0], s[2], s[4]);
    let left = richardson_trapezoid(0.5 * h, s[0], s[1], s[2]);
    let right = richardson_trapezoid(0.5 * h, s[2], s[3], s[4]);
    let halves = left + right;
    if depth >= 3 && ((halves - whole).abs() <= 15.0 * tol || depth >= 40) {
        return Ok(halves + (halves - whole) / 15.0);
    }
    let mid = 0.5 * (lo + hi);
    let q1 = 0.5 * (lo + mid);
    let q3 = 0.5 * (mid + hi);
    let a = f(0.5 * (lo + q1))?;
    let b = f(0.5 * (q1 + mid))?;
    let c = f(0.5 * (mid + q3))?;
    let d = f(0.5 * (q3 + hi))?;
    *evals += 4;
    let l = refine(
        f,
        lo,
        mid,
        [s[0], a, s[1], b, s[2]],
        0.5 * tol,
        depth + 1,
        evals,
    )?;
    let r = refine(
        f,
        mid,
        hi,
        [s[2], c, s[3], d, s[4]],
        0.5 * tol,
        depth + 1,
        evals,
    )?;
    Ok(l + r)
}

fn mean_for(spec: KernelSpec, cutoff: f64, order: usize, tol: f64) -> Result<MeanEstimate> {
    let mut evals = 0;
    let mut gap = |s: f64| cumulative_gap(spec, 0, s, order);
    let mean = adaptive_integral(&mut gap, 0.0, cutoff, tol, &mut evals)?;
    let tail_gap = cumulative_gap(spec, 0, cutoff, order)?;
    Ok(MeanEstimate {
        mean,
        cutoff,
        tail_gap,
        evaluations: evals,
    })
}

/// Mean of the first scaled level above the hard edge, `∫_0^8 E^(m)(0; s) ds`.
/// Fails if `E^(m)(0; 8)` has not decayed below `1e-10`.
pub fn first_level_mean_with(m: u32, order: usize) -> Result<MeanEstimate> {
    if m > 4 {
        return Err(Error::Unsupported(format!(
            "first-level means are offered for m <= 4, got {m}"
        )));
    }
    let est = mean_for(KernelSpec::LimitingHard { m }, MEAN_CUTOFF, order, 1e-9)?;
    if est.tail_gap.abs() >= TAIL_TOLERANCE {
        return Err(Error::Consistency(format!(
            "E^({m})(0; {MEAN_CUTOFF}) = {:e} has not decayed below {TAIL_TOLERANCE:e}",
            est.tail_gap
        )));
    }
    Ok(est)
}

pub fn first_level_mean(m: u32) -> Result<f64> {
    Ok(first_level_mean_with(m, DEFAULT_ORDER)?.mean)
}

/// The same mean as `∫ s p^(m)(0; s) ds`, for cross-validation.
pub fn first_level_mean_from_density(m: u32, order: usize) -> Result<f64> {
    let spec = KernelSpec::LimitingHard { m };
    let rule = GaussLegendre::on_interval(120, 0.0, MEAN_CUTOFF);
    let mut total = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        total += w * s * spacing_density_for(spec, 0, s, order)?;
    }
    Ok(total)
}

/// `E_N(k; s)` for the rank-`n` Christoffel–Darboux kernel of
/// `(1-x)^a (1+x)^b`, with `s` in normalized angle (`0 < s <= n`).
pub fn finite_n_gap(n: usize, a: f64, b: f64, k: usize, s: f64) -> Result<f64> {
    check_gap_count(k)?;
    let op = discretize_operator(KernelSpec::FiniteJacobi { n, a, b }, s, DEFAULT_ORDER)?;
    Ok(gap_probabilities(&op, k)[k])
}

/// Mean of the first normalized angle `θ_1 n/π` at finite `n`.
pub fn finite_n_mean(n: usize, a: f64, b: f64) -> Result<MeanEstimate> {
    finite_n_mean_with(n, a, b, DEFAULT_ORDER)
}

pub fn finite_n_mean_with(n: usize, a: f64, b: f64, order: usize) -> Result<MeanEstimate> {
    let spec = KernelSpec::FiniteJacobi { n, a, b };
    spec.validate()?;
    let cutoff = MEAN_CUTOFF.min(n as f64);
    let est = mean_for(spec, cutoff, order, 1e-10)?;
    if cutoff < n as f64 && est.tail_gap.abs() >= TAIL_TOLERANCE {
        return Err(Error::Consistency(format!(
            "finite-N gap E(0; {cutoff}) = {:e} has not decayed below {TAIL_TOLERANCE:e}",
            est.tail_gap
        )));
    }
    Ok(est)
}
