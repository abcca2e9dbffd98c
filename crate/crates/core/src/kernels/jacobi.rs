//! Orthonormal Jacobi polynomials and their Christoffel–Darboux kernel.
//!
//! The polynomials `p_0, p_1, ...` are orthonormal in
//! `L^2([-1, 1], (1-x)^a (1+x)^b dx)` and satisfy
//! `x p_n = α_{n+1} p_{n+1} + β_n p_n + α_n p_{n-1}`.
//! The projection kernel onto degree `< N` is
//!
//! `K_N(x, y) = Σ_{k<N} p_k(x) p_k(y) = α_N [p_N(x) p_{N-1}(y) - p_{N-1}(x) p_N(y)] / (x - y)`.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Below this separation the Christoffel–Darboux quotient loses digits and
/// the kernel is summed directly.
const NEAR_DIAGONAL: f64 = 1e-6;

/// `(1-x)^a (1+x)^b` on the open interval.
pub fn jacobi_weight(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(format!(
            "Jacobi weight is defined on (-1, 1), got x = {x}"
        )));
    }
    Ok((1.0 - x).powf(a) * (1.0 + x).powf(b))
}

/// `∫_{-1}^{1} (1-x)^a (1+x)^b dx`, through log-gamma.
pub fn jacobi_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
    .exp()
}

/// Recurrence data for the first `n + 1` orthonormal Jacobi polynomials.
#[derive(Debug, Clone)]
pub struct JacobiBasis {
    n: usize,
    a: f64,
    b: f64,
    p0: f64,
    /// `β_0 .. β_n`
    diag: Vec<f64>,
    /// `α_1 .. α_n` stored at indices `1..=n`; index 0 unused.
    off: Vec<f64>,
}

impl JacobiBasis {
    /// Basis for the projection onto polynomials of degree `< n`.
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameters(
                "the projection rank N must be at least 1".into(),
            ));
        }
        if !(a > -1.0 && b > -1.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "Jacobi parameters need a, b > -1, got a = {a}, b = {b}"
            )));
        }
        let mut diag = Vec::with_capacity(n + 1);
        let mut off = vec![0.0; n + 1];
        for k in 0..=n {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            let beta = if k == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            };
            diag.push(beta);
            if k >= 1 {
                let gamma = if k == 1 {
                    4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
                } else {
                    4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
                };
                off[k] = gamma.sqrt();
            }
        }
        Ok(Self {
            n,
            a,
            b,
            p0: 1.0 / jacobi_mass(a, b).sqrt(),
            diag,
            off,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn parameters(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn weight(&self, x: f64) -> Result<f64> {
        jacobi_weight(x, self.a, self.b)
    }

    /// `p_0(x), ..., p_N(x)`.
    pub fn evaluate(&self, x: f64) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.n + 1);
        p.push(self.p0);
        let mut prev = 0.0;
        let mut cur = self.p0;
        for k in 0..self.n {
            let next = ((x - self.diag[k]) * cur - self.off[k] * prev) / self.off[k + 1];
            prev = cur;
            cur = next;
            p.push(cur);
        }
        p
    }

    /// Values and derivatives of `p_0 .. p_N`.
    pub fn evaluate_with_derivatives(&self, x: f64) -> (Vec<f64>, Vec<f64>) {
        let mut p = Vec::with_capacity(self.n + 1);
        let mut dp = Vec::with_capacity(self.n + 1);
        p.push(self.p0);
        dp.push(0.0);
        for k in 0..self.n {
            let (pm, dpm) = if k == 0 {
                (0.0, 0.0)
            } else {
                (p[k - 1], dp[k - 1])
            };
            let next = ((x - self.diag[k]) * p[k] - self.off[k] * pm) / self.off[k + 1];
            let dnext = ((x - self.diag[k]) * dp[k] + p[k] - self.off[k] * dpm) / self.off[k + 1];
            p.push(next);
            dp.push(dnext);
        }
        (p, dp)
    }

    /// `α_N`, the coefficient in the Christoffel–Darboux identity.
    pub fn cd_coefficient(&self) -> f64 {
        self.off[self.n]
    }

    /// `K_N(x, y)`.
    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        if (x - y).abs() < NEAR_DIAGONAL {
            if x == y {
                return self.diagonal(x);
            }
            let px = self.evaluate(x);
            let py = self.evaluate(y);
            return px[..self.n]
                .iter()
                .zip(&py[..self.n])
                .map(|(u, v)| u * v)
                .sum();
        }
        let px = self.evaluate(x);
        let py = self.evaluate(y);
        self.cd_quotient(
            x,
            y,
            (px[self.n], px[self.n - 1]),
            (py[self.n], py[self.n - 1]),
        )
    }

    /// Confluent Christoffel–Darboux form `α_N [p_N' p_{N-1} - p_{N-1}' p_N](x)`.
    pub fn diagonal(&self, x: f64) -> f64 {
        let (p, dp) = self.evaluate_with_derivatives(x);
        let n = self.n;
        self.cd_coefficient() * (dp[n] * p[n - 1] - dp[n - 1] * p[n])
    }

    pub(crate) fn cd_quotient(&self, x: f64, y: f64, px: (f64, f64), py: (f64, f64)) -> f64 {
        self.cd_coefficient() * (px.0 * py.1 - px.1 * py.0) / (x - y)
    }
}

/// The Christoffel–Darboux projection kernel of rank `n` for the weight
/// `(1-x)^a (1+x)^b`.
pub fn cd_jacobi_kernel(n: usize, a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !(v > -1.0 && v < 1.0) {
            return Err(Error::Domain(format!(
                "Christoffel–Darboux kernel arguments must lie in (-1, 1), got {v}"
            )));
        }
    }
    Ok(JacobiBasis::new(n, a, b)?.kernel(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use std::f64::consts::PI;

    fn direct_sum(basis: &JacobiBasis, x: f64, y: f64) -> f64 {
        let px = basis.evaluate(x);
        let py = basis.evaluate(y);
        (0..basis.rank()).map(|k| px[k] * py[k]).sum()
    }

    /// Integrate in the angle variable so endpoint singularities of the weight disappear.
    fn weighted_integral<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
        let rule = GaussLegendre::on_interval(400, 0.0, PI);
        rule.integrate(|t| {
            let x = t.cos();
            let w = 2f64.powf(a + b + 1.0)
                * (t / 2.0).sin().powf(2.0 * a + 1.0)
                * (t / 2.0).cos().powf(2.0 * b + 1.0);
            f(x) * w
        })
    }

    #[test]
    fn weight_examples() {
        assert_eq!(jacobi_weight(0.0, 1.3, -0.2).unwrap(), 1.0);
        let v = jacobi_weight(0.5, -0.5, -0.5).unwrap();
        assert!((v - 1.0 / 0.75f64.sqrt()).abs() < 1e-15);
        assert!(jacobi_weight(1.0, 0.5, -0.5).is_err());
        assert!(jacobi_weight(-1.2, 0.5, -0.5).is_err());
    }

    #[test]
    fn chebyshev_case_matches_closed_form() {
        let basis = JacobiBasis::new(6, -0.5, -0.5).unwrap();
        let x: f64 = 0.37;
        let p = basis.evaluate(x);
        let t = x.acos();
        assert!((p[0] - 1.0 / PI.sqrt()).abs() < 1e-14);
        for (k, pk) in p.iter().enumerate().skip(1) {
            let want = (2.0 / PI).sqrt() * (k as f64 * t).cos();
            assert!((pk - want).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn polynomials_are_orthonormal() {
        for &(a, b) in &[(-0.5, -0.5), (0.5, -0.5), (1.5, -0.5), (0.3, 1.7)] {
            let basis = JacobiBasis::new(8, a, b).unwrap();
            for i in 0..8 {
                for j in 0..8 {
                    let v = weighted_integral(a, b, |x| {
                        let p = basis.evaluate(x);
                        p[i] * p[j]
                    });
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-9, "a={a} b={b} i={i} j={j}: {v}");
                }
            }
        }
    }

    #[test]
    fn rank_one_kernel_is_constant() {
        let (a, b) = (0.5, -0.5);
        let k = cd_jacobi_kernel(1, a, b, 0.3, -0.8).unwrap();
        assert!((k - 1.0 / jacobi_mass(a, b)).abs() < 1e-14);
    }

    #[test]
    fn cd_identity_and_confluent_form_match_direct_sum() {
        let basis = JacobiBasis::new(25, 1.5, -0.5).unwrap();
        for &(x, y) in &[(0.1, 0.7), (-0.9, 0.95), (0.999, 0.998)] {
            let cd = basis.kernel(x, y);
            let direct = direct_sum(&basis, x, y);
            assert!((cd - direct).abs() < 1e-9 * direct.abs().max(1.0));
            assert!((cd - basis.kernel(y, x)).abs() < 1e-12 * cd.abs().max(1.0));
        }
        for &x in &[-0.5, 0.2, 0.99] {
            let d = basis.diagonal(x);
            let direct = direct_sum(&basis, x, x);
            assert!((d - direct).abs() < 1e-9 * direct);
        }
    }

    #[test]
    fn reproducing_property() {
        let (a, b) = (0.5, -0.5);
        let basis = JacobiBasis::new(5, a, b).unwrap();
        for &(x, y) in &[(0.2, -0.4), (0.9, 0.1)] {
            let v = weighted_integral(a, b, |t| basis.kernel(x, t) * basis.kernel(t, y));
            let want = basis.kernel(x, y);
            assert!((v - want).abs() < 1e-8, "{v} vs {want}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(JacobiBasis::new(0, 0.0, 0.0).is_err());
        assert!(JacobiBasis::new(3, -1.0, 0.0).is_err());
        assert!(cd_jacobi_kernel(3, 0.0, 0.0, 1.0, 0.0).is_err());
    }
}
