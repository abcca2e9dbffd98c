//! Hard-edge kernels, 1-level densities and their Fourier transforms.
//!
//! The limiting kernel at a hard edge of hardness `m` is the Bessel kernel
//! `K^(m)(x, y) = B^(m - 1/2)(x, y)` in the rescaled variable `x = θN/π`.
//! For `m = 0` and `m = 1` it is the even and odd sine kernel. Kernels at
//! the `-1` edge follow by the reflection `x -> -x` and are not provided.

mod bessel;
mod jacobi;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::composite_integrate;

pub use bessel::{bessel_j_half, HalfOrderBessel, MAX_INDEX as MAX_BESSEL_INDEX};
pub use jacobi::{cd_jacobi_kernel, jacobi_mass, jacobi_weight, JacobiBasis};

/// Largest hardness accepted by the Bessel-form kernels.
pub const MAX_HARDNESS: u32 = 6;

/// Separation below which the diagonal formula replaces the quotient form.
pub const DIAGONAL_SWITCH: f64 = 1e-6;

/// Which kernel an operator is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// `K^(m)`, the `N -> ∞` hard-edge kernel.
    LimitingHard { m: u32 },
    /// Christoffel–Darboux projection of rank `n` for `(1-x)^a (1+x)^b`.
    FiniteJacobi { n: usize, a: f64, b: f64 },
}

impl KernelSpec {
    /// The finite-N kernel whose edge limit is `K^(m)` for `n` free level pairs.
    pub fn finite_for_hardness(n: usize, m: u32) -> Self {
        KernelSpec::FiniteJacobi {
            n,
            a: m as f64 - 0.5,
            b: -0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::LimitingHard { m } if m > MAX_HARDNESS => Err(Error::Unsupported(format!(
                "hardness {m} exceeds the supported maximum {MAX_HARDNESS}"
            ))),
            KernelSpec::LimitingHard { .. } => Ok(()),
            KernelSpec::FiniteJacobi { n, a, b } => {
                if n < 1 || !(a > -1.0) || !(b > -1.0) {
                    Err(Error::InvalidParameters(format!(
                        "finite Jacobi kernel needs N >= 1, a > -1, b > -1 (got N={n}, a={a}, b={b})"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A 1-level density value split into its smooth part and the point mass
/// carried by the forced levels at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityValue {
    pub smooth: f64,
    pub point_mass_at_zero: u32,
}

/// Fourier transform of a 1-level density: `delta_mass · δ(u) + smooth(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierDensity {
    pub delta_mass: f64,
    pub smooth: f64,
}

fn half_index(a: f64) -> Result<i32> {
    let l = a - 0.5;
    if (l - l.round()).abs() > 1e-12 {
        return Err(Error::Unsupported(format!(
            "Bessel kernel parameter a = {a} is not a half-integer"
        )));
    }
    let l = l.round() as i32;
    // the diagonal form needs J_{a-1}, i.e. index l - 1 >= -2
    if l < -1 || l + 1 > MAX_BESSEL_INDEX {
        return Err(Error::Unsupported(format!(
            "Bessel kernel parameter a = {a} outside the supported range"
        )));
    }
    Ok(l)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// The Bessel kernel
/// `B^(a)(ξ, η) = √(ξη) [πξ J_{a+1}(πξ) J_a(πη) - J_a(πξ) πη J_{a+1}(πη)] / (ξ² - η²)`
/// for half-integer `a >= -1/2`.
pub fn bessel_kernel(a: f64, xi: f64, eta: f64) -> Result<f64> {
    check_positive("ξ", xi)?;
    check_positive("η", eta)?;
    let l = half_index(a)?;
    if (xi - eta).abs() < DIAGONAL_SWITCH {
        return bessel_kernel_diagonal(a, 0.5 * (xi + eta));
    }
    let jx = HalfOrderBessel::new(l + 1, PI * xi)?;
    let je = HalfOrderBessel::new(l + 1, PI * eta)?;
    let num = PI * xi * jx.at(l + 1) * je.at(l) - jx.at(l) * PI * eta * je.at(l + 1);
    Ok((xi * eta).sqrt() * num / (xi * xi - eta * eta))
}

/// Diagonal `B^(a)(ξ, ξ) = (π/2)(πξ)[J_a(πξ)² - J_{a-1}(πξ) J_{a+1}(πξ)]`.
pub fn bessel_kernel_diagonal(a: f64, xi: f64) -> Result<f64> {
    check_positive("ξ", xi)?;
    let l = half_index(a)?;
    let z = PI * xi;
    let j = HalfOrderBessel::new(l + 1, z)?;
    let ja = j.at(l);
    Ok(0.5 * PI * z * (ja * ja - j.at(l - 1) * j.at(l + 1)))
}

fn check_hardness(m: u32) -> Result<()> {
    if m > MAX_HARDNESS {
        Err(Error::Unsupported(format!(
            "hardness {m} exceeds the supported maximum {MAX_HARDNESS}"
        )))
    } else {
        Ok(())
    }
}

/// `K^(m)(x, y) = B^(m - 1/2)(x, y)`.
pub fn hard_kernel(m: u32, x: f64, y: f64) -> Result<f64> {
    check_hardness(m)?;
    bessel_kernel(m as f64 - 0.5, x, y)
}

/// `k^(m)(x, y) = K^(m)(x/π, y/π) / π`, the kernel in the unscaled angle variable.
pub fn scaled_hard_kernel(m: u32, x: f64, y: f64) -> Result<f64> {
    Ok(hard_kernel(m, x / PI, y / PI)? / PI)
}

/// `k^(m)(x, x)` through the recursion form
/// `(x/2)[J_{m+1/2}(x)² + J_{m-1/2}(x)²] - (m - 1/2) J_{m+1/2}(x) J_{m-1/2}(x)`.
pub fn scaled_hard_diagonal_recursion(m: u32, x: f64) -> Result<f64> {
    check_hardness(m)?;
    check_positive("x", x)?;
    let l = m as i32;
    let j = HalfOrderBessel::new(l.max(0), x)?;
    let up = j.at(l);
    let down = j.at(l - 1);
    Ok(0.5 * x * (up * up + down * down) - (m as f64 - 0.5) * up * down)
}

/// `K^(m)(x, x)` through the recursion form, i.e. `π k^(m)(πx, πx)`.
pub fn hard_kernel_diagonal_recursion(m: u32, x: f64) -> Result<f64> {
    Ok(PI * scaled_hard_diagonal_recursion(m, PI * x)?)
}

fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// `j_1(z) = sin z / z² - cos z / z`, series near zero.
fn spherical_j1(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        let z2 = z * z;
        z / 3.0 * (1.0 - z2 / 10.0 + z2 * z2 / 280.0)
    } else {
        z.sin() / (z * z) - z.cos() / z
    }
}

/// `sin(πt)/(πt)`, continuous at zero.
fn sinc_pi(t: f64) -> f64 {
    sinc(PI * t)
}

/// Elementary-function form of `K^(m)` for `m <= 3`:
///
/// * `K_0 = S(x-y) + S(x+y)` and `K_1 = S(x-y) - S(x+y)` with `S(t) = sin(πt)/(πt)`,
/// * `K_2 = K_0 - 2 S(x) S(y)`,
/// * `K_3 = K_1 - 6 j_1(πx) j_1(πy)` with the spherical Bessel `j_1`.
pub fn explicit_kernel(m: u32, x: f64, y: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    let (x, y) = if (x - y).abs() < DIAGONAL_SWITCH {
        let mid = 0.5 * (x + y);
        (mid, mid)
    } else {
        (x, y)
    };
    let even = sinc_pi(x - y) + sinc_pi(x + y);
    let odd = sinc_pi(x - y) - sinc_pi(x + y);
    match m {
        0 => Ok(even),
        1 => Ok(odd),
        2 => Ok(even - 2.0 * sinc_pi(x) * sinc_pi(y)),
        3 => Ok(odd - 6.0 * spherical_j1(PI * x) * spherical_j1(PI * y)),
        _ => Err(Error::Unsupported(format!(
            "no elementary kernel form is provided for hardness {m}"
        ))),
    }
}

/// The central `m`-hard 1-level density at `x > 0`: the smooth part
/// `K^(m)(x, x)` plus `m` forced levels at the origin.
pub fn one_level_density(m: u32, x: f64) -> Result<DensityValue> {
    check_hardness(m)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "1-level density is evaluated at x > 0 (the point mass is carried by the result), got {x}"
        )));
    }
    Ok(DensityValue {
        smooth: bessel_kernel_diagonal(m as f64 - 0.5, x)?,
        point_mass_at_zero: m,
    })
}

/// Indicator of `[-1, 1]`.
pub fn unit_indicator(u: f64) -> f64 {
    if u.abs() <= 1.0 {
        1.0
    } else {
        0.0
    }
}

/// Closed-form Fourier transform of the `m`-hard 1-level density (point mass
/// included), for `m ∈ {0, 1, 2}`.
pub fn one_level_density_fourier(m: u32, u: f64) -> Result<FourierDensity> {
    let ind = unit_indicator(u);
    let smooth = match m {
        0 => 0.5 * ind,
        1 => 1.0 - 0.5 * ind,
        2 => 2.0 + (2.0 * u.abs() - 1.5) * ind,
        _ => {
            return Err(Error::Unsupported(format!(
                "no closed-form Fourier transform for hardness {m}; use one_level_density_fourier_numerical"
            )))
        }
    };
    Ok(FourierDensity {
        delta_mass: 1.0,
        smooth,
    })
}

/// Numerically computed Fourier transform of the `m`-hard 1-level density,
/// `m + 2∫_0^L (K^(m)(x,x) - 1) cos(2πux) dx`, with the unit background
/// contributing the `δ(u)` mass. The `1/x` tail makes the truncation error
/// of order `1/(L·dist(|u|, 1))`.
pub fn one_level_density_fourier_numerical(m: u32, u: f64, window: f64) -> Result<FourierDensity> {
    check_hardness(m)?;
    check_positive("window", window)?;
    let panels = (window.ceil() as usize).max(1) * 2;
    let mut failure = None;
    let integral = composite_integrate(0.0, window, panels, 16, |x| {
        match bessel_kernel_diagonal(m as f64 - 0.5, x) {
            Ok(v) => (v - 1.0) * (2.0 * PI * u * x).cos(),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(FourierDensity {
        delta_mass: 1.0,
        smooth: m as f64 + 2.0 * integral,
    })
}

/// Kernel evaluation dispatched on a [`KernelSpec`]. Finite-N kernels take
/// level coordinates in `(-1, 1)`; limiting kernels take the rescaled variable.
pub fn evaluate(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    match *spec {
        KernelSpec::LimitingHard { m } => hard_kernel(m, x, y),
        KernelSpec::FiniteJacobi { n, a, b } => cd_jacobi_kernel(n, a, b, x, y),
    }
}
