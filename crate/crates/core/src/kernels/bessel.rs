//! Bessel functions of the first kind at half-integer order.
//!
//! Only orders `l + 1/2` with integer `l >= -2` arise in the hard-edge
//! kernels (`a = m - 1/2` together with its neighbours `a ± 1`), so the
//! evaluation is built on the closed trigonometric forms of `J_{±1/2}` and
//! the three-term recurrence
//!
//! `J_{ν-1}(x) + J_{ν+1}(x) = (2ν/x) J_ν(x)`.
//!
//! Upward recurrence is used while the order stays below `x`; otherwise
//! the sequence is generated downward (Miller) and normalized against the
//! closed forms.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Lowest supported index: `J_{-3/2}`.
pub const MIN_INDEX: i32 = -2;
/// Highest supported index: `J_{60 + 1/2}`.
pub const MAX_INDEX: i32 = 60;

/// `J_{l + 1/2}(x)` for `MIN_INDEX <= l <= MAX_INDEX` and `x > 0`.
///
/// `l = 0` gives `J_{1/2}`, `l = -1` gives `J_{-1/2}`.
pub fn bessel_j_half(l: i32, x: f64) -> Result<f64> {
    let seq = HalfOrderBessel::new(l.max(0), x)?;
    seq.get(l)
}

/// The values `J_{l+1/2}(x)` for `l = -2, ..., lmax` at one argument.
#[derive(Debug, Clone)]
pub struct HalfOrderBessel {
    x: f64,
    lmax: i32,
    values: Vec<f64>,
}

impl HalfOrderBessel {
    pub fn new(lmax: i32, x: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "Bessel argument must be positive and finite, got {x}"
            )));
        }
        if !(0..=MAX_INDEX).contains(&lmax) {
            return Err(Error::Unsupported(format!(
                "half-integer Bessel order index {lmax} outside [0, {MAX_INDEX}]"
            )));
        }
        let values = sequence(lmax, x);
        Ok(Self { x, lmax, values })
    }

    pub fn argument(&self) -> f64 {
        self.x
    }

    /// `J_{l+1/2}` at the stored argument.
    pub fn get(&self, l: i32) -> Result<f64> {
        if l < MIN_INDEX || l > self.lmax {
            return Err(Error::Unsupported(format!(
                "half-integer Bessel order index {l} outside [{MIN_INDEX}, {}]",
                self.lmax
            )));
        }
        Ok(self.values[(l - MIN_INDEX) as usize])
    }

    /// Unchecked access for callers that already validated the index.
    pub(crate) fn at(&self, l: i32) -> f64 {
        self.values[(l - MIN_INDEX) as usize]
    }
}

fn sequence(lmax: i32, x: f64) -> Vec<f64> {
    let len = (lmax - MIN_INDEX + 1) as usize;
    let mut out = vec![0.0; len];
    let scale = (2.0 / (PI * x)).sqrt();
    let (sin, cos) = x.sin_cos();
    let j_minus_half = scale * cos;
    let j_half = scale * sin;

    // index offset: out[l + 2]
    out[1] = j_minus_half;
    out[2] = j_half;

    if lmax >= 1 {
        if (lmax as f64) < x {
            for l in 1..=lmax {
                // J_{l+1/2} = ((2l-1)/x) J_{l-1/2} - J_{l-3/2}
                let nu = l as f64 - 0.5;
                let idx = (l + 2) as usize;
                out[idx] = (2.0 * nu / x) * out[idx - 1] - out[idx - 2];
            }
        } else {
            miller_downward(lmax, x, j_minus_half, j_half, &mut out);
        }
    }

    // J_{-3/2} = (-1/x) J_{-1/2} - J_{1/2}
    out[0] = -j_minus_half / x - j_half;
    out
}

fn miller_downward(lmax: i32, x: f64, j_minus_half: f64, j_half: f64, out: &mut [f64]) {
    let start = lmax + 20 + (10.0 * (lmax as f64).sqrt()) as i32 + x as i32;
    // f[l] tracks an unnormalized multiple of J_{l+1/2} for l = -1..=start
    let mut upper = 0.0; // l + 1
    let mut current = 1e-300; // l
    let mut stored: Vec<f64> = vec![0.0; (lmax + 2) as usize]; // l = -1..=lmax
    let mut l = start;
    loop {
        if l <= lmax {
            stored[(l + 1) as usize] = current;
        }
        if l == -1 {
            break;
        }
        // J_{l-1/2} = ((2l+1)/x) J_{l+1/2} - J_{l+3/2}
        let nu = l as f64 + 0.5;
        let lower = (2.0 * nu / x) * current - upper;
        upper = current;
        current = lower;
        l -= 1;
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            for v in stored.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = if j_half.abs() > j_minus_half.abs() {
        j_half / stored[1]
    } else {
        j_minus_half / stored[0]
    };
    for li in -1..=lmax {
        out[(li + 2) as usize] = stored[(li + 1) as usize] * norm;
    }
}
