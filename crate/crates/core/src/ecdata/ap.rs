//! `a_p` by counting points over `F_p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted by [`ap_point_count`].
pub const MAX_PRIME: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    Good,
    /// Node; `a_p = ±1`.
    Multiplicative,
    /// Cusp; `a_p = 0`.
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApValue {
    pub p: u64,
    pub ap: i64,
    pub reduction: Reduction,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `≤ n` by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn md(a: i128, p: i128) -> i128 {
    a.rem_euclid(p)
}

/// Discriminant of the Weierstrass model reduced mod `p`.
pub fn discriminant_mod(a: [i64; 5], p: u64) -> u64 {
    let p = p as i128;
    let [a1, a2, a3, a4, a6] = a.map(|x| md(x as i128, p));
    let b2 = md(a1 * a1 + 4 * a2, p);
    let b4 = md(2 * a4 + a1 * a3, p);
    let b6 = md(a3 * a3 + 4 * a6, p);
    let b8 = md(
        md(a1 * a1 * a6, p) + 4 * a2 * a6 - md(a1 * a3 * a4, p) + a2 * a3 * a3 - a4 * a4,
        p,
    );
    let t1 = md(-md(b2 * b2, p) * b8, p);
    let t2 = md(-8 * md(b4 * b4, p) * b4, p);
    let t3 = md(-27 * md(b6 * b6, p), p);
    let t4 = md(9 * md(b2 * b4, p) * b6, p);
    md(t1 + t2 + t3 + t4, p) as u64
}

/// `a_p = p + 1 - #E(F_p)`, counting the point at infinity and, for bad
/// reduction, the singular point.
///
/// For odd `p` the number of `y` over a given `x` is `1 + χ(D(x))` with
/// `D = 4(x³ + a₂x² + a₄x + a₆) + (a₁x + a₃)²`; for `p = 2` every pair is
/// tried.
pub fn ap_point_count(a: [i64; 5], p: u64) -> Result<ApValue> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p > MAX_PRIME {
        return Err(Error::Unsupported(format!("p = {p} exceeds {MAX_PRIME}")));
    }
    let pi = p as i128;
    let [a1, a2, a3, a4, a6] = a.map(|x| md(x as i128, pi));
    let affine: i128 = if p == 2 {
        let mut count = 0;
        for x in 0..2i128 {
            for y in 0..2i128 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if md(lhs - rhs, 2) == 0 {
                    count += 1;
                }
            }
        }
        count
    } else {
        let mut square = vec![false; p as usize];
        for y in 0..pi {
            square[md(y * y, pi) as usize] = true;
        }
        let mut chi_sum: i128 = 0;
        for x in 0..pi {
            let cubic = md(
                md(md(x * x, pi) * x, pi) + md(a2 * x, pi) * x + a4 * x + a6,
                pi,
            );
            let lin = md(a1 * x + a3, pi);
            let d = md(4 * cubic + lin * lin, pi);
            if d != 0 {
                chi_sum += if square[d as usize] { 1 } else { -1 };
            }
        }
        pi + chi_sum
    };
    let ap = (pi - affine) as i64;
    let reduction = if discriminant_mod(a, p) != 0 {
        if (ap as f64).abs() > 2.0 * (p as f64).sqrt() {
            return Err(Error::Consistency(format!(
                "a_{p} = {ap} violates the Hasse bound"
            )));
        }
        Reduction::Good
    } else {
        match ap {
            0 => Reduction::Additive,
            1 | -1 => Reduction::Multiplicative,
            _ => {
                return Err(Error::Consistency(format!(
                    "singular reduction at {p} gave a_p = {ap}"
                )))
            }
        }
    };
    Ok(ApValue { p, ap, reduction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(a: [i64; 5], p: u64) -> i64 {
        let p = p as i128;
        let [a1, a2, a3, a4, a6] = a.map(|x| x as i128);
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let v = y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6);
                if v.rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        (p + 1 - n) as i64
    }

    #[test]
    fn hand_enumerated_examples() {
        assert_eq!(ap_point_count([0, 0, 0, -1, 0], 5).unwrap().ap, -2);
        assert_eq!(ap_point_count([0, 0, 0, 1, 0], 3).unwrap().ap, 0);
        assert!(ap_point_count([0, 0, 0, 1, 0], 9).is_err());
    }

    #[test]
    fn bad_reduction_conventions() {
        // y² = x³ - x has discriminant 64, bad only at 2; y² + y = x³ - x²
        // (conductor 11) is multiplicative at 11
        let e11 = [0, -1, 1, 0, 0];
        let v = ap_point_count(e11, 11).unwrap();
        assert_eq!(v.reduction, Reduction::Multiplicative);
        assert_eq!(v.ap, 1);
        // y² = x³ + 3 over F_3 is a cusp
        let v = ap_point_count([0, 0, 0, 0, 3], 3).unwrap();
        assert_eq!((v.ap, v.reduction), (0, Reduction::Additive));
    }

    #[test]
    fn known_coefficients_of_conductor_11() {
        // 11a3: y² + y = x³ - x²; a_2..a_13 = -2, -1, 1, -2, _, 4, -2
        let e = [0, -1, 1, 0, 0];
        let want = [(2, -2), (3, -1), (5, 1), (7, -2), (13, 4), (17, -2)];
        for (p, ap) in want {
            assert_eq!(ap_point_count(e, p).unwrap().ap, ap, "p = {p}");
        }
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
        assert!(primes_up_to(1000).iter().all(|&p| is_prime(p)));
        assert_eq!(primes_up_to(1000).len(), 168);
    }

    proptest! {
        #[test]
        fn matches_brute_force(a in prop::array::uniform5(-20i64..20), idx in 0usize..10) {
            let p = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29][idx];
            let fast = ap_point_count(a, p);
            if let Ok(v) = fast {
                prop_assert_eq!(v.ap, brute(a, p));
            }
        }
    }

    #[test]
    fn hasse_bound_on_random_curves() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let primes = primes_up_to(1000);
        let mut curves = 0;
        while curves < 50 {
            let a: [i64; 5] = std::array::from_fn(|_| rng.random_range(-50..=50));
            if discriminant_mod(a, 1_000_003) == 0 {
                continue;
            }
            curves += 1;
            for &p in &primes {
                let v = ap_point_count(a, p).unwrap();
                if v.reduction == Reduction::Good {
                    assert!((v.ap as f64).abs() <= 2.0 * (p as f64).sqrt());
                }
            }
        }
    }
}
