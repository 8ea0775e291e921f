//! Exact modular arithmetic on machine words.
//!
//! Products are formed in `u128`/`i128` so nothing wraps for moduli up to the
//! word budget (see [`word_budget`]).

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `p`. Values of `f` are bounded by `p * k < p^2`,
/// so this keeps every grading inside an `i64`.
pub const DEFAULT_WORD_BUDGET: u64 = 1 << 31;

/// Hard ceiling for the budget override; `p^2` must stay below `i64::MAX`.
pub const MAX_WORD_BUDGET: u64 = 3_000_000_000;

/// Environment variable that overrides [`DEFAULT_WORD_BUDGET`].
pub const WORD_BUDGET_ENV: &str = "LENSKNOT_MAX_P";

/// The largest `p` accepted anywhere in the crate.
pub fn word_budget() -> u64 {
    std::env::var(WORD_BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .map(|b| b.clamp(2, MAX_WORD_BUDGET))
        .unwrap_or(DEFAULT_WORD_BUDGET)
}

pub fn check_budget(p: u64) -> Result<()> {
    let budget = word_budget();
    if p > budget {
        Err(Error::ResourceLimit { p, budget })
    } else {
        Ok(())
    }
}

/// A residue `value` modulo `modulus`, always stored in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(x: i64, modulus: u64) -> Self {
        normalized_residue(x, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value as i64, self.modulus as i64) == 1
    }

    pub fn inverse(self) -> Result<Self> {
        mod_inverse(self)
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        Residue {
            value: if self.value == 0 { 0 } else { self.modulus - self.value },
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Nonnegative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `x mod p` in `[0, p)`, correct for negative `x`.
pub fn normalized_residue(x: i64, p: u64) -> Residue {
    assert!(p >= 2, "modulus must be at least 2");
    let value = (x as i128).rem_euclid(p as i128) as u64;
    Residue { value, modulus: p }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn mod_inverse(x: Residue) -> Result<Residue> {
    inverse_mod(x.value, x.modulus)
        .map(|value| Residue { value, modulus: x.modulus })
        .ok_or(Error::NotInvertible { value: x.value, modulus: x.modulus })
}

/// Raw form of [`mod_inverse`] for hot loops.
#[inline]
pub fn inverse_mod(x: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (x % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Positive divisors of `n > 0`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(11 * 13, 13 * 17), 13);
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(gcd(-12, 18), 6);
    }

    #[test]
    fn inverse_examples() {
        let inv = |x, p| mod_inverse(Residue::new(x, p)).unwrap().value();
        assert_eq!(inv(1, 5), 1);
        assert_eq!(inv(4, 5), 4);
        assert_eq!(inv(2, 5), 3);
        assert!(matches!(
            mod_inverse(Residue::new(6, 9)),
            Err(Error::NotInvertible { value: 6, modulus: 9 })
        ));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(normalized_residue(-1, 5).value(), 4);
        assert_eq!(normalized_residue(81, 22).value(), 15);
        assert_eq!(normalized_residue(0, 7).value(), 0);
        assert_eq!(normalized_residue(i64::MIN, 7).value(), (i64::MIN as i128).rem_euclid(7) as u64);
    }

    #[test]
    fn wide_products() {
        let p = (1u64 << 31) - 1;
        assert_eq!(mul_mod(p - 1, p - 1, p), 1);
        let x = Residue::new(123_456_789, p);
        assert_eq!((x * x.inverse().unwrap()).value(), 1);
    }

    #[test]
    fn isqrt_and_divisors() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    proptest! {
        #[test]
        fn inverse_is_an_involution(p in 2u64..(1 << 31), x in any::<i64>()) {
            let r = normalized_residue(x, p);
            if let Ok(inv) = mod_inverse(r) {
                prop_assert_eq!((r * inv).value(), 1 % p);
                prop_assert_eq!(mod_inverse(inv).unwrap(), r);
            } else {
                prop_assert_ne!(gcd(r.value() as i64, p as i64), 1);
            }
        }

        #[test]
        fn residue_is_in_range(p in 2u64..(1 << 40), x in any::<i64>()) {
            let r = normalized_residue(x, p).value();
            prop_assert!(r < p);
            prop_assert_eq!((x as i128 - r as i128).rem_euclid(p as i128), 0);
        }
    }
}
