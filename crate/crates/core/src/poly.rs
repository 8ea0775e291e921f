//! Laurent polynomials in `t^{1/2}` with integer coefficients.
//!
//! Exponents are stored doubled, so the key `3` means `t^{3/2}` and `-2`
//! means `t^{-1}`. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Above this many doubled-exponent slots `div_exact` works on the sparse map.
const DENSE_DIVISION_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff * t^{doubled_exp / 2}`.
    pub fn monomial(doubled_exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(doubled_exp, coeff);
        p
    }

    /// `coeff * t^exp` for an integer exponent.
    pub fn integral_monomial(exp: i64, coeff: i64) -> Self {
        Self::monomial(2 * exp, coeff)
    }

    pub fn from_doubled_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut v: Vec<(i64, i64)> = terms.into_iter().collect();
        v.sort_unstable_by_key(|&(e, _)| e);
        let mut merged: Vec<(i64, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        // sorted input lets the map bulk-build
        LaurentPolynomial { terms: merged.into_iter().filter(|&(_, c)| c != 0).collect() }
    }

    /// `t^n - 1` for an integer `n` (which may be negative).
    pub fn t_power_minus_one(n: i64) -> Self {
        Self::from_doubled_terms([(2 * n, 1), (0, -1)])
    }

    pub fn add_term(&mut self, doubled_exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(doubled_exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&doubled_exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, doubled_exp: i64) -> i64 {
        self.terms.get(&doubled_exp).copied().unwrap_or(0)
    }

    /// `(doubled_exp, coeff)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_doubled_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_doubled_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Value at `t = 1`.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Multiplies by `t^{doubled_shift / 2}`.
    pub fn shifted(&self, doubled_shift: i64) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, &c)| (e + doubled_shift, c)).collect() }
    }

    /// `p(t^{-1})`.
    pub fn inverted(&self) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().zip(self.terms.iter().rev()).all(|((&e, &c), (&f, &d))| e == -f && c == d)
    }

    /// Shifts so the lowest and highest exponents are negatives of each other.
    /// The doubled center must be even for the result to keep the same
    /// exponent lattice; odd centers are rounded toward `-inf`.
    pub fn centered(&self) -> Self {
        match (self.min_doubled_exp(), self.max_doubled_exp()) {
            (Some(lo), Some(hi)) => self.shifted(-(lo + hi).div_euclid(2)),
            _ => self.clone(),
        }
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Exact division. Returns `None` if the remainder is nonzero, a
    /// leading-coefficient division is inexact, or an intermediate
    /// coefficient overflows `i64` (which only happens for non-divisors).
    pub fn div_exact(&self, divisor: &LaurentPolynomial) -> Option<LaurentPolynomial> {
        let (d_lo, d_hi) = (divisor.min_doubled_exp()?, divisor.max_doubled_exp()?);
        let Some((r_lo, r_hi)) = self.min_doubled_exp().zip(self.max_doubled_exp()) else {
            return Some(LaurentPolynomial::zero());
        };
        if r_hi - r_lo < d_hi - d_lo {
            return None;
        }
        let span = (r_hi - r_lo) as usize + 1;
        if span > DENSE_DIVISION_LIMIT {
            return self.div_exact_sparse(divisor);
        }
        // Laurent divisibility by a divisor with a nonzero lowest term reduces
        // to ordinary division once both sides are shifted to start at t^0.
        let lead = divisor.coefficient(d_hi);
        let offsets: Vec<(usize, i64)> = divisor.terms().map(|(e, c)| ((d_hi - e) as usize, c)).collect();
        let mut rem = vec![0i64; span];
        for (e, c) in self.terms() {
            rem[(e - r_lo) as usize] = c;
        }
        let d_span = (d_hi - d_lo) as usize;
        let mut quotient = Vec::new();
        for top in (d_span..span).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            if c % lead != 0 {
                return None;
            }
            let factor = c / lead;
            quotient.push((top as i64 + r_lo - d_hi, factor));
            for &(off, dc) in &offsets {
                let slot = &mut rem[top - off];
                *slot = slot.checked_sub(factor.checked_mul(dc)?)?;
            }
        }
        if rem[..d_span].iter().any(|&c| c != 0) {
            return None;
        }
        Some(LaurentPolynomial::from_doubled_terms(quotient))
    }

    fn div_exact_sparse(&self, divisor: &LaurentPolynomial) -> Option<LaurentPolynomial> {
        let (d_lo, d_hi) = (divisor.min_doubled_exp()?, divisor.max_doubled_exp()?);
        let lead = divisor.coefficient(d_hi);
        let mut rem = self.clone();
        let mut quotient = LaurentPolynomial::zero();
        while let (Some(r_lo), Some(r_hi)) = (rem.min_doubled_exp(), rem.max_doubled_exp()) {
            if r_hi - r_lo < d_hi - d_lo {
                return None;
            }
            let c = rem.coefficient(r_hi);
            if c % lead != 0 {
                return None;
            }
            let factor = c / lead;
            let shift = r_hi - d_hi;
            quotient.add_term(shift, factor);
            for (e, dc) in divisor.terms() {
                let delta = factor.checked_mul(dc)?;
                rem.coefficient(e + shift).checked_sub(delta)?;
                rem.add_term(e + shift, delta.checked_neg()?);
            }
        }
        Some(quotient)
    }

    /// Sorted `doubled-exponent:coefficient` pairs, comma separated.
    pub fn encode(&self) -> String {
        self.terms.iter().map(|(e, c)| format!("{e}:{c}")).collect::<Vec<_>>().join(",")
    }
}

impl FromStr for LaurentPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = LaurentPolynomial::zero();
        for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (e, c) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("bad polynomial term {part:?}")))?;
            let e = e.trim().parse::<i64>().map_err(|err| Error::InvalidInput(format!("{part:?}: {err}")))?;
            let c = c.trim().parse::<i64>().map_err(|err| Error::InvalidInput(format!("{part:?}: {err}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.encode())
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn fmt_exponent(doubled: i64) -> String {
    if doubled % 2 == 0 {
        format!("{}", doubled / 2)
    } else {
        format!("{doubled}/2")
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Human form, ascending: `t^-1 - 1 + t`, `t^-3/2 + t^3/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            match (e, mag) {
                (0, _) => write!(f, "{mag}")?,
                (2, 1) => write!(f, "t")?,
                (2, _) => write!(f, "{mag}t")?,
                (_, 1) => write!(f, "t^{}", fmt_exponent(e))?,
                _ => write!(f, "{mag}t^{}", fmt_exponent(e))?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        LaurentPolynomial::from_doubled_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        LaurentPolynomial::from_doubled_terms(self.terms().chain(rhs.terms().map(|(e, c)| (e, -c))))
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut products = Vec::with_capacity(self.len() * rhs.len());
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                products.push((e1 + e2, c1 * c2));
            }
        }
        LaurentPolynomial::from_doubled_terms(products)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;

            fn $method(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
