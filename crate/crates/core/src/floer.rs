//! Knot Floer data of simple knots: the `f` grading profile, width, genus,
//! graded Euler characteristic, Alexander polynomial, and the Fox calculus
//! that connects them.
//!
//! For `K(p,q,k)` the generators `x_0, ..., x_{p-1}` have Alexander gradings
//! given (up to a common shift) by
//!
//! ```text
//! f(0) = 0,   f(i+1) - f(i) = k - p   if (i q mod p) in [1, k]
//!                             k       otherwise
//! ```
//!
//! and the width of knot Floer homology is `max f - min f`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::SimpleKnot;
use crate::poly::LaurentPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingProfile {
    /// Raw values `f(0), ..., f(p-1)` with `f(0) = 0`.
    pub f: Vec<i64>,
    pub width: u64,
    /// `2 f(i) - (max f + min f)`, i.e. twice the symmetric Alexander grading
    /// of `x_i`, listed by `i`.
    pub doubled_gradings: Vec<i64>,
    /// `(width - p + 1) / 2`; `None` for non-primitive knots.
    pub genus: Option<u64>,
}

impl GradingProfile {
    pub fn max(&self) -> i64 {
        self.f.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> i64 {
        self.f.iter().copied().min().unwrap_or(0)
    }

    /// Doubled gradings sorted descending.
    pub fn sorted_doubled_gradings(&self) -> Vec<i64> {
        let mut g = self.doubled_gradings.clone();
        g.sort_unstable_by(|a, b| b.cmp(a));
        g
    }
}

/// Walks the `f` recurrence, calling `visit` with `f(0), ..., f(p-1)`.
#[inline]
fn walk_profile(p: u64, q: u64, k: u64, mut visit: impl FnMut(i64) -> bool) {
    let (pi, ki) = (p as i64, k as i64);
    let mut f = 0i64;
    // r = i q mod p
    let mut r = 0u64;
    for _ in 0..p {
        if !visit(f) {
            return;
        }
        f += if r >= 1 && r <= k { ki - pi } else { ki };
        r += q;
        if r >= p {
            r -= p;
        }
    }
    debug_assert_eq!(f, 0, "f must return to 0 after p steps");
}

pub fn f_profile(knot: &SimpleKnot) -> GradingProfile {
    let (p, q, k) = (knot.p(), knot.q(), knot.k());
    let mut f = Vec::with_capacity(p as usize);
    walk_profile(p, q, k, |v| {
        f.push(v);
        true
    });
    let max = *f.iter().max().expect("p >= 2");
    let min = *f.iter().min().expect("p >= 2");
    let width = (max - min) as u64;
    let doubled_gradings = f.iter().map(|&v| 2 * v - (max + min)).collect();
    let genus = knot.is_primitive().then(|| {
        debug_assert_eq!((width + 1 - p) % 2, 0);
        (width + 1 - p) / 2
    });
    GradingProfile { f, width, doubled_gradings, genus }
}

/// Width of `K(p,q,k)` after validating the triple.
pub fn width(p: i64, q: i64, k: i64) -> Result<u64> {
    let knot = SimpleKnot::new(p, q, k)?;
    Ok(width_kernel(knot.p(), knot.q(), knot.k()))
}

/// Allocation-free O(p) width of already-reduced parameters
/// (`q, k < p`, `gcd(q,p) = 1`, `k != 0`).
pub fn width_kernel(p: u64, q: u64, k: u64) -> u64 {
    let (mut lo, mut hi) = (0i64, 0i64);
    walk_profile(p, q, k, |v| {
        lo = lo.min(v);
        hi = hi.max(v);
        true
    });
    (hi - lo) as u64
}

/// `Some(width)` if the width is below `bound`, otherwise `None`. Stops as
/// soon as the running range reaches `bound`.
pub fn width_below(p: u64, q: u64, k: u64, bound: u64) -> Option<u64> {
    let (mut lo, mut hi) = (0i64, 0i64);
    let bound = bound as i64;
    let mut exceeded = false;
    walk_profile(p, q, k, |v| {
        lo = lo.min(v);
        hi = hi.max(v);
        exceeded = hi - lo >= bound;
        !exceeded
    });
    (!exceeded).then_some((hi - lo) as u64)
}

pub fn genus(knot: &SimpleKnot) -> Result<u64> {
    knot.require_primitive()?;
    let w = width_kernel(knot.p(), knot.q(), knot.k());
    Ok((w + 1 - knot.p()) / 2)
}

/// `sum_i t^{g_i}` over the symmetric gradings `g_i`; all coefficients are `+1`
/// because every generator has the same sign.
pub fn euler_characteristic(knot: &SimpleKnot) -> LaurentPolynomial {
    let profile = f_profile(knot);
    LaurentPolynomial::from_doubled_terms(profile.doubled_gradings.iter().map(|&g| (g, 1)))
}

/// Symmetrized Alexander polynomial, `(t - 1) sum t^{f(i)} / (t^p - 1)`,
/// recentered so that `D(t^-1) = D(t)`.
pub fn alexander_polynomial(knot: &SimpleKnot) -> Result<LaurentPolynomial> {
    knot.require_primitive()?;
    let profile = f_profile(knot);
    let sum = LaurentPolynomial::from_doubled_terms(profile.f.iter().map(|&v| (2 * v, 1)));
    let numerator = &sum * &LaurentPolynomial::t_power_minus_one(1);
    let p = knot.p();
    let quotient = numerator
        .div_exact(&LaurentPolynomial::t_power_minus_one(p as i64))
        .ok_or(Error::DivisionNotExact { p })?;
    Ok(quotient.centered())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    A,
    M,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::A => "a",
            Generator::M => "m",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    /// `+1` or `-1`.
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: Generator, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "letters carry exponent +-1");
        Letter { generator, exponent }
    }
}

/// A word in the free group on `a, m`, with the abelianization weights
/// `|a|` and `|m|` attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub weight_a: i64,
    pub weight_m: i64,
}

impl Word {
    pub fn new(letters: Vec<Letter>, weight_a: i64, weight_m: i64) -> Self {
        Word { letters, weight_a, weight_m }
    }

    /// Parses `a`, `m`, `A`, `M` (capitals are inverses); whitespace ignored.
    pub fn parse(s: &str, weight_a: i64, weight_m: i64) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'a' => Ok(Letter::new(Generator::A, 1)),
                'A' => Ok(Letter::new(Generator::A, -1)),
                'm' => Ok(Letter::new(Generator::M, 1)),
                'M' => Ok(Letter::new(Generator::M, -1)),
                other => Err(Error::InvalidInput(format!("unknown letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(letters, weight_a, weight_m))
    }

    pub fn weight(&self, g: Generator) -> i64 {
        match g {
            Generator::A => self.weight_a,
            Generator::M => self.weight_m,
        }
    }

    /// `|w|`, the image in `H_1 = Z`.
    pub fn abelianization(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent as i64 * self.weight(l.generator)).sum()
    }
}

impl fmt::Display for Word {
    /// Run-length form, e.g. `amama^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            let power = run as i64 * l.exponent as i64;
            if power == 1 {
                write!(f, "{}", l.generator)?;
            } else {
                write!(f, "{}^{}", l.generator, power)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// The beta relator `w_0 w_1 ... w_{p-1}` of `K(p,q,k)`, where
/// `w_i = ma` if `(i q mod p)` lies in `[1, k]` and `w_i = a` otherwise,
/// with `|a| = k` and `|m| = -p`.
pub fn relator_word(knot: &SimpleKnot) -> Word {
    let (p, q, k) = (knot.p(), knot.q(), knot.k());
    let mut letters = Vec::with_capacity(p as usize + k as usize);
    let mut r = 0u64;
    for _ in 0..p {
        if r >= 1 && r <= k {
            letters.push(Letter::new(Generator::M, 1));
        }
        letters.push(Letter::new(Generator::A, 1));
        r = (r + q) % p;
    }
    Word::new(letters, k as i64, -(p as i64))
}

/// Fox derivative `d_g w`, evaluated in the abelianization.
pub fn free_derivative(word: &Word, generator: Generator) -> LaurentPolynomial {
    let mut terms = Vec::new();
    let mut prefix = 0i64;
    for l in &word.letters {
        let w = word.weight(l.generator);
        if l.generator == generator {
            if l.exponent == 1 {
                terms.push((2 * prefix, 1));
            } else {
                terms.push((2 * (prefix - w), -1));
            }
        }
        prefix += l.exponent as i64 * w;
    }
    LaurentPolynomial::from_doubled_terms(terms)
}

/// `d_a w (t^{|a|} - 1) + d_m w (t^{|m|} - 1) == t^{|w|} - 1`.
pub fn fundamental_formula_check(word: &Word) -> bool {
    let lhs = &(&free_derivative(word, Generator::A) * &LaurentPolynomial::t_power_minus_one(word.weight_a))
        + &(&free_derivative(word, Generator::M) * &LaurentPolynomial::t_power_minus_one(word.weight_m));
    lhs == LaurentPolynomial::t_power_minus_one(word.abelianization())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(p: i64, q: i64, k: i64) -> SimpleKnot {
        SimpleKnot::new(p, q, k).unwrap()
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_doubled_terms(terms.iter().copied())
    }

    #[test]
    fn trefoil_dual_profile() {
        let prof = f_profile(&knot(5, 1, 2));
        assert_eq!(prof.f, vec![0, 2, -1, -4, -2]);
        assert_eq!(prof.width, 6);
        assert_eq!(prof.sorted_doubled_gradings(), vec![6, 2, 0, -2, -6]);
        assert_eq!(prof.genus, Some(1));
        // x_1..x_4, x_0 have gradings 3, 0, -3, -1, 1 in the worked example
        let g = &prof.doubled_gradings;
        assert_eq!([g[1], g[2], g[3], g[4], g[0]], [6, 0, -6, -2, 2]);
    }

    #[test]
    fn other_profiles() {
        let prof = f_profile(&knot(7, 4, 2));
        assert_eq!(prof.f, vec![0, 2, 4, -1, 1, -4, -2]);
        assert_eq!(prof.width, 8);
        assert_eq!(prof.genus, Some(1));

        let prof = f_profile(&knot(4, 1, 1));
        assert_eq!(prof.f, vec![0, 1, -2, -1]);
        assert_eq!(prof.width, 3);
        assert_eq!(prof.genus, Some(0));

        let prof = f_profile(&knot(9, 2, 6));
        assert_eq!(prof.genus, None);
        assert_eq!(prof.f.len(), 9);
    }

    #[test]
    fn core_knots_have_genus_zero() {
        for p in 2..60i64 {
            for q in 1..p {
                if let Ok(kn) = SimpleKnot::new(p, q, 1) {
                    let prof = f_profile(&kn);
                    assert_eq!(prof.width, p as u64 - 1, "{kn}");
                    assert_eq!(prof.genus, Some(0));
                    assert_eq!(alexander_polynomial(&kn).unwrap(), LaurentPolynomial::one());
                }
            }
        }
    }

    #[test]
    fn width_examples() {
        assert_eq!(width(5, 1, 2).unwrap(), 6);
        assert_eq!(width(4, 1, 1).unwrap(), 3);
        assert!(width(22, 15, 9).unwrap() < 44);
        assert!(width(4, 2, 1).is_err());
        assert_eq!(width_below(5, 1, 2, 7), Some(6));
        assert_eq!(width_below(5, 1, 2, 6), None);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_characteristic(&knot(5, 1, 2)).to_string(), "t^-3 + t^-1 + 1 + t + t^3");
        assert_eq!(euler_characteristic(&knot(2, 1, 1)), poly(&[(-1, 1), (1, 1)]));
        assert_eq!(euler_characteristic(&knot(4, 1, 1)), poly(&[(-3, 1), (-1, 1), (1, 1), (3, 1)]));
    }

    #[test]
    fn alexander_polynomials() {
        assert_eq!(alexander_polynomial(&knot(5, 1, 2)).unwrap().to_string(), "t^-1 - 1 + t");
        assert_eq!(alexander_polynomial(&knot(7, 4, 2)).unwrap().to_string(), "t^-1 - 1 + t");
        assert!(matches!(alexander_polynomial(&knot(9, 2, 6)), Err(Error::NotPrimitive { .. })));
    }

    #[test]
    fn relator_words() {
        let w = relator_word(&knot(5, 1, 2));
        assert_eq!(w.to_string(), "amama^3");
        assert_eq!((w.weight_a, w.weight_m), (2, -5));
        assert_eq!(w.abelianization(), 0);
        assert_eq!(relator_word(&knot(2, 1, 1)).to_string(), "ama");
    }

    #[test]
    fn free_derivatives() {
        let w = Word::parse("amamaaa", 2, -5).unwrap();
        assert_eq!(free_derivative(&w, Generator::A), poly(&[(0, 1), (-6, 1), (-12, 1), (-8, 1), (-4, 1)]));
        let w = Word::parse("a", 3, 1).unwrap();
        assert_eq!(free_derivative(&w, Generator::A), LaurentPolynomial::one());
        let w = Word::parse("A", 3, 1).unwrap();
        assert_eq!(free_derivative(&w, Generator::A), poly(&[(-6, -1)]));
        assert!(Word::parse("ab", 1, 1).is_err());
    }

    #[test]
    fn fundamental_formula() {
        assert!(fundamental_formula_check(&relator_word(&knot(5, 1, 2))));
        assert!(fundamental_formula_check(&relator_word(&knot(7, 4, 2))));
        assert!(fundamental_formula_check(&Word::parse("am", 1, 1).unwrap()));
        assert!(fundamental_formula_check(&Word::parse("aMAmaam", 3, -2).unwrap()));
    }
}
