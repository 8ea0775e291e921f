//! Simple knots `K(p,q,k)` in lens spaces and their homological data.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::arith::{check_budget, gcd_u64, inverse_mod, mul_mod, normalized_residue, Residue};
use crate::error::{Error, Result};

/// The simple knot `K(p,q,k)` in `L(p,q)`: an arc from `x_0` to `x_k` in the
/// alpha disk closed up by an arc in the beta disk.
///
/// `q` and `k` are stored reduced to `[0, p)`; `gcd(q,p) = 1` and `k != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleKnot {
    p: u64,
    q: u64,
    k: u64,
}

impl SimpleKnot {
    /// Validates and reduces a raw triple.
    pub fn new(p: i64, q: i64, k: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidLensSpace { p, q });
        }
        let pu = p as u64;
        check_budget(pu)?;
        let qr = normalized_residue(q, pu).value();
        if gcd_u64(qr, pu) != 1 {
            return Err(Error::InvalidLensSpace { p, q });
        }
        let kr = normalized_residue(k, pu).value();
        if kr == 0 {
            return Err(Error::InvalidKnot { p: pu, k });
        }
        Ok(SimpleKnot { p: pu, q: qr, k: kr })
    }

    /// Builds a knot from already-reduced parts without re-validating.
    pub(crate) fn from_reduced(p: u64, q: u64, k: u64) -> Self {
        debug_assert!(p >= 2 && q < p && k > 0 && k < p && gcd_u64(q, p) == 1);
        SimpleKnot { p, q, k }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `q' = q^{-1} mod p`.
    pub fn q_inverse(&self) -> u64 {
        inverse_mod(self.q, self.p).expect("gcd(q,p) = 1 is a type invariant")
    }

    /// `[K] = k [b]` in `H_1(L(p,q)) = Z/p`.
    pub fn homology_class(&self) -> Residue {
        Residue::new(self.k as i64, self.p)
    }

    pub fn is_primitive(&self) -> bool {
        gcd_u64(self.k, self.p) == 1
    }

    pub(crate) fn require_primitive(&self) -> Result<()> {
        if self.is_primitive() {
            Ok(())
        } else {
            Err(Error::NotPrimitive { p: self.p, q: self.q, k: self.k, gcd: gcd_u64(self.k, self.p) })
        }
    }

    /// The representatives `(q,k)`, `(q,-k)`, `(q',kq')`, `(q',-kq')` of this
    /// knot up to orientation reversal, sorted by `(q,k)` with duplicates removed.
    pub fn equivalent_parameter_set(&self) -> Result<Vec<SimpleKnot>> {
        self.require_primitive()?;
        let p = self.p;
        let qi = self.q_inverse();
        let kq = mul_mod(self.k, qi, p);
        let mut set = vec![
            SimpleKnot::from_reduced(p, self.q, self.k),
            SimpleKnot::from_reduced(p, self.q, p - self.k),
            SimpleKnot::from_reduced(p, qi, kq),
            SimpleKnot::from_reduced(p, qi, p - kq),
        ];
        set.sort_by_key(|kn| (kn.q, kn.k));
        set.dedup();
        Ok(set)
    }

    /// Lexicographically smallest `(q,k)` in [`Self::equivalent_parameter_set`].
    ///
    /// This is a dedupe key, not a complete isotopy invariant.
    pub fn canonical_form(&self) -> Result<SimpleKnot> {
        Ok(self.equivalent_parameter_set()?[0])
    }

    /// Numerator `a` of the self-linking number `a/p`, `a = k^2 q' mod p`.
    pub fn self_linking(&self) -> Result<Residue> {
        self.require_primitive()?;
        let p = self.p;
        let a = mul_mod(mul_mod(self.k, self.k, p), self.q_inverse(), p);
        Ok(Residue::new(a as i64, p))
    }

    /// Whether some integer surgery is a homology sphere: `k^2 = +-q (mod p)`.
    pub fn has_integer_zhs_surgery(&self) -> bool {
        let k2 = mul_mod(self.k, self.k, self.p);
        k2 == self.q || k2 == (self.p - self.q) % self.p
    }

    /// Integer surgery coefficients inside `window`.
    pub fn surgery_descriptor(&self, window: RangeInclusive<i64>) -> Result<SurgeryDescriptor> {
        let a = self.self_linking()?;
        let p = self.p as i64;
        let target = (-a).value() as i64;
        let lo = *window.start();
        let hi = *window.end();
        let mut coefficients = Vec::new();
        if lo <= hi {
            // first m >= lo with m = target (mod p)
            let mut m = lo + (target - lo).rem_euclid(p);
            while m <= hi {
                coefficients.push(m);
                m += p;
            }
        }
        Ok(SurgeryDescriptor { a, coefficients })
    }

    /// The coefficients `m = +-1` that are admissible, i.e. the homology-sphere
    /// surgeries.
    pub fn zhs_coefficients(&self) -> Result<Vec<i64>> {
        let d = self.surgery_descriptor(-1..=1)?;
        Ok(d.coefficients.into_iter().filter(|m| m.abs() == 1).collect())
    }

    /// Checks admissibility of an integer surgery coefficient.
    pub fn check_coefficient(&self, m: i64) -> Result<()> {
        let a = self.self_linking()?;
        let required = (-a).value();
        if m == 0 || normalized_residue(m, self.p).value() != required {
            return Err(Error::InvalidCoefficient { m, required, p: self.p });
        }
        Ok(())
    }
}

impl fmt::Display for SimpleKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({},{},{})", self.p, self.q, self.k)
    }
}

/// The self-linking numerator `a` and the integer surgery coefficients
/// `m = -a (mod p)` found in a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryDescriptor {
    pub a: Residue,
    pub coefficients: Vec<i64>,
}

impl SurgeryDescriptor {
    pub fn homology_sphere_coefficients(&self) -> Vec<i64> {
        self.coefficients.iter().copied().filter(|m| m.abs() == 1).collect()
    }
}

/// `a = +-1 (mod p)`; the self-linking form of the homology-sphere criterion.
pub fn self_linking_is_unit_sign(a: Residue) -> bool {
    a.value() == 1 % a.modulus() || a.value() == a.modulus() - 1
}
