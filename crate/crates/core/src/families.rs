//! The Berge families I–X and the Tange families of simple knots with
//! homology-sphere surgeries, as congruences in `(p, k)`.
//!
//! Since `q = +-k^2 (mod p)` whenever `K(p,q,k)` has an integer homology-sphere
//! surgery, a pair `(p, k)` determines the knot. Membership is tested on the
//! four representatives `k, -k, k^{-1}, -k^{-1}` mod `p`; a match on any one
//! suffices.
//!
//! Types I–V depend only on `p mod k^2`. With `k = 1` the modulus is `1` and
//! they match every `p` (the core knots). Type VI is a special case of type V
//! and has no tag of its own. Types XI and XII are IX and X with `j < 0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd_u64, inverse_mod, isqrt, mul_mod};
use crate::error::{Error, Result};
use crate::floer::width_kernel;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    BergeI_II,
    BergeIII,
    BergeIV,
    BergeV,
    BergeVII,
    BergeVIII,
    BergeIX,
    BergeX,
    /// Row of the Tange table, `1..=TANGE_ROWS.len()`.
    Tange(u8),
    TangeSporadic,
}

impl FamilyTag {
    pub fn all() -> Vec<FamilyTag> {
        let mut tags = vec![
            FamilyTag::BergeI_II,
            FamilyTag::BergeIII,
            FamilyTag::BergeIV,
            FamilyTag::BergeV,
            FamilyTag::BergeVII,
            FamilyTag::BergeVIII,
            FamilyTag::BergeIX,
            FamilyTag::BergeX,
        ];
        tags.extend((1..=TANGE_ROWS.len() as u8).map(FamilyTag::Tange));
        tags.push(FamilyTag::TangeSporadic);
        tags
    }

    /// Command-line name, e.g. `berge-ix` or `tange-3`.
    pub fn name(&self) -> String {
        match self {
            FamilyTag::BergeI_II => "berge-i-ii".into(),
            FamilyTag::BergeIII => "berge-iii".into(),
            FamilyTag::BergeIV => "berge-iv".into(),
            FamilyTag::BergeV => "berge-v".into(),
            FamilyTag::BergeVII => "berge-vii".into(),
            FamilyTag::BergeVIII => "berge-viii".into(),
            FamilyTag::BergeIX => "berge-ix".into(),
            FamilyTag::BergeX => "berge-x".into(),
            FamilyTag::Tange(row) => format!("tange-{row}"),
            FamilyTag::TangeSporadic => "tange-sporadic".into(),
        }
    }

    pub fn is_berge(&self) -> bool {
        !matches!(self, FamilyTag::Tange(_) | FamilyTag::TangeSporadic)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        FamilyTag::all()
            .into_iter()
            .find(|t| t.name() == lower)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family tag {s:?}")))
    }
}

/// Which of the four representatives of `k` matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Representative {
    K,
    MinusK,
    KInverse,
    MinusKInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Witness {
    /// Types I/II: `p = i k + sign (mod k^2)`.
    Linear { sign: i8, i: u64 },
    /// Types III–V: `p = sign * X(k) * d (mod k^2)` with `d | N(k)`; `branch`
    /// is 1 or 2 for the two displayed sub-cases.
    Divisor { sign: i8, branch: u8, d: u64 },
    /// Types VII/VIII: `k^2 + linear_sign * k + constant_sign = 0 (mod p)`.
    Quadratic { linear_sign: i8, constant_sign: i8 },
    /// Parametric families: `p = p(j)`, `k = k(j) (mod p)`.
    Parameter { j: i64 },
    Sporadic,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s < 0 { '-' } else { '+' };
        match *self {
            Witness::Linear { sign: s, i } => write!(f, "i={i} sign={}", sign(s)),
            Witness::Divisor { sign: s, branch, d } => write!(f, "branch={branch} d={d} sign={}", sign(s)),
            Witness::Quadratic { linear_sign, constant_sign } => {
                write!(f, "k^2 {} k {} 1", sign(linear_sign), sign(constant_sign))
            }
            Witness::Parameter { j } => write!(f, "j={j}"),
            Witness::Sporadic => write!(f, "sporadic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub tag: FamilyTag,
    pub witness: Witness,
    pub representative: Representative,
    /// The value of the representative, in `[1, p)`.
    pub k_star: u64,
}

impl FamilyMatch {
    /// Re-evaluates the defining relation of `tag` at `(p, k_star)` using only
    /// the witness.
    pub fn verify(&self, p: u64) -> bool {
        let k = self.k_star;
        let k2 = (k as u128 * k as u128) as i128;
        let p_mod = |x: i128| x.rem_euclid(p as i128);
        match (self.tag, self.witness) {
            (FamilyTag::BergeI_II, Witness::Linear { sign, i }) => {
                let g = gcd_u64(i, k);
                (g == 1 || g == 2) && (p as i128 - (i as i128 * k as i128 + sign as i128)).rem_euclid(k2) == 0
            }
            (tag @ (FamilyTag::BergeIII | FamilyTag::BergeIV | FamilyTag::BergeV), Witness::Divisor { sign, branch, d }) => {
                let Some(b) = divisor_branches(tag).get(branch as usize - 1) else { return false };
                let (x, n) = ((b.multiplier)(k as i128), (b.divided)(k as i128));
                n > 0
                    && d > 0
                    && n % d as i128 == 0
                    && (b.side_condition)(n, d as i128)
                    && (p as i128 - sign as i128 * x * d as i128).rem_euclid(k2) == 0
            }
            (FamilyTag::BergeVII | FamilyTag::BergeVIII, Witness::Quadratic { linear_sign, constant_sign }) => {
                let want = if self.tag == FamilyTag::BergeVII { 1 } else { -1 };
                constant_sign == want && p_mod(k2 + linear_sign as i128 * k as i128 + constant_sign as i128) == 0
            }
            (FamilyTag::BergeIX | FamilyTag::BergeX | FamilyTag::Tange(_), Witness::Parameter { j }) => {
                parametric_family(self.tag).is_some_and(|fam| {
                    fam.p_at(j) == p as i128 && p_mod(fam.k_at(j)) == k as i128
                })
            }
            (FamilyTag::TangeSporadic, Witness::Sporadic) => p == SPORADIC.0 && k == SPORADIC.1,
            _ => false,
        }
    }
}

/// `p = a j^2 + b j + c`, `k = d j + e`, with the quadratic relation
/// `Q(k) = x k^2 + y k + z = 0 (mod p)` satisfied by every member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParametricFamily {
    pub p_coeffs: [i64; 3],
    pub k_coeffs: [i64; 2],
    pub q_coeffs: [i64; 3],
}

impl ParametricFamily {
    pub fn p_at(&self, j: i64) -> i128 {
        let [a, b, c] = self.p_coeffs.map(i128::from);
        let j = j as i128;
        a * j * j + b * j + c
    }

    pub fn k_at(&self, j: i64) -> i128 {
        let [d, e] = self.k_coeffs.map(i128::from);
        d * j as i128 + e
    }

    pub fn q_at(&self, k: i128) -> i128 {
        let [x, y, z] = self.q_coeffs.map(i128::from);
        x * k * k + y * k + z
    }

    /// All integers `j` with `p(j) = p`.
    pub fn solve_for_j(&self, p: u64) -> Vec<i64> {
        let [a, b, c] = self.p_coeffs.map(i128::from);
        let disc = b * b - 4 * a * (c - p as i128);
        if disc < 0 {
            return Vec::new();
        }
        let s = isqrt(disc as u64) as i128;
        if s * s != disc {
            return Vec::new();
        }
        let mut roots: Vec<i64> = [-b + s, -b - s]
            .into_iter()
            .filter(|num| num % (2 * a) == 0)
            .map(|num| (num / (2 * a)) as i64)
            .collect();
        roots.dedup();
        roots
    }

    /// The `j` range (inclusive) outside of which `p(j) > max_p`.
    fn j_bounds(&self, max_p: u64) -> (i64, i64) {
        let a = self.p_coeffs[0] as u64;
        let r = isqrt(max_p / a + 1) as i64 + 2;
        (-r, r)
    }
}

pub const BERGE_IX: ParametricFamily =
    ParametricFamily { p_coeffs: [22, 9, 1], k_coeffs: [11, 2], q_coeffs: [2, 1, 1] };
pub const BERGE_X: ParametricFamily =
    ParametricFamily { p_coeffs: [22, 13, 2], k_coeffs: [11, 3], q_coeffs: [2, 1, 1] };

const fn row(p: [i64; 3], k: [i64; 2], q: [i64; 3]) -> ParametricFamily {
    ParametricFamily { p_coeffs: p, k_coeffs: k, q_coeffs: q }
}

/// Tange's families, read left to right, top to bottom.
pub const TANGE_ROWS: [ParametricFamily; 19] = [
    row([14, 7, 1], [7, 2], [2, -1, 1]),
    row([20, 15, 3], [5, 2], [4, -1, 1]),
    row([30, 9, 1], [6, 1], [5, -1, 2]),
    row([42, 23, 3], [7, 2], [6, -1, -1]),
    row([42, 47, 13], [7, 4], [6, -1, -1]),
    row([52, 15, 1], [13, 2], [4, -1, -1]),
    row([52, 63, 19], [13, 8], [4, -1, -1]),
    row([54, 15, 1], [27, 4], [2, -1, -1]),
    row([54, 39, 7], [27, 10], [2, -1, -1]),
    row([69, 17, 1], [23, 3], [3, -1, -1]),
    row([69, 29, 3], [23, 5], [3, -1, -1]),
    row([85, 19, 1], [17, 2], [5, -1, -1]),
    row([85, 49, 7], [17, 5], [5, -1, -1]),
    row([99, 35, 3], [11, 2], [9, -1, -1]),
    row([99, 53, 7], [11, 3], [9, -1, -1]),
    row([120, 16, 1], [12, 1], [5, -2, 3]),
    row([120, 104, 22], [12, 5], [5, 2, -3]),
    row([120, 20, 1], [20, 2], [3, -2, 2]),
    row([120, 36, 3], [12, 2], [5, -2, 2]),
];

/// The knot `K(191, 34, 15)`, which lies in no Tange family.
pub const SPORADIC: (u64, u64) = (191, 15);

pub fn parametric_family(tag: FamilyTag) -> Option<&'static ParametricFamily> {
    match tag {
        FamilyTag::BergeIX => Some(&BERGE_IX),
        FamilyTag::BergeX => Some(&BERGE_X),
        FamilyTag::Tange(row) if (1..=TANGE_ROWS.len() as u8).contains(&row) => Some(&TANGE_ROWS[row as usize - 1]),
        _ => None,
    }
}

/// One displayed sub-case of types III–V:
/// `p = +-multiplier(k) * d (mod k^2)` with `d | divided(k)` and a side condition.
struct DivisorBranch {
    multiplier: fn(i128) -> i128,
    divided: fn(i128) -> i128,
    side_condition: fn(i128, i128) -> bool,
}

fn any_d(_: i128, _: i128) -> bool {
    true
}

fn odd_cofactor(n: i128, d: i128) -> bool {
    (n / d) % 2 == 1
}

fn odd_divisor(_: i128, d: i128) -> bool {
    d % 2 == 1
}

static TYPE_III: [DivisorBranch; 2] = [
    DivisorBranch { multiplier: |k| 2 * k - 1, divided: |k| k + 1, side_condition: odd_cofactor },
    DivisorBranch { multiplier: |k| 2 * k + 1, divided: |k| k - 1, side_condition: odd_cofactor },
];
static TYPE_IV: [DivisorBranch; 2] = [
    DivisorBranch { multiplier: |k| k - 1, divided: |k| 2 * k + 1, side_condition: any_d },
    DivisorBranch { multiplier: |k| k + 1, divided: |k| 2 * k - 1, side_condition: any_d },
];
static TYPE_V: [DivisorBranch; 2] = [
    DivisorBranch { multiplier: |k| k + 1, divided: |k| k + 1, side_condition: odd_divisor },
    DivisorBranch { multiplier: |k| k - 1, divided: |k| k - 1, side_condition: odd_divisor },
];

fn divisor_branches(tag: FamilyTag) -> &'static [DivisorBranch] {
    match tag {
        FamilyTag::BergeIII => &TYPE_III,
        FamilyTag::BergeIV => &TYPE_IV,
        FamilyTag::BergeV => &TYPE_V,
        _ => &[],
    }
}

const DIVISOR_TAGS: [FamilyTag; 3] = [FamilyTag::BergeIII, FamilyTag::BergeIV, FamilyTag::BergeV];

/// Options for the Tange families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOptions {
    /// Admit `j < 0` in the Tange rows. Berge IX/X always admit it.
    pub tange_negative_j: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { tange_negative_j: true }
    }
}

fn check_pair(p: u64, k: u64) -> Result<()> {
    if p < 2 || k == 0 || k >= p {
        return Err(Error::InvalidInput(format!("need p >= 2 and 1 <= k <= p-1, got p={p}, k={k}")));
    }
    crate::arith::check_budget(p)?;
    if gcd_u64(k, p) != 1 {
        return Err(Error::InvalidInput(format!("gcd(k,p) must be 1, got p={p}, k={k}")));
    }
    Ok(())
}

/// The distinct representatives `k, -k, k^{-1}, -k^{-1}` mod `p`.
pub fn representatives(p: u64, k: u64) -> Vec<(Representative, u64)> {
    let inv = inverse_mod(k, p).expect("gcd(k,p) = 1");
    let mut reps: Vec<(Representative, u64)> = Vec::with_capacity(4);
    for (r, v) in [
        (Representative::K, k),
        (Representative::MinusK, p - k),
        (Representative::KInverse, inv),
        (Representative::MinusKInverse, p - inv),
    ] {
        if !reps.iter().any(|&(_, w)| w == v) {
            reps.push((r, v));
        }
    }
    reps
}

/// Types I–V at a single representative.
fn berge_solid_torus_matches(p: u64, k: u64, out: &mut Vec<(FamilyTag, Witness)>) {
    let k2 = k as u128 * k as u128;
    let r = (p as u128 % k2) as i128;
    let k2 = k2 as i128;
    let ki = k as i128;
    for sign in [1i8, -1] {
        let diff = (r - sign as i128).rem_euclid(k2);
        if diff % ki == 0 {
            let i = ((diff / ki) % ki) as u64;
            let g = gcd_u64(i, k);
            if g == 1 || g == 2 {
                out.push((FamilyTag::BergeI_II, Witness::Linear { sign, i }));
            }
        }
    }
    for tag in DIVISOR_TAGS {
        for (bi, b) in divisor_branches(tag).iter().enumerate() {
            let n = (b.divided)(ki);
            if n <= 0 {
                continue;
            }
            let x = (b.multiplier)(ki);
            for d in divisors(n as u64) {
                let di = d as i128;
                if !(b.side_condition)(n, di) {
                    continue;
                }
                let base = (x * di).rem_euclid(k2);
                for sign in [1i8, -1] {
                    let target = if sign == 1 { base } else { (-base).rem_euclid(k2) };
                    if target == r {
                        out.push((tag, Witness::Divisor { sign, branch: bi as u8 + 1, d }));
                    }
                }
            }
        }
    }
}

fn exceptional_quadratic_matches(p: u64, k: u64, out: &mut Vec<(FamilyTag, Witness)>) {
    let k2 = mul_mod(k, k, p) as i128;
    for linear_sign in [1i8, -1] {
        for constant_sign in [1i8, -1] {
            if (k2 + linear_sign as i128 * k as i128 + constant_sign as i128).rem_euclid(p as i128) == 0 {
                let tag = if constant_sign == 1 { FamilyTag::BergeVII } else { FamilyTag::BergeVIII };
                out.push((tag, Witness::Quadratic { linear_sign, constant_sign }));
            }
        }
    }
}

fn parametric_matches(fam: &ParametricFamily, tag: FamilyTag, p: u64, k: u64, allow_negative: bool) -> Vec<(FamilyTag, Witness)> {
    fam.solve_for_j(p)
        .into_iter()
        .filter(|&j| allow_negative || j >= 0)
        .filter(|&j| fam.k_at(j).rem_euclid(p as i128) == k as i128)
        .map(|j| (tag, Witness::Parameter { j }))
        .collect()
}

fn collect_matches(p: u64, k: u64, per_rep: impl Fn(u64, &mut Vec<(FamilyTag, Witness)>)) -> Vec<FamilyMatch> {
    let mut matches = Vec::new();
    let mut buf = Vec::new();
    for (representative, k_star) in representatives(p, k) {
        buf.clear();
        per_rep(k_star, &mut buf);
        matches.extend(buf.drain(..).map(|(tag, witness)| FamilyMatch { tag, witness, representative, k_star }));
    }
    matches
}

/// All Berge matches (types I–X) of `(p, k)`.
pub fn berge_match(p: u64, k: u64) -> Result<Vec<FamilyMatch>> {
    check_pair(p, k)?;
    Ok(collect_matches(p, k, |ks, out| {
        berge_solid_torus_matches(p, ks, out);
        exceptional_quadratic_matches(p, ks, out);
        out.extend(parametric_matches(&BERGE_IX, FamilyTag::BergeIX, p, ks, true));
        out.extend(parametric_matches(&BERGE_X, FamilyTag::BergeX, p, ks, true));
    }))
}

/// All Tange matches of `(p, k)`, including the sporadic knot.
pub fn tange_match(p: u64, k: u64, opts: MatchOptions) -> Result<Vec<FamilyMatch>> {
    check_pair(p, k)?;
    Ok(collect_matches(p, k, |ks, out| {
        for (i, fam) in TANGE_ROWS.iter().enumerate() {
            out.extend(parametric_matches(fam, FamilyTag::Tange(i as u8 + 1), p, ks, opts.tange_negative_j));
        }
        if (p, ks) == SPORADIC {
            out.push((FamilyTag::TangeSporadic, Witness::Sporadic));
        }
    }))
}

pub fn all_matches(p: u64, k: u64, opts: MatchOptions) -> Result<Vec<FamilyMatch>> {
    let mut m = berge_match(p, k)?;
    m.extend(tange_match(p, k, opts)?);
    Ok(m)
}

/// Every `(p, k)` with `2 <= p <= max_p`, `1 <= k < p`, `gcd(k,p) = 1`
/// produced by the parameterization of `tag`, sorted and deduplicated.
pub fn enumerate_family(tag: FamilyTag, max_p: u64, opts: MatchOptions) -> Result<Vec<(u64, u64)>> {
    if matches!(tag, FamilyTag::Tange(row) if !(1..=TANGE_ROWS.len() as u8).contains(&row)) {
        return Err(Error::InvalidInput(format!("no Tange row {tag}")));
    }
    let mut out = BTreeSet::new();
    if max_p < 2 {
        return Ok(Vec::new());
    }
    let mut push = |p: u64, k: u64| {
        if p >= 2 && p <= max_p && !k.is_multiple_of(p) && gcd_u64(k % p, p) == 1 {
            out.insert((p, k % p));
        }
    };
    match tag {
        FamilyTag::BergeI_II | FamilyTag::BergeIII | FamilyTag::BergeIV | FamilyTag::BergeV => {
            for k in 1..max_p {
                let k2 = k * k;
                for c in solid_torus_residues(tag, k, max_p) {
                    let mut p = c;
                    while p <= max_p {
                        if p > k {
                            push(p, k);
                        }
                        p += k2;
                    }
                }
            }
        }
        FamilyTag::BergeVII | FamilyTag::BergeVIII => {
            let constant: i128 = if tag == FamilyTag::BergeVII { 1 } else { -1 };
            for p in 2..=max_p {
                for k in 1..p {
                    let k = k as i128;
                    if [k * k + k + constant, k * k - k + constant].iter().any(|v| v.rem_euclid(p as i128) == 0) {
                        push(p, k as u64);
                    }
                }
            }
        }
        FamilyTag::BergeIX | FamilyTag::BergeX | FamilyTag::Tange(_) => {
            let fam = parametric_family(tag).expect("checked above");
            let negative = !matches!(tag, FamilyTag::Tange(_)) || opts.tange_negative_j;
            let (lo, hi) = fam.j_bounds(max_p);
            for j in (if negative { lo } else { 0 })..=hi {
                let p = fam.p_at(j);
                if p >= 2 && p <= max_p as i128 {
                    let k = fam.k_at(j).rem_euclid(p) as u64;
                    push(p as u64, k);
                }
            }
        }
        FamilyTag::TangeSporadic => push(SPORADIC.0, SPORADIC.1),
    }
    Ok(out.into_iter().collect())
}

/// Residues `c mod k^2` (with `c <= max_p`) for which `p = c (mod k^2)`
/// puts `(p, k)` in a solid-torus family. With `tag = None` all of I–V.
fn solid_torus_residues(tag: FamilyTag, k: u64, max_p: u64) -> Vec<u64> {
    let k2 = k as u128 * k as u128;
    let mut res = Vec::new();
    let mut keep = |c: u128| {
        if c <= max_p as u128 {
            res.push(c as u64);
        }
    };
    if tag == FamilyTag::BergeI_II {
        // c = i k + 1 for 0 <= i < k, and c = i k - 1 (i >= 1) or k^2 - 1 (i = 0)
        let i_max = (k - 1).min(max_p / k + 1);
        for i in 0..=i_max {
            let g = gcd_u64(i, k);
            if g != 1 && g != 2 {
                continue;
            }
            keep((i as u128 * k as u128 + 1) % k2);
            keep(if i == 0 { k2 - 1 } else { i as u128 * k as u128 - 1 });
        }
    } else {
        for b in divisor_branches(tag) {
            let n = (b.divided)(k as i128);
            if n <= 0 {
                continue;
            }
            let x = (b.multiplier)(k as i128);
            for d in divisors(n as u64) {
                if !(b.side_condition)(n, d as i128) {
                    continue;
                }
                let base = (x * d as i128).rem_euclid(k2 as i128) as u128;
                keep(base);
                keep((k2 - base) % k2);
            }
        }
    }
    res.sort_unstable();
    res.dedup();
    res
}

/// Precomputed family membership for every `p <= max_p`, built from the
/// parameterizations rather than the predicates. Used by the sweep.
pub struct FamilyIndex {
    max_p: u64,
    opts: MatchOptions,
    /// `solid_torus[k]`: sorted residues mod `k^2` (capped at `max_p`) of types I–V.
    solid_torus: Vec<Vec<u64>>,
    /// `parametric[p]`: values of `k` from IX, X, the Tange rows and the sporadic knot.
    parametric: Vec<Vec<u64>>,
}

impl FamilyIndex {
    pub fn new(max_p: u64, opts: MatchOptions) -> Self {
        let mut solid_torus = vec![Vec::new(); max_p.max(1) as usize];
        for k in 1..max_p {
            let mut all = Vec::new();
            for tag in [FamilyTag::BergeI_II, FamilyTag::BergeIII, FamilyTag::BergeIV, FamilyTag::BergeV] {
                all.extend(solid_torus_residues(tag, k, max_p));
            }
            all.sort_unstable();
            all.dedup();
            solid_torus[k as usize] = all;
        }
        let mut parametric = vec![Vec::new(); max_p as usize + 1];
        let mut tags = vec![FamilyTag::BergeIX, FamilyTag::BergeX, FamilyTag::TangeSporadic];
        tags.extend((1..=TANGE_ROWS.len() as u8).map(FamilyTag::Tange));
        for tag in tags {
            for (p, k) in enumerate_family(tag, max_p, opts).expect("valid tag") {
                parametric[p as usize].push(k);
            }
        }
        for ks in &mut parametric {
            ks.sort_unstable();
            ks.dedup();
        }
        FamilyIndex { max_p, opts, solid_torus, parametric }
    }

    pub fn max_p(&self) -> u64 {
        self.max_p
    }

    pub fn options(&self) -> MatchOptions {
        self.opts
    }

    /// Whether `k` itself (not its other representatives) satisfies some
    /// family relation for this `p`.
    #[inline]
    pub fn direct_member(&self, p: u64, k: u64) -> bool {
        let k2 = k as u128 * k as u128;
        let r = (p as u128 % k2) as u64;
        if self.solid_torus[k as usize].binary_search(&r).is_ok() {
            return true;
        }
        let q = mul_mod(k, k, p);
        let (qk1, qk2) = ((q + k) % p, (q + p - k) % p);
        // k^2 +- k + 1 = 0 or k^2 +- k - 1 = 0 (mod p)
        if (qk1 + 1) % p == 0 || (qk2 + 1) % p == 0 || qk1 == 1 % p || qk2 == 1 % p {
            return true;
        }
        self.parametric[p as usize].binary_search(&k).is_ok()
    }

    /// Membership of the knot `(p, k)` through any of its representatives.
    pub fn is_member(&self, p: u64, k: u64) -> bool {
        debug_assert!(p <= self.max_p);
        let inv = inverse_mod(k, p).expect("gcd(k,p) = 1");
        self.direct_member(p, k)
            || self.direct_member(p, p - k)
            || self.direct_member(p, inv)
            || self.direct_member(p, p - inv)
    }
}

/// The family tables as a JSON document (coefficients only).
pub fn tables_json() -> serde_json::Value {
    let branch = |tag: FamilyTag| -> Vec<serde_json::Value> {
        let text: [(&str, &str, &str); 2] = match tag {
            FamilyTag::BergeIII => [("2k-1", "k+1", "(k+1)/d odd"), ("2k+1", "k-1", "(k-1)/d odd")],
            FamilyTag::BergeIV => [("k-1", "2k+1", "none"), ("k+1", "2k-1", "none")],
            _ => [("k+1", "k+1", "d odd"), ("k-1", "k-1", "d odd")],
        };
        text.iter()
            .map(|(x, n, c)| serde_json::json!({"residue": format!("+-({x})d mod k^2"), "d_divides": n, "condition": c}))
            .collect()
    };
    let para = |tag: FamilyTag, fam: &ParametricFamily| {
        serde_json::json!({"tag": tag.name(), "p": fam.p_coeffs, "k": fam.k_coeffs, "q": fam.q_coeffs})
    };
    serde_json::json!({
        "version": 1,
        "berge_i_ii": {"residue": "i k +- 1 mod k^2", "gcd_i_k": [1, 2]},
        "berge_iii": branch(FamilyTag::BergeIII),
        "berge_iv": branch(FamilyTag::BergeIV),
        "berge_v": branch(FamilyTag::BergeV),
        "berge_vii": "k^2 +- k + 1 = 0 mod p",
        "berge_viii": "k^2 +- k - 1 = 0 mod p",
        "berge_ix": para(FamilyTag::BergeIX, &BERGE_IX),
        "berge_x": para(FamilyTag::BergeX, &BERGE_X),
        "tange": TANGE_ROWS.iter().enumerate().map(|(i, f)| para(FamilyTag::Tange(i as u8 + 1), f)).collect::<Vec<_>>(),
        "sporadic": {"p": SPORADIC.0, "k": SPORADIC.1},
    })
}

/// Family matches of `(p, k)` together with the width verdict for
/// `K(p, k^2, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub p: u64,
    pub k: u64,
    pub q: u64,
    pub matches: Vec<FamilyMatch>,
    pub width: u64,
    pub genus: u64,
    /// `width < 2p`.
    pub width_below_2p: bool,
    /// Membership and the width criterion agree.
    pub consistent: bool,
}

impl ClassifyReport {
    pub fn tags(&self) -> Vec<FamilyTag> {
        let set: BTreeSet<_> = self.matches.iter().map(|m| m.tag).collect();
        set.into_iter().collect()
    }
}

pub fn classify(p: u64, k: u64, opts: MatchOptions) -> Result<ClassifyReport> {
    let matches = all_matches(p, k, opts)?;
    let q = mul_mod(k, k, p);
    let width = width_kernel(p, q, k);
    let width_below_2p = width < 2 * p;
    Ok(ClassifyReport {
        p,
        k,
        q,
        genus: (width + 1 - p) / 2,
        consistent: width_below_2p == !matches.is_empty(),
        matches,
        width,
        width_below_2p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(matches: &[FamilyMatch]) -> BTreeSet<FamilyTag> {
        matches.iter().map(|m| m.tag).collect()
    }

    #[test]
    fn exceptional_berge_examples() {
        let m = berge_match(7, 2).unwrap();
        assert!(m.iter().any(|x| x.tag == FamilyTag::BergeVII && x.representative == Representative::K));

        let m = berge_match(32, 13).unwrap();
        assert!(m.contains(&FamilyMatch {
            tag: FamilyTag::BergeIX,
            witness: Witness::Parameter { j: 1 },
            representative: Representative::K,
            k_star: 13,
        }));

        let m = berge_match(5, 2).unwrap();
        assert!(m.iter().any(|x| x.tag == FamilyTag::BergeVIII
            && x.k_star == 2
            && x.witness == Witness::Quadratic { linear_sign: 1, constant_sign: -1 }));
    }

    #[test]
    fn tange_examples() {
        let opts = MatchOptions::default();
        let m = tange_match(22, 9, opts).unwrap();
        assert!(m.iter().any(|x| x.tag == FamilyTag::Tange(1) && x.witness == Witness::Parameter { j: 1 }));
        let m = tange_match(38, 7, opts).unwrap();
        assert!(m.iter().any(|x| x.tag == FamilyTag::Tange(2) && x.witness == Witness::Parameter { j: 1 }));
        let m = tange_match(191, 15, opts).unwrap();
        assert!(tags(&m).contains(&FamilyTag::TangeSporadic));
        // the representatives of 15 mod 191 see the sporadic knot too
        let inv = inverse_mod(15, 191).unwrap();
        for k in [191 - 15, inv, 191 - inv] {
            assert!(tags(&tange_match(191, k, opts).unwrap()).contains(&FamilyTag::TangeSporadic));
        }
    }

    #[test]
    fn negative_j_switch() {
        // row 1 at j = -1: p = 8, k = -5 = 3
        let all = MatchOptions { tange_negative_j: true };
        let nonneg = MatchOptions { tange_negative_j: false };
        assert!(tags(&tange_match(8, 3, all).unwrap()).contains(&FamilyTag::Tange(1)));
        assert!(!tags(&tange_match(8, 3, nonneg).unwrap()).contains(&FamilyTag::Tange(1)));
    }

    #[test]
    fn invalid_pairs() {
        assert!(berge_match(9, 3).is_err());
        assert!(berge_match(9, 0).is_err());
        assert!(berge_match(9, 9).is_err());
        assert!(tange_match(1, 1, MatchOptions::default()).is_err());
    }

    #[test]
    fn core_knots_are_berge() {
        for p in 2..50 {
            assert!(tags(&berge_match(p, 1).unwrap()).contains(&FamilyTag::BergeI_II));
        }
    }

    #[test]
    fn enumerations() {
        let opts = MatchOptions::default();
        let ix = enumerate_family(FamilyTag::BergeIX, 40, opts).unwrap();
        assert!(ix.contains(&(32, 13)));
        assert!(ix.contains(&(14, 5)));
        let t1 = enumerate_family(FamilyTag::Tange(1), 60, opts).unwrap();
        assert!(t1.contains(&(22, 9)));
        assert!(t1.contains(&(8, 3)));
        for tag in FamilyTag::all() {
            assert!(enumerate_family(tag, 1, opts).unwrap().is_empty());
        }
        assert!(enumerate_family(FamilyTag::Tange(0), 10, opts).is_err());
        assert!(enumerate_family(FamilyTag::Tange(20), 10, opts).is_err());
    }

    #[test]
    fn tables_export() {
        let v = tables_json();
        assert_eq!(v["tange"].as_array().unwrap().len(), TANGE_ROWS.len());
        assert_eq!(v["tange"][0]["p"], serde_json::json!([14, 7, 1]));
        assert_eq!(v["sporadic"]["p"], 191);
    }

    #[test]
    fn representative_closure() {
        let opts = MatchOptions::default();
        for p in 2..150u64 {
            for k in 1..p {
                if gcd_u64(k, p) != 1 {
                    continue;
                }
                let base = tags(&all_matches(p, k, opts).unwrap());
                let inv = inverse_mod(k, p).unwrap();
                for other in [p - k, inv, p - inv] {
                    assert_eq!(tags(&all_matches(p, other, opts).unwrap()), base, "p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn tag_names_parse() {
        for tag in FamilyTag::all() {
            assert_eq!(tag.name().parse::<FamilyTag>().unwrap(), tag);
        }
        assert!("berge-vi".parse::<FamilyTag>().is_err());
    }

    #[test]
    fn tange_q_relations() {
        for (row, fam) in TANGE_ROWS.iter().enumerate() {
            for j in -60i64..=60 {
                let p = fam.p_at(j);
                if !(2..=10_000).contains(&p) {
                    continue;
                }
                assert_eq!(fam.q_at(fam.k_at(j)).rem_euclid(p), 0, "row {} j={j}", row + 1);
            }
        }
        // row 1 at j = 1: 2*81 - 9 + 1 = 154 = 7 * 22
        assert_eq!(TANGE_ROWS[0].q_at(9), 154);
    }

    #[test]
    fn witnesses_verify() {
        let opts = MatchOptions::default();
        for p in 2..200u64 {
            for k in 1..p {
                if gcd_u64(k, p) != 1 {
                    continue;
                }
                for m in all_matches(p, k, opts).unwrap() {
                    assert!(m.verify(p), "p={p} k={k} {m:?}");
                }
            }
        }
    }

    #[test]
    fn index_agrees_with_predicates() {
        let opts = MatchOptions::default();
        let index = FamilyIndex::new(400, opts);
        for p in 2..=400u64 {
            for k in 1..p {
                if gcd_u64(k, p) != 1 {
                    continue;
                }
                let direct = !all_matches(p, k, opts).unwrap().is_empty();
                assert_eq!(index.is_member(p, k), direct, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let opts = MatchOptions::default();
        let r = classify(7, 2, opts).unwrap();
        assert!(r.tags().contains(&FamilyTag::BergeVII));
        assert_eq!((r.width, r.genus), (8, 1));
        assert!(r.width_below_2p && r.consistent);

        let r = classify(191, 15, opts).unwrap();
        assert!(r.tags().contains(&FamilyTag::TangeSporadic));
        assert!(r.width < 382 && r.consistent);

        let r = classify(22, 9, opts).unwrap();
        assert!(r.tags().contains(&FamilyTag::Tange(1)));
        assert!(r.width < 44 && r.consistent);
    }
}
