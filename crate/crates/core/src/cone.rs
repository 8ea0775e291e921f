//! Mapping-cone rank of integer surgeries on knots whose knot Floer homology
//! is `Z^p`, one generator per Spin^c structure.
//!
//! Every simple knot in a lens space has this shape. The model is **not**
//! valid for knots with more than one generator in some Spin^c structure.
//!
//! For each residue `c` mod `p` there is a unique grading `n_c = c (mod p)`
//! carrying the generator. In the cone `C(K,m)` every `A_n` and `B_n` is `Z`,
//! `pi+_n : A_n -> B_n` is an isomorphism iff `n >= n_c` and
//! `pi-_n : A_n -> B_{n+m}` is an isomorphism iff `n <= n_c` (with `c = n mod p`).
//! Label `A_n` with `+` (only `pi+`), `-` (only `pi-`) or `o` (both). The
//! complex splits into path-shaped summands spanning consecutive non-`o`
//! labels; `[-,+]` and `[+,-]` summands carry one `Z` each, `[+,+]` and `[-,-]`
//! are acyclic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::floer::f_profile;
use crate::knot::SimpleKnot;

/// `n[c]` is the grading of the generator in Spin^c class `c`.
///
/// For odd `p` these are the symmetric Alexander gradings. For even `p` the
/// symmetric gradings are half-integers; they are lifted to integers by
/// subtracting `1/2`. A common shift does not change any surgery rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpincProfile {
    pub p: u64,
    pub n: Vec<i64>,
}

impl SpincProfile {
    /// Builds a profile from gradings that are pairwise distinct mod `p`.
    pub fn from_gradings(p: u64, gradings: impl IntoIterator<Item = i64>) -> Self {
        let mut n = vec![None; p as usize];
        for g in gradings {
            let c = g.rem_euclid(p as i64) as usize;
            assert!(n[c].is_none(), "two generators in Spin^c class {c}");
            n[c] = Some(g);
        }
        let n = n.into_iter().map(|v| v.expect("one generator per Spin^c class")).collect();
        SpincProfile { p, n }
    }

    pub fn grading(&self, class: u64) -> i64 {
        self.n[class as usize]
    }

    /// Grading of the generator in the class of `n`.
    #[inline]
    pub fn grading_of_class_of(&self, n: i64) -> i64 {
        self.n[n.rem_euclid(self.p as i64) as usize]
    }

    pub fn min(&self) -> i64 {
        *self.n.iter().min().expect("p >= 2")
    }

    pub fn max(&self) -> i64 {
        *self.n.iter().max().expect("p >= 2")
    }

    /// Profile of the mirror knot: every grading negated.
    pub fn mirror(&self) -> Self {
        SpincProfile::from_gradings(self.p, self.n.iter().map(|&g| -g))
    }

    pub fn label(&self, n: i64) -> Label {
        let nc = self.grading_of_class_of(n);
        match n.cmp(&nc) {
            std::cmp::Ordering::Greater => Label::Plus,
            std::cmp::Ordering::Less => Label::Minus,
            std::cmp::Ordering::Equal => Label::Both,
        }
    }
}

pub fn spinc_profile(knot: &SimpleKnot) -> Result<SpincProfile> {
    knot.require_primitive()?;
    let prof = f_profile(knot);
    let shift = (prof.max() + prof.min() + 1).div_euclid(2);
    Ok(SpincProfile::from_gradings(knot.p(), prof.f.iter().map(|&v| v - shift)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// `pi+` nontrivial, `pi-` zero.
    Plus,
    /// `pi-` nontrivial, `pi+` zero.
    Minus,
    /// Both nontrivial.
    Both,
}

impl Label {
    pub fn symbol(self) -> char {
        match self {
            Label::Plus => '+',
            Label::Minus => '-',
            Label::Both => 'o',
        }
    }
}

/// A connected summand spanning `A_start ..= A_end` (step `|m|`), whose two
/// ends are non-`o` and whose interior is all `o`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub start: i64,
    pub end: i64,
    pub left: Label,
    pub right: Label,
}

impl Summand {
    pub fn rank(&self) -> u64 {
        matches!((self.left, self.right), (Label::Minus, Label::Plus) | (Label::Plus, Label::Minus)) as u64
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}] at {}..={}", self.left.symbol(), self.right.symbol(), self.start, self.end)
    }
}

/// The label walk of one Spin^c structure of the surgery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWalk {
    /// Residue of `n` mod `|m|`.
    pub class: u64,
    /// Indices `n` in the window with `n = class (mod |m|)`, ascending.
    pub indices: Vec<i64>,
    pub labels: Vec<Label>,
    pub summands: Vec<Summand>,
    pub rank: u64,
}

impl ClassWalk {
    pub fn label_string(&self) -> String {
        self.labels.iter().map(|l| l.symbol()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDiagram {
    pub m: i64,
    /// True when `m < 0` and the walk was run on the mirror with `-m`.
    pub mirrored: bool,
    /// Inclusive window `[lo, hi]` of `A_n` indices that was walked.
    pub window: (i64, i64),
    pub classes: Vec<ClassWalk>,
    pub rank: u64,
}

/// Runs the label walk for a positive coefficient over `[lo, hi]`.
///
/// The window must extend past `min n_c - m` and `max n_c + m`, so that every
/// class has a pure `-` on the left and a pure `+` on the right.
pub fn walk(profile: &SpincProfile, m: u64, lo: i64, hi: i64) -> ConeDiagram {
    assert!(m > 0);
    let step = m as i64;
    let mut classes = Vec::with_capacity(m as usize);
    let mut rank = 0;
    for class in 0..m {
        let first = lo + (class as i64 - lo).rem_euclid(step);
        let mut indices = Vec::new();
        let mut labels = Vec::new();
        let mut n = first;
        while n <= hi {
            indices.push(n);
            labels.push(profile.label(n));
            n += step;
        }
        let mut summands = Vec::new();
        let mut prev: Option<usize> = None;
        for (i, &l) in labels.iter().enumerate() {
            if l == Label::Both {
                continue;
            }
            if let Some(j) = prev {
                summands.push(Summand { start: indices[j], end: indices[i], left: labels[j], right: l });
            }
            prev = Some(i);
        }
        let class_rank = summands.iter().map(Summand::rank).sum();
        rank += class_rank;
        classes.push(ClassWalk { class, indices, labels, summands, rank: class_rank });
    }
    ConeDiagram { m: m as i64, mirrored: false, window: (lo, hi), classes, rank }
}

/// Default walking window for coefficient magnitude `m`.
pub fn default_window(profile: &SpincProfile, m: u64) -> (i64, i64) {
    (profile.min() - m as i64, profile.max() + m as i64)
}

/// Builds the cone diagram of `m`-surgery; negative `m` is handled on the
/// mirror knot with `-m`.
pub fn cone_diagram(knot: &SimpleKnot, m: i64) -> Result<ConeDiagram> {
    knot.check_coefficient(m)?;
    let profile = spinc_profile(knot)?;
    Ok(diagram_for_profile(&profile, m))
}

pub fn diagram_for_profile(profile: &SpincProfile, m: i64) -> ConeDiagram {
    assert!(m != 0);
    let mag = m.unsigned_abs();
    if m > 0 {
        let (lo, hi) = default_window(profile, mag);
        walk(profile, mag, lo, hi)
    } else {
        let mirror = profile.mirror();
        let (lo, hi) = default_window(&mirror, mag);
        let mut d = walk(&mirror, mag, lo, hi);
        d.m = m;
        d.mirrored = true;
        d
    }
}

/// Rank of `HF-hat` of the `m`-surgery.
pub fn surgery_rank(knot: &SimpleKnot, m: i64) -> Result<u64> {
    Ok(cone_diagram(knot, m)?.rank)
}

/// Whether `m`-surgery is an L-space, i.e. has rank `|m|`.
pub fn is_lspace_surgery(knot: &SimpleKnot, m: i64) -> Result<bool> {
    Ok(surgery_rank(knot, m)? == m.unsigned_abs())
}
