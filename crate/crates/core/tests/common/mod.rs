//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `f(i) = i k - p * #{ 0 <= j < i : (j q mod p) in [1, k] }`, counted
/// directly rather than by stepping.
pub fn oracle_f(p: u64, q: u64, k: u64) -> Vec<i64> {
    (0..p)
        .map(|i| {
            let hits = (0..i).filter(|&j| {
                let r = (j as u128 * q as u128 % p as u128) as u64;
                (1..=k).contains(&r)
            });
            i as i64 * k as i64 - p as i64 * hits.count() as i64
        })
        .collect()
}

pub fn oracle_width(p: u64, q: u64, k: u64) -> u64 {
    let f = oracle_f(p, q, k);
    (f.iter().max().unwrap() - f.iter().min().unwrap()) as u64
}

/// Integer grading of the generator in each Spin^c class, from the oracle
/// profile: symmetric gradings, lowered by 1/2 when they are half-integers.
pub fn oracle_spinc(p: u64, q: u64, k: u64) -> Vec<i64> {
    let f = oracle_f(p, q, k);
    let (lo, hi) = (*f.iter().min().unwrap(), *f.iter().max().unwrap());
    let mut n = vec![None; p as usize];
    for &v in &f {
        let doubled = 2 * v - (lo + hi);
        let g = doubled.div_euclid(2);
        let c = g.rem_euclid(p as i64) as usize;
        assert!(n[c].is_none(), "two generators in one class");
        n[c] = Some(g);
    }
    n.into_iter().map(Option::unwrap).collect()
}

/// Rank over Q of the truncated mapping cone
/// `A_n -> B_n` (iff `n >= n_c`) plus `A_n -> B_{n+m}` (iff `n <= n_c`),
/// with `A_n` for `lo <= n <= hi` and `B_n` for `lo + m <= n <= hi`.
pub fn cone_homology_rank(spinc: &[i64], m: i64) -> u64 {
    let p = spinc.len() as i64;
    let n_c = |n: i64| spinc[n.rem_euclid(p) as usize];
    let (min, max) = (*spinc.iter().min().unwrap(), *spinc.iter().max().unwrap());
    let lo = min - m.abs() - 1;
    let hi = max + m.abs() + 1;
    // A_lo reaches only B_{lo+m} and A_hi only B_hi; everything outside
    // splits off as acyclic pieces
    let b_range: Vec<i64> = ((lo + m).min(hi)..=hi).collect();
    let b_index: HashMap<i64, usize> = b_range.iter().enumerate().map(|(i, &b)| (b, i)).collect();

    let mut columns: Vec<Vec<(usize, i64)>> = Vec::new();
    for n in lo..=hi {
        let mut col = Vec::new();
        if n >= n_c(n) {
            col.push((b_index[&n], 1));
        }
        if n <= n_c(n) {
            col.push((b_index[&(n + m)], 1));
        }
        columns.push(col);
    }
    let rank = sparse_rank(columns);
    (hi - lo + 1) as u64 + b_range.len() as u64 - 2 * rank
}

/// Exact rank over Q of sparse integer column vectors, by elimination on
/// the smallest row index.
pub fn sparse_rank(columns: Vec<Vec<(usize, i64)>>) -> u64 {
    let mut basis: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    let mut rank = 0;
    for col in columns {
        let mut v: std::collections::BTreeMap<usize, i64> = col.into_iter().filter(|&(_, c)| c != 0).collect();
        while let Some((&piv, &c)) = v.iter().next() {
            match basis.get(&piv) {
                None => {
                    basis.insert(piv, v.into_iter().collect());
                    rank += 1;
                    break;
                }
                Some(b) => {
                    let bc = b[0].1;
                    // v <- bc * v - c * b
                    for x in v.values_mut() {
                        *x *= bc;
                    }
                    for &(r, x) in b {
                        *v.entry(r).or_insert(0) -= c * x;
                    }
                    v.retain(|_, x| *x != 0);
                    let g = v.values().fold(0i64, |g, &x| gcd(g as u64, x.unsigned_abs()) as i64);
                    if g > 1 {
                        for x in v.values_mut() {
                            *x /= g;
                        }
                    }
                }
            }
        }
    }
    rank
}

/// Every primitive triple `(p, q, k)` with `q, k` in `[1, p)`, `gcd(q,p) = 1`.
pub fn primitive_triples(max_p: u64) -> impl Iterator<Item = (u64, u64, u64)> {
    (2..=max_p).flat_map(|p| {
        (1..p).filter(move |&q| gcd(q, p) == 1).flat_map(move |q| {
            (1..p).filter(move |&k| gcd(k, p) == 1).map(move |k| (p, q, k))
        })
    })
}

/// `m` in `{1, -1}` with `m = -k^2 q^{-1} (mod p)`.
pub fn homology_sphere_coefficients(p: u64, q: u64, k: u64) -> Vec<i64> {
    let qinv = (1..p).find(|&x| x * q % p == 1).unwrap();
    let a = k * k % p * qinv % p;
    [1i64, -1]
        .into_iter()
        .filter(|&m| (m + a as i64).rem_euclid(p as i64) == 0)
        .collect()
}
