mod common;

use lensknot::arith::{gcd_u64, inverse_mod};
use lensknot::floer::{alexander_polynomial, euler_characteristic, f_profile, fundamental_formula_check, relator_word, width_below, width_kernel};
use lensknot::knot::self_linking_is_unit_sign;
use lensknot::{LaurentPolynomial, SimpleKnot};
use proptest::prelude::*;

const CASES: u32 = 10_000;

fn primitive_triple(max_p: u64) -> impl Strategy<Value = (u64, u64, u64)> {
    (2..=max_p)
        .prop_flat_map(|p| (Just(p), 1..p, 1..p))
        .prop_filter("gcd(q,p) = gcd(k,p) = 1", |&(p, q, k)| gcd_u64(q, p) == 1 && gcd_u64(k, p) == 1)
}

fn knot(p: u64, q: u64, k: u64) -> SimpleKnot {
    SimpleKnot::new(p as i64, q as i64, k as i64).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn width_parameter_symmetries((p, q, k) in primitive_triple(5000)) {
        let w = width_kernel(p, q, k);
        let qi = inverse_mod(q, p).unwrap();
        prop_assert_eq!(width_kernel(p, q, p - k), w);
        prop_assert_eq!(width_kernel(p, qi, k * qi % p), w);
        prop_assert_eq!(width_kernel(p, p - q, p - k), w);
        prop_assert_eq!(w % 2, (p - 1) % 2);
        prop_assert_eq!(width_below(p, q, k, w + 1), Some(w));
        prop_assert_eq!(width_below(p, q, k, w), None);
    }

    #[test]
    fn profile_residues_and_gradings((p, q, k) in primitive_triple(5000)) {
        let prof = f_profile(&knot(p, q, k));
        let mut seen = vec![false; p as usize];
        for (i, &f) in prof.f.iter().enumerate() {
            prop_assert_eq!(f.rem_euclid(p as i64), (i as u64 * k % p) as i64);
            seen[f.rem_euclid(p as i64) as usize] = true;
        }
        prop_assert!(seen.iter().all(|&s| s));
        let mut g = prof.sorted_doubled_gradings();
        let neg: Vec<i64> = g.iter().rev().map(|x| -x).collect();
        prop_assert_eq!(&g, &neg);
        g.dedup();
        prop_assert_eq!(g.len() as u64, p);
        prop_assert_eq!(prof.genus, Some((prof.width + 1 - p) / 2));
    }

    #[test]
    fn polynomial_identities((p, q, k) in primitive_triple(5000)) {
        let kn = knot(p, q, k);
        let chi = euler_characteristic(&kn);
        let delta = alexander_polynomial(&kn).unwrap();
        prop_assert_eq!(chi.eval_at_one(), p as i64);
        prop_assert_eq!(delta.eval_at_one(), 1);
        prop_assert!(delta.is_symmetric());
        prop_assert!(chi.is_symmetric());
        // chi (t^1/2 - t^-1/2) = delta (t^p/2 - t^-p/2)
        let half = LaurentPolynomial::from_doubled_terms([(1, 1), (-1, -1)]);
        let big = LaurentPolynomial::from_doubled_terms([(p as i64, 1), (-(p as i64), -1)]);
        prop_assert_eq!(&chi * &half, &delta * &big);
    }

    #[test]
    fn fox_calculus_and_surgery_criteria((p, q, k) in primitive_triple(5000)) {
        let kn = knot(p, q, k);
        let w = relator_word(&kn);
        prop_assert!(fundamental_formula_check(&w));
        prop_assert_eq!(w.abelianization(), 0);
        let k2 = k * k % p;
        let criterion = k2 == q || k2 == p - q;
        prop_assert_eq!(kn.has_integer_zhs_surgery(), criterion);
        prop_assert_eq!(self_linking_is_unit_sign(kn.self_linking().unwrap()), criterion);
    }

    #[test]
    fn profile_matches_direct_count((p, q, k) in primitive_triple(300)) {
        prop_assert_eq!(f_profile(&knot(p, q, k)).f, common::oracle_f(p, q, k));
    }
}
