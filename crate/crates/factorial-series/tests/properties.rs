//! Property tests for the exact core, the symbolic expressions, and the
//! divided-difference identities.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use factorial_series::divdiff::{divdiff_exact, popoviciu_h, NodeSet};
use factorial_series::exact::{explin_axpy, ExpLinear, Rational};
use factorial_series::exppoly::{build_zk_expell, ExpPoly, Poly};
use factorial_series::numeval::explin_rational_approx;
use factorial_series::oracle::{oracle_sk_of_x, TruncationSpec};

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..24).prop_map(|(p, q)| rat(p, q))
}

fn arb_nonzero_rational() -> impl Strategy<Value = Rational> {
    arb_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn arb_explin() -> impl Strategy<Value = ExpLinear> {
    (
        arb_rational(),
        prop::collection::vec((arb_rational(), arb_rational()), 0..4),
    )
        .prop_map(|(c, terms)| ExpLinear::new(c, terms))
}

/// Distinct nonzero rational nodes.
fn arb_nodes(max_len: usize) -> impl Strategy<Value = NodeSet> {
    prop::collection::vec(arb_nonzero_rational(), 1..=max_len)
        .prop_filter("distinct", |v| {
            v.iter().enumerate().all(|(i, x)| !v[..i].contains(x))
        })
        .prop_map(|v| NodeSet::new(v).unwrap())
}

proptest! {
    #[test]
    fn rational_addition_is_exact(a in arb_rational(), b in arb_rational()) {
        prop_assert_eq!((&a + &b) - &b, a);
    }

    #[test]
    fn explin_canonical_after_axpy(
        alpha in arb_rational(),
        v in arb_explin(),
        w in arb_explin(),
    ) {
        let s = explin_axpy(&alpha, &v, &w);
        for pair in s.terms().windows(2) {
            prop_assert!(pair[0].0 < pair[1].0);
        }
        for (x, c) in s.terms() {
            prop_assert!(!c.is_zero());
            prop_assert!(!x.is_zero());
        }
    }

    #[test]
    fn explin_axpy_bilinear(
        a in arb_rational(),
        b in arb_rational(),
        v in arb_explin(),
        w in arb_explin(),
    ) {
        let lhs = explin_axpy(&a, &v, &explin_axpy(&b, &v, &w));
        let rhs = explin_axpy(&(&a + &b), &v, &w);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn divdiff_permutation_symmetry(nodes in arb_nodes(5), seed in 0usize..120) {
        let mut perm: Vec<Rational> = nodes.nodes().to_vec();
        // a seed-driven shuffle
        let n = perm.len();
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, s % (i + 1));
            s /= i + 1;
        }
        let permuted = NodeSet::new(perm).unwrap();
        let f = ExpPoly::exp();
        prop_assert_eq!(
            divdiff_exact(&f, &nodes).unwrap(),
            divdiff_exact(&f, &permuted).unwrap()
        );
    }

    #[test]
    fn divdiff_linearity(nodes in arb_nodes(4), alpha in arb_rational()) {
        let f = build_zk_expell(2, 1).unwrap();
        let g = ExpPoly::monomial(3);
        let combo = f.axpy(&alpha, &g); // alpha*f + g
        let lhs = divdiff_exact(&combo, &nodes).unwrap();
        let rhs = explin_axpy(
            &alpha,
            &divdiff_exact(&f, &nodes).unwrap(),
            &divdiff_exact(&g, &nodes).unwrap(),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn popoviciu_random(nodes in arb_nodes(5), r in 0u32..=6) {
        let k = nodes.len() as u32;
        let monomial = ExpPoly::monomial((k - 1 + r) as usize);
        let lhs = divdiff_exact(&monomial, &nodes).unwrap();
        let rhs = ExpLinear::from_constant(popoviciu_h(&nodes, r));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_annihilation(nodes in arb_nodes(5), extra in 1usize..3) {
        let k = nodes.len();
        if k >= 2 {
            let deg = k.saturating_sub(1 + extra);
            let v = divdiff_exact(&ExpPoly::monomial(deg), &nodes).unwrap();
            if deg < k - 1 {
                prop_assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn oracle_node_order_independent(seed in 0usize..24) {
        let all = [rat(1, 2), rat(-1, 3), rat(2, 5)];
        let mut nodes = all.to_vec();
        nodes.swap(seed % 3, (seed / 3) % 3);
        let t = TruncationSpec::per_index(12);
        let a = oracle_sk_of_x(&all, &t).unwrap();
        let b = oracle_sk_of_x(&nodes, &t).unwrap();
        prop_assert_eq!(a.partial, b.partial);
    }
}

// Central finite difference of the evaluation map matches the symbolic
// derivative. Differences are taken in exact arithmetic, so only the
// O(h^2) truncation error remains.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn differentiation_commutes_with_evaluation(
        pc in prop::collection::vec(-5i64..=5, 0..4),
        qc in prop::collection::vec(-5i64..=5, 0..4),
        m in 0u32..3,
        xn in 1i64..8,
    ) {
        let p = Poly::new(pc.iter().map(|&c| rat(c, 1)).collect());
        let q = Poly::new(qc.iter().map(|&c| rat(c, 1)).collect());
        let f = ExpPoly::new(p, q, m);
        let x = rat(xn, 4); // in [1/4, 7/4]
        let h = rat(1, 1_000_000);
        let up = f.eval_at(&(&x + &h)).unwrap();
        let dn = f.eval_at(&(&x - &h)).unwrap();
        let fd = (explin_rational_approx(&up, 30) - explin_rational_approx(&dn, 30))
            / (rat(2, 1) * &h);
        let exact = explin_rational_approx(&f.differentiate().eval_at(&x).unwrap(), 30);
        let scale = if exact.abs() > Rational::one() { exact.abs() } else { Rational::one() };
        let err = (fd - &exact).abs() / scale;
        prop_assert!(err < rat(1, 100_000_000), "relative error {err}");
    }
}

#[test]
fn canonicalization_idempotent() {
    // rebuilding an already-canonical expression changes nothing
    let f = build_zk_expell(3, 2).unwrap().differentiate();
    let rebuilt = ExpPoly::new(f.p().clone(), f.q().clone(), f.m());
    assert_eq!(f, rebuilt);
}

#[test]
fn build_zk_expell_matches_truncated_series() {
    // x^(k-1) * sum_{n=0}^{200} x^n/(n+ell)! at x in {1/2, 1, 3/2}
    for (k, ell) in [(1u32, 0u32), (1, 1), (2, 1), (3, 1), (2, 4), (4, 2)] {
        let f = build_zk_expell(k, ell).unwrap();
        for xr in [rat(1, 2), rat(1, 1), rat(3, 2)] {
            let exact = explin_rational_approx(&f.eval_at(&xr).unwrap(), 30);
            let mut series = Rational::zero();
            let mut xp = Rational::one();
            for n in 0..=200u64 {
                series += &xp / Rational::from_integer(factorial_series::factorial(
                    n + u64::from(ell),
                ));
                xp *= &xr;
            }
            let mut xk = Rational::one();
            for _ in 0..(k - 1) {
                xk *= &xr;
            }
            series *= xk;
            let err = (exact - series).abs();
            assert!(
                err < rat(1, 1_000_000_000_000),
                "k={k} ell={ell} x={xr} err={err}"
            );
        }
    }
}

#[test]
fn oracle_partial_sums_monotone_for_nonnegative_nodes() {
    let nodes = [rat(1, 2), rat(2, 3)];
    let mut prev = Rational::zero();
    for depth in [5u64, 10, 20, 30] {
        let v = oracle_sk_of_x(&nodes, &TruncationSpec::per_index(depth)).unwrap();
        assert!(v.partial >= prev);
        prev = v.partial;
    }
}
