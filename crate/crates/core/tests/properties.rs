//! Algebraic laws of the arithmetic, multigraph and divisor-graph layers,
//! each checked against an independent oracle.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use sigrad::arith::{divisor_sum_naive, factorize_u64, h_int, h_set, sigma_prime_power, Factorization};
use sigrad::divisor_graph::DivisorGraph;
use sigrad::multigraph::{random_dag, Multigraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn trial_sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

fn trial_radical(mut n: u64) -> u64 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            r *= p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        r *= n;
    }
    r
}

fn factorization() -> impl Strategy<Value = Factorization> {
    proptest::sample::subsequence(SMALL_PRIMES.to_vec(), 1..=6).prop_flat_map(|ps| {
        let n = ps.len();
        proptest::collection::vec(1u32..=4, n).prop_map(move |es| {
            let pairs: Vec<(u64, u32)> = ps.iter().copied().zip(es).collect();
            Factorization::from_pairs(&pairs).expect("distinct primes")
        })
    })
}

#[test]
fn sigma_matches_trial_division_up_to_ten_thousand() {
    for n in 1..=10_000u64 {
        let f = factorize_u64(n).expect("positive");
        assert_eq!(f.sigma(), BigUint::from(trial_sigma(n)), "n = {n}");
        assert_eq!(f.radical(), BigUint::from(trial_radical(n)), "n = {n}");
    }
}

#[test]
fn known_h_values() {
    assert!(h_int(&factorize_u64(1782).expect("positive")).is_one());
    assert!(h_int(&Factorization::one()).is_one());
    let twelve = h_int(&factorize_u64(12).expect("positive"));
    assert_eq!(twelve, num_rational::BigRational::new(7u32.into(), 9u32.into()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sigma_and_radical_are_multiplicative(a in 1u64..=1_000_000_000, b in 1u64..=1_000_000_000) {
        prop_assume!(a.gcd(&b) == 1);
        let fa = factorize_u64(a).unwrap();
        let fb = factorize_u64(b).unwrap();
        let fab = fa.coprime_product(&fb).unwrap();
        prop_assert_eq!(fab.value(), BigUint::from(a) * b);
        prop_assert_eq!(fab.sigma(), fa.sigma() * fb.sigma());
        prop_assert_eq!(fab.radical(), fa.radical() * fb.radical());
        prop_assert_eq!(u128::try_from(fa.sigma()).unwrap(), divisor_sum_naive(a));
    }

    #[test]
    fn h_is_multiplicative_over_disjoint_sets(f in factorization(), cut in 0usize..=6) {
        let (s, t) = f.parts().split_at(cut.min(f.parts().len()));
        prop_assert_eq!(h_set(f.parts()).unwrap(), h_set(s).unwrap() * h_set(t).unwrap());
        prop_assert_eq!(h_int(&f), h_set(f.parts()).unwrap());
    }

    #[test]
    fn h_is_monotone_in_exponents(f in factorization(), bump in 1u32..=3) {
        let raised: Vec<(u64, u32)> = f
            .parts()
            .iter()
            .map(|pp| (u64::try_from(&pp.prime).unwrap(), pp.exponent + bump))
            .collect();
        let g = Factorization::from_pairs(&raised).unwrap();
        prop_assert!(h_int(&f) < h_int(&g));
    }

    #[test]
    fn h_is_one_exactly_at_solutions(n in 1u64..=200_000) {
        let f = factorize_u64(n).unwrap();
        let r = f.radical();
        prop_assert_eq!(h_int(&f).is_one(), f.sigma() == &r * &r);
    }

    #[test]
    fn arcs_record_exact_prime_powers(f in factorization()) {
        prop_assume!(!f.value().is_one());
        let dg = DivisorGraph::build(&f).unwrap();
        for pp in f.parts() {
            let s = sigma_prime_power(&pp.prime, pp.exponent);
            prop_assert!(!(&s % &pp.prime).is_zero());
            for q in f.primes() {
                let k = dg.graph().multiplicity(&pp.prime, q);
                let mut rest = s.clone();
                let mut v = 0;
                while (&rest % q).is_zero() {
                    rest /= q;
                    v += 1;
                }
                prop_assert_eq!(k, v, "{} -> {}", pp.prime, q);
            }
        }
    }

    #[test]
    fn closure_grows_with_its_seed(f in factorization(), mask in any::<u32>(), extra in any::<u32>()) {
        prop_assume!(!f.value().is_one());
        let dg = DivisorGraph::build(&f).unwrap();
        let primes: Vec<BigUint> = f.primes().cloned().collect();
        let s: BTreeSet<BigUint> = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect();
        let bigger: BTreeSet<BigUint> = primes.iter().enumerate().filter(|(i, _)| (mask | extra) >> i & 1 == 1).map(|(_, p)| p.clone()).collect();
        let small = dg.closure_parts(&s).unwrap();
        let large = dg.closure_parts(&bigger).unwrap();
        prop_assert!(small.n.is_subset(&large.n));
        prop_assert!(small.n.is_disjoint(&small.b));
    }

    #[test]
    fn degrees_are_conserved(seed in any::<u64>()) {
        let g: Multigraph<u32> = random_dag(&mut ChaCha8Rng::seed_from_u64(seed), 12, 3);
        let out: u64 = g.vertices().iter().map(|v| g.out_degree(v)).sum();
        let inn: u64 = g.vertices().iter().map(|v| g.in_degree(v)).sum();
        prop_assert_eq!(out, g.total_multiplicity());
        prop_assert_eq!(inn, g.total_multiplicity());
    }

    #[test]
    fn spanning_is_idempotent(seed in any::<u64>(), mask in any::<u16>()) {
        let g: Multigraph<u32> = random_dag(&mut ChaCha8Rng::seed_from_u64(seed), 12, 3);
        let s: BTreeSet<u32> = g.vertices().iter().copied().filter(|v| mask >> (v % 16) & 1 == 1).collect();
        let once = g.spanned_subgraph(&s).unwrap();
        prop_assert_eq!(once.spanned_subgraph(&s).unwrap(), once.clone());
        prop_assert_eq!(g.spanned_subgraph(g.vertices()).unwrap(), g.clone());
    }

    #[test]
    fn removing_arcs_into_a_vertex_makes_it_a_source(seed in any::<u64>(), pick in any::<usize>()) {
        let g: Multigraph<u32> = random_dag(&mut ChaCha8Rng::seed_from_u64(seed), 12, 3);
        let vs: Vec<u32> = g.vertices().iter().copied().collect();
        prop_assume!(!vs.is_empty());
        let v = vs[pick % vs.len()];
        let h = g.without_arcs_into(&v).unwrap();
        prop_assert_eq!(h.in_degree(&v), 0);
        prop_assert_eq!(h.out_degree(&v), g.out_degree(&v));
        prop_assert_eq!(h.total_multiplicity() + g.in_degree(&v), g.total_multiplicity());
    }
}

#[test]
fn solutions_have_in_degree_equal_to_sigma_exponent() {
    let f = factorize_u64(1782).expect("positive");
    let sigma = sigrad::arith::factorize(&f.sigma()).expect("positive");
    let dg = DivisorGraph::build(&f).expect("n >= 2");
    for p in f.primes() {
        assert_eq!(dg.graph().in_degree(p), u64::from(sigma.exponent_of(p)), "p = {p}");
        assert_eq!(dg.graph().in_degree(p), 2);
    }
}
