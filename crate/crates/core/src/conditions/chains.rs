use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::FirstEdge;
use crate::arith::{sigma_prime_power, Factorization, Natural};
use crate::divisor_graph::l_set;

/// `q_1 | sigma(p^a)`, `q_{i+1} | sigma(q_i^2)`, `p' | sigma(q_k^2)` with
/// `p, p'` odd of exponent 1 and every `q_i` of exponent exactly 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChainWitness {
    #[serde(with = "crate::serde_nat")]
    pub p: Natural,
    #[serde(with = "crate::serde_nat::seq")]
    pub chain: Vec<Natural>,
    #[serde(with = "crate::serde_nat")]
    pub p_prime: Natural,
}

fn divides(d: &Natural, n: &Natural) -> bool {
    (n % d).is_zero()
}

/// Every chain witness with at most `max_k` links (`None` for no bound),
/// sorted by `(p, chain, p')`.
pub fn chain_witnesses(f: &Factorization, first_edge: FirstEdge, max_k: Option<usize>) -> Vec<ChainWitness> {
    let ends = l_set(f);
    let squares: BTreeMap<Natural, Natural> = f
        .parts()
        .iter()
        .filter(|pp| pp.exponent == 2)
        .map(|pp| (pp.prime.clone(), pp.sigma()))
        .collect();
    let limit = max_k.unwrap_or(squares.len()).min(squares.len());
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for p in &ends {
        let head = sigma_prime_power(p, first_edge.exponent());
        let mut chain = Vec::new();
        for q in squares.keys().filter(|q| divides(q, &head)) {
            chain.push(q.clone());
            extend(&ends, &squares, limit, p, &mut chain, &mut out);
            chain.pop();
        }
    }
    out.sort();
    out
}

fn extend(
    ends: &std::collections::BTreeSet<Natural>,
    squares: &BTreeMap<Natural, Natural>,
    limit: usize,
    p: &Natural,
    chain: &mut Vec<Natural>,
    out: &mut Vec<ChainWitness>,
) {
    let last_sigma = &squares[chain.last().expect("chain is nonempty")];
    for p_prime in ends.iter().filter(|e| divides(e, last_sigma)) {
        out.push(ChainWitness {
            p: p.clone(),
            chain: chain.clone(),
            p_prime: p_prime.clone(),
        });
    }
    if chain.len() == limit {
        return;
    }
    let next: Vec<Natural> = squares
        .keys()
        .filter(|q| !chain.contains(q) && divides(q, last_sigma))
        .cloned()
        .collect();
    for q in next {
        chain.push(q);
        extend(ends, squares, limit, p, chain, out);
        chain.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn f(pairs: &[(u64, u32)]) -> Factorization {
        Factorization::from_pairs(pairs).unwrap()
    }

    fn nat(v: &[u64]) -> Vec<Natural> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn single_link_example() {
        let w = chain_witnesses(&f(&[(2, 1), (3, 1), (13, 2), (61, 1)]), FirstEdge::Square, Some(3));
        assert!(w.contains(&ChainWitness {
            p: 3u32.into(),
            chain: nat(&[13]),
            p_prime: 61u32.into(),
        }));
        // sigma(13^2) = 3 * 61, so 3 also closes the chain.
        assert!(w.iter().any(|c| c.p == 3u32.into() && c.p_prime == 3u32.into()));
        assert!(chain_witnesses(&f(&[(2, 1), (3, 1), (13, 2), (61, 1)]), FirstEdge::Linear, Some(3)).is_empty());
    }

    #[test]
    fn empty_l_gives_nothing() {
        assert!(chain_witnesses(&f(&[(2, 2), (3, 2), (5, 2)]), FirstEdge::Square, Some(3)).is_empty());
    }

    #[test]
    fn two_link_example() {
        let w = chain_witnesses(&f(&[(2, 1), (3, 1), (13, 2), (61, 2), (97, 1)]), FirstEdge::Square, Some(3));
        assert!(w.contains(&ChainWitness {
            p: 3u32.into(),
            chain: nat(&[13, 61]),
            p_prime: 97u32.into(),
        }));
        let short = chain_witnesses(&f(&[(2, 1), (3, 1), (13, 2), (61, 2), (97, 1)]), FirstEdge::Square, Some(1));
        assert!(short.iter().all(|c| c.chain.len() == 1));
        assert!(w.windows(2).all(|p| p[0] < p[1]));
    }

    /// Direct check of a candidate tuple against the defining divisibilities.
    fn is_witness(f: &Factorization, a: u32, p: &Natural, chain: &[Natural], p_prime: &Natural) -> bool {
        let exp = |x: &Natural| f.exponent_of(x);
        let odd = |x: &Natural| x % 2u32 == BigUint::from(1u32);
        if !(odd(p) && odd(p_prime) && exp(p) == 1 && exp(p_prime) == 1) {
            return false;
        }
        if chain.iter().any(|q| exp(q) != 2) {
            return false;
        }
        let s = |x: &Natural, e: u32| sigma_prime_power(x, e);
        if !(s(p, a) % &chain[0]).is_zero() {
            return false;
        }
        for w in chain.windows(2) {
            if !(s(&w[0], 2) % &w[1]).is_zero() {
                return false;
            }
        }
        (s(chain.last().unwrap(), 2) % p_prime).is_zero()
    }

    fn permutations(items: &[Natural], k: usize) -> Vec<Vec<Natural>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut tail in permutations(&rest, k - 1) {
                tail.insert(0, x.clone());
                out.push(tail);
            }
        }
        out
    }

    fn brute_force(f: &Factorization, a: u32, max_k: usize) -> Vec<ChainWitness> {
        let primes: Vec<Natural> = f.primes().cloned().collect();
        let mut out = Vec::new();
        for k in 1..=max_k.min(primes.len()) {
            for chain in permutations(&primes, k) {
                for p in &primes {
                    for p_prime in &primes {
                        if is_witness(f, a, p, &chain, p_prime) {
                            out.push(ChainWitness {
                                p: p.clone(),
                                chain: chain.clone(),
                                p_prime: p_prime.clone(),
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    const SMALL_PRIMES: [u64; 24] = [
        2, 3, 5, 7, 11, 13, 17, 19, 31, 37, 43, 61, 67, 73, 97, 127, 157, 193, 211, 307, 331, 379, 421, 463,
    ];

    fn factorization_strategy() -> impl Strategy<Value = Factorization> {
        proptest::sample::subsequence(SMALL_PRIMES.to_vec(), 2..=7)
            .prop_flat_map(|ps| {
                let n = ps.len();
                (Just(ps), proptest::collection::vec(prop_oneof![Just(1u32), Just(2), Just(4)], n))
            })
            .prop_map(|(ps, es)| {
                let pairs: Vec<(u64, u32)> = ps.into_iter().zip(es).collect();
                Factorization::from_pairs(&pairs).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn matches_brute_force(g in factorization_strategy(), a in 1u32..=2, k in 1usize..=3) {
            let edge = FirstEdge::try_from(a).unwrap();
            prop_assert_eq!(chain_witnesses(&g, edge, Some(k)), brute_force(&g, a, k));
        }
    }
}
