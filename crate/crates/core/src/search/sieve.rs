/// Primes `<= bound` by the sieve of Eratosthenes.
pub fn base_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `(sigma(n), rad(n))` for every `n` in `lo..hi`. `primes` must cover
/// `sqrt(hi - 1)`. Each prime strips its full power from the running
/// cofactor; whatever remains above 1 is a single large prime.
pub fn sigma_rad_block(lo: u64, hi: u64, primes: &[u64]) -> Vec<(u64, u64)> {
    assert!(lo >= 1 && lo <= hi);
    let len = (hi - lo) as usize;
    let mut rest: Vec<u64> = (lo..hi).collect();
    let mut out = vec![(1u64, 1u64); len];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < hi {
            let i = (m - lo) as usize;
            let mut r = rest[i] / p;
            let mut term = p;
            let mut sum = 1 + p;
            while r.is_multiple_of(p) {
                r /= p;
                term *= p;
                sum += term;
            }
            rest[i] = r;
            out[i].0 *= sum;
            out[i].1 *= p;
            m += p;
        }
    }
    for (i, r) in rest.into_iter().enumerate() {
        if r > 1 {
            out[i].0 *= r + 1;
            out[i].1 *= r;
        }
    }
    out
}

/// Values in `lo..hi` with `sigma(n) = rad(n)^2`.
pub(super) fn block_hits(lo: u64, hi: u64, primes: &[u64]) -> Vec<u64> {
    sigma_rad_block(lo, hi, primes)
        .into_iter()
        .zip(lo..hi)
        .filter(|&((s, r), _)| u128::from(s) == u128::from(r) * u128::from(r))
        .map(|(_, n)| n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize_u64;
    use num_bigint::BigUint;

    #[test]
    fn sieve_matches_factorization() {
        let limit = 100_000u64;
        let primes = base_primes(limit.isqrt() + 1);
        let mut lo = 1;
        // Uneven block sizes exercise the boundaries.
        for (k, width) in [1u64, 2, 7, 1000, 4093].iter().cycle().enumerate() {
            if lo > limit {
                break;
            }
            let hi = (lo + width).min(limit + 1);
            for (n, (s, r)) in (lo..hi).zip(sigma_rad_block(lo, hi, &primes)) {
                let f = factorize_u64(n).unwrap();
                assert_eq!(BigUint::from(s), f.sigma(), "sigma({n}) block {k}");
                assert_eq!(BigUint::from(r), f.radical(), "rad({n})");
            }
            lo = hi;
        }
    }

    #[test]
    fn primes_small() {
        assert_eq!(base_primes(1), Vec::<u64>::new());
        assert_eq!(base_primes(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
