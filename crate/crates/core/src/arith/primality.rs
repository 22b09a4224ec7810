use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Outcome of a primality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Rigorously prime.
    Prime,
    /// Passed strong-pseudoprime tests to every base in [`MR_BASES`] but lies
    /// above the range where that base set is known to be deterministic.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime_like(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Miller-Rabin witnesses. Together they are deterministic below
/// 3317044064679887385961981 (Sorenson and Webster).
pub const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, d: &BigUint, s: u64, a: u64) -> bool {
    let n_minus_one = n - 1u32;
    let mut x = BigUint::from(a).modpow(d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_one: BigUint = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    if !MR_BASES
        .iter()
        .all(|&a| strong_probable_prime(n, &d, s, a))
    {
        return Primality::Composite;
    }
    match n.to_u128() {
        Some(v) if v < DETERMINISTIC_BOUND => Primality::Prime,
        _ => Primality::ProbablePrime,
    }
}

/// True for primes and, above the deterministic range, for strong probable
/// primes. Use [`primality`] when the distinction matters.
pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime_like()
}
