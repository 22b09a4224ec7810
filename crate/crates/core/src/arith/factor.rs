use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{is_prime, is_prime_u64, mul_mod};
use super::{ArithError, Natural};

/// Trial division covers every prime below this bound before rho takes over.
const TRIAL_BOUND: u64 = 1 << 10;

/// A prime power `p^e` with `e >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub prime: Natural,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(prime: Natural, exponent: u32) -> Result<Self, ArithError> {
        if exponent == 0 {
            return Err(ArithError::ZeroExponent(prime));
        }
        if !is_prime(&prime) {
            return Err(ArithError::NotPrime(prime));
        }
        Ok(PrimePower { prime, exponent })
    }

    pub fn value(&self) -> Natural {
        num_traits::pow(self.prime.clone(), self.exponent as usize)
    }

    /// `1 + p + ... + p^e`.
    pub fn sigma(&self) -> Natural {
        sigma_prime_power(&self.prime, self.exponent)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

pub fn sigma_prime_power(p: &Natural, e: u32) -> Natural {
    let p_pow = num_traits::pow(p.clone(), e as usize + 1);
    (p_pow - 1u32) / (p - 1u32)
}

/// Canonical factorization: primes strictly increasing, exponents positive.
/// The empty factorization is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    parts: Vec<PrimePower>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { parts: Vec::new() }
    }

    /// Validates and canonicalises a list of prime powers.
    pub fn from_parts(mut parts: Vec<PrimePower>) -> Result<Self, ArithError> {
        parts.sort_by(|a, b| a.prime.cmp(&b.prime));
        for w in parts.windows(2) {
            if w[0].prime == w[1].prime {
                return Err(ArithError::DuplicatePrime(w[0].prime.clone()));
            }
        }
        for part in &parts {
            if part.exponent == 0 {
                return Err(ArithError::ZeroExponent(part.prime.clone()));
            }
            if !is_prime(&part.prime) {
                return Err(ArithError::NotPrime(part.prime.clone()));
            }
        }
        Ok(Factorization { parts })
    }

    /// Convenience for literal inputs such as `[(2, 1), (3, 4), (11, 1)]`.
    pub fn from_pairs(pairs: &[(u64, u32)]) -> Result<Self, ArithError> {
        Self::from_parts(
            pairs
                .iter()
                .map(|&(p, e)| PrimePower {
                    prime: Natural::from(p),
                    exponent: e,
                })
                .collect(),
        )
    }

    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    pub fn is_one(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn value(&self) -> Natural {
        self.parts.iter().map(PrimePower::value).product()
    }

    pub fn sigma(&self) -> Natural {
        self.parts.iter().map(PrimePower::sigma).product()
    }

    pub fn radical(&self) -> Natural {
        self.parts.iter().map(|pp| pp.prime.clone()).product()
    }

    pub fn omega(&self) -> usize {
        self.parts.len()
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> + '_ {
        self.parts.iter().map(|pp| &pp.prime)
    }

    /// Exponent of `p`, or 0 when `p` does not divide the value.
    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.parts
            .binary_search_by(|pp| pp.prime.cmp(p))
            .map(|i| self.parts[i].exponent)
            .unwrap_or(0)
    }

    pub fn part_of(&self, p: &Natural) -> Option<&PrimePower> {
        self.parts
            .binary_search_by(|pp| pp.prime.cmp(p))
            .ok()
            .map(|i| &self.parts[i])
    }

    /// `e_0`, the exponent of 2.
    pub fn two_exponent(&self) -> u32 {
        self.exponent_of(&Natural::from(2u32))
    }

    pub fn is_even(&self) -> bool {
        self.two_exponent() > 0
    }

    /// The odd prime powers `p_1^{e_1}, ..., p_s^{e_s}` in ascending order.
    pub fn odd_parts(&self) -> &[PrimePower] {
        match self.parts.first() {
            Some(pp) if pp.prime == Natural::from(2u32) => &self.parts[1..],
            _ => &self.parts,
        }
    }

    /// Product with a coprime factorization.
    pub fn coprime_product(&self, other: &Factorization) -> Result<Factorization, ArithError> {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Self::from_parts(parts)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1");
        }
        for (i, pp) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{pp}")?;
        }
        Ok(())
    }
}

/// Factors `n >= 1` into its canonical form.
pub fn factorize(n: &Natural) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut primes: Vec<Natural> = Vec::new();
    if let Some(small) = n.to_u64() {
        primes.extend(factor_u64_flat(small).into_iter().map(Natural::from));
    } else {
        let mut rest = n.clone();
        let mut d = 2u64;
        while d < TRIAL_BOUND {
            while (&rest % d).is_zero() {
                rest /= d;
                primes.push(Natural::from(d));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        split_big(rest, &mut primes);
    }
    Ok(collect_parts(primes))
}

pub fn factorize_u64(n: u64) -> Result<Factorization, ArithError> {
    factorize(&Natural::from(n))
}

fn collect_parts(mut primes: Vec<Natural>) -> Factorization {
    primes.sort();
    let mut parts: Vec<PrimePower> = Vec::new();
    for p in primes {
        match parts.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => parts.push(PrimePower {
                prime: p,
                exponent: 1,
            }),
        }
    }
    Factorization { parts }
}

/// All prime factors of `n` with repetition, unsorted.
pub(crate) fn factor_u64_flat(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut d = 2u64;
    while d < TRIAL_BOUND && d * d <= n {
        while n.is_multiple_of(d) {
            n /= d;
            out.push(d);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        split_u64(n, &mut out);
    }
    out
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    let d = loop {
        if let Some(d) = brent_u64(n, c) {
            break d;
        }
        c += 1;
    };
    split_u64(d, out);
    split_u64(n / d, out);
}

/// One run of Pollard's rho with Brent's cycle finder on `x -> x^2 + c`.
/// Returns a proper divisor, or `None` when this `c` degenerates.
fn brent_u64(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let step = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut q, mut g) = (2u64 % n, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (y, y);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_big(n: Natural, out: &mut Vec<Natural>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        out.extend(factor_u64_flat(small).into_iter().map(Natural::from));
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    let d = loop {
        if let Some(d) = brent_big(&n, c) {
            break d;
        }
        c += 1;
    };
    let other = &n / &d;
    split_big(d, out);
    split_big(other, out);
}

fn brent_big(n: &Natural, c: u64) -> Option<Natural> {
    const BATCH: u64 = 128;
    let c = Natural::from(c);
    let step = |x: &Natural| (x * x + &c) % n;
    let abs_diff = |a: &Natural, b: &Natural| match a.cmp(b) {
        Ordering::Less => b - a,
        _ => a - b,
    };
    let mut y = Natural::from(2u32) % n;
    let mut r = 1u64;
    let mut q = Natural::one();
    let mut g = Natural::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = step(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.parts()
            .iter()
            .map(|pp| (pp.prime.to_u64().unwrap(), pp.exponent))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(pairs(&factorize_u64(1782).unwrap()), [(2, 1), (3, 4), (11, 1)]);
        assert!(factorize_u64(1).unwrap().is_one());
        assert_eq!(
            pairs(&factorize_u64(954_305).unwrap()),
            [(5, 1), (11, 1), (17351, 1)]
        );
        assert_eq!(factorize_u64(0), Err(ArithError::ZeroInput));
    }

    #[test]
    fn semiprimes_near_word_size() {
        let p = 4_294_967_291u64;
        let q = 4_294_967_279u64;
        let f = factorize_u64(p * q).unwrap();
        assert_eq!(pairs(&f), [(q, 1), (p, 1)]);
        let f = factorize_u64(p * p).unwrap();
        assert_eq!(pairs(&f), [(p, 2)]);
    }

    #[test]
    fn wide_inputs() {
        // (2^61 - 1) * (2^31 - 1) * 3^5 exceeds 2^64.
        let m61 = (Natural::one() << 61u32) - 1u32;
        let m31 = Natural::from((1u64 << 31) - 1);
        let n = &m61 * &m31 * Natural::from(243u32);
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.omega(), 3);
        assert_eq!(f.exponent_of(&Natural::from(3u32)), 5);
        assert_eq!(f.exponent_of(&m61), 1);

        // Product of two 40-bit primes times a 50-bit prime: rho on a big cofactor.
        let a = Natural::from(1_099_511_627_791u64);
        let b = Natural::from(1_099_511_627_803u64);
        let c = Natural::from(1_125_899_906_842_679u64);
        let n = &a * &b * &c;
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.omega(), 3);
    }

    #[test]
    fn from_parts_rejects_bad_input() {
        assert!(matches!(
            Factorization::from_pairs(&[(3, 1), (3, 2)]),
            Err(ArithError::DuplicatePrime(_))
        ));
        assert!(matches!(
            Factorization::from_pairs(&[(4, 1)]),
            Err(ArithError::NotPrime(_))
        ));
        assert!(matches!(
            Factorization::from_pairs(&[(5, 0)]),
            Err(ArithError::ZeroExponent(_))
        ));
        let f = Factorization::from_pairs(&[(11, 1), (2, 1), (3, 4)]).unwrap();
        assert_eq!(f.value(), Natural::from(1782u32));
        assert_eq!(f.to_string(), "2 * 3^4 * 11");
        assert_eq!(f.odd_parts().len(), 2);
        assert_eq!(f.two_exponent(), 1);
    }
}
