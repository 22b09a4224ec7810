//! Exact integer and rational arithmetic.
//!
//! Everything here is a pure function of its inputs. Integers are
//! arbitrary precision; the `h` values are exact rationals so that strict
//! comparisons against 1 are decided without rounding.

mod factor;
mod primality;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use factor::{factorize, factorize_u64, sigma_prime_power, Factorization, PrimePower};
pub(crate) use factor::factor_u64_flat;
pub use primality::{is_prime, is_prime_u64, primality, Primality, MR_BASES};

pub type Natural = BigUint;
pub type ExactRational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("0 has no factorization")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(Natural),
    #[error("prime {0} given with exponent 0")]
    ZeroExponent(Natural),
    #[error("prime {0} occurs more than once")]
    DuplicatePrime(Natural),
}

pub fn to_rational(n: &Natural) -> ExactRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

pub fn ratio(num: &Natural, den: &Natural) -> ExactRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn sigma(f: &Factorization) -> Natural {
    f.sigma()
}

pub fn radical(f: &Factorization) -> Natural {
    f.radical()
}

pub fn omega(f: &Factorization) -> usize {
    f.omega()
}

/// `sigma(p^e) / p^2`.
pub fn h_prime_power(pp: &PrimePower) -> ExactRational {
    ratio(&pp.sigma(), &(&pp.prime * &pp.prime))
}

/// Product of `sigma(p^e) / p^2` over a set of prime powers on distinct
/// primes. The empty product is 1.
pub fn h_set(set: &[PrimePower]) -> Result<ExactRational, ArithError> {
    let mut seen = BTreeSet::new();
    let mut acc = ExactRational::one();
    for pp in set {
        if !seen.insert(&pp.prime) {
            return Err(ArithError::DuplicatePrime(pp.prime.clone()));
        }
        acc *= h_prime_power(pp);
    }
    Ok(acc)
}

/// `sigma(n) / rad(n)^2`.
pub fn h_int(f: &Factorization) -> ExactRational {
    let rad = f.radical();
    ratio(&f.sigma(), &(&rad * &rad))
}

/// Decimal rendering for display only; never used to decide anything.
pub fn approx_decimal(q: &ExactRational, significant: usize) -> String {
    let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) else {
        return "overflow".to_string();
    };
    let v = n / d;
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (significant as i32 - 1 - magnitude).max(0) as usize;
    if !(-4..15).contains(&magnitude) {
        format!("{:.*e}", significant.saturating_sub(1), v)
    } else {
        format!("{v:.decimals$}")
    }
}

/// Residue class of a prime factor of `m^2 + m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueTag {
    Three,
    OneModThree,
    /// Never produced for a correct factorization.
    Other,
}

impl ResidueTag {
    pub fn of(p: &Natural) -> Self {
        if *p == Natural::from(3u32) {
            ResidueTag::Three
        } else if (p % 3u32).is_one() {
            ResidueTag::OneModThree
        } else {
            ResidueTag::Other
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ResidueTag::Three => "three",
            ResidueTag::OneModThree => "1 mod 3",
            ResidueTag::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticClassification {
    pub m: Natural,
    /// `m^2 + m + 1`.
    pub value: Natural,
    pub factors: Vec<(Natural, u32, ResidueTag)>,
    pub three_divides: bool,
    pub m_is_one_mod_three: bool,
}

impl QuadraticClassification {
    /// Every prime factor is 3 or 1 mod 3, and 3 divides exactly when m is 1 mod 3.
    pub fn law_holds(&self) -> bool {
        self.factors.iter().all(|f| f.2 != ResidueTag::Other)
            && self.three_divides == self.m_is_one_mod_three
    }
}

pub fn classify_m2m1(m: &Natural) -> QuadraticClassification {
    let value = m * m + m + 1u32;
    let f = factorize(&value).expect("m^2 + m + 1 is positive");
    let factors = f
        .parts()
        .iter()
        .map(|pp| (pp.prime.clone(), pp.exponent, ResidueTag::of(&pp.prime)))
        .collect();
    QuadraticClassification {
        m: m.clone(),
        three_divides: (&value % 3u32).is_zero(),
        m_is_one_mod_three: (m % 3u32).is_one(),
        value,
        factors,
    }
}

/// Sum of divisors by pairing `d` with `n / d` up to `sqrt(n)`.
/// Independent of any factorization; used as a cross-check.
pub fn divisor_sum_naive(n: u64) -> u128 {
    let mut sum = 0u128;
    let mut d = 1u64;
    while (d as u128) * (d as u128) <= n as u128 {
        if n.is_multiple_of(d) {
            sum += d as u128;
            let other = n / d;
            if other != d {
                sum += other as u128;
            }
        }
        d += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn q(n: i64, d: i64) -> ExactRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pp(p: u64, e: u32) -> PrimePower {
        PrimePower::new(nat(p), e).unwrap()
    }

    #[test]
    fn sigma_radical_omega_examples() {
        let f = factorize_u64(1782).unwrap();
        assert_eq!(sigma(&f), nat(4356));
        assert_eq!(radical(&f), nat(66));
        assert_eq!(omega(&f), 3);
        let one = factorize_u64(1).unwrap();
        assert_eq!(sigma(&one), nat(1));
        assert_eq!(radical(&one), nat(1));
        assert_eq!(omega(&one), 0);
        let f = factorize_u64(7u64.pow(6)).unwrap();
        assert_eq!(sigma(&f), nat(137_257));
        assert_eq!(nat(29 * 4733), nat(137_257));
        assert_eq!(omega(&factorize_u64(24).unwrap()), 2);
        assert_eq!(radical(&factorize_u64(13u64.pow(5)).unwrap()), nat(13));
    }

    #[test]
    fn sigma_matches_divisor_sum_below_ten_thousand() {
        for n in 1..=10_000u64 {
            let f = factorize_u64(n).unwrap();
            assert_eq!(sigma(&f).to_u128().unwrap(), divisor_sum_naive(n), "n = {n}");
        }
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_set(&[pp(2, 1), pp(3, 2)]).unwrap(), q(13, 12));
        assert_eq!(h_set(&[]).unwrap(), ExactRational::one());
        let big = h_set(&[pp(2, 1), pp(3, 2), pp(13, 1), pp(7, 4)]).unwrap();
        assert_eq!(big, q(1_529_346, 298_116));
        assert!(big > ExactRational::one());
        assert_eq!(h_int(&factorize_u64(1782).unwrap()), ExactRational::one());
        assert_eq!(h_int(&factorize_u64(1).unwrap()), ExactRational::one());
        assert_eq!(h_int(&factorize_u64(12).unwrap()), q(7, 9));
        assert_eq!(
            h_set(&[pp(5, 1), pp(5, 2)]),
            Err(ArithError::DuplicatePrime(nat(5)))
        );
    }

    #[test]
    fn quadratic_classification_examples() {
        let c = classify_m2m1(&nat(1));
        assert_eq!(c.factors, vec![(nat(3), 1, ResidueTag::Three)]);
        assert!(c.three_divides && c.m_is_one_mod_three);
        let c = classify_m2m1(&nat(4));
        assert_eq!(
            c.factors,
            vec![(nat(3), 1, ResidueTag::Three), (nat(7), 1, ResidueTag::OneModThree)]
        );
        let c = classify_m2m1(&nat(4733));
        assert_eq!(c.value, nat(22_406_023));
        assert_eq!(c.factors, vec![(nat(22_406_023), 1, ResidueTag::OneModThree)]);
        assert!(c.law_holds());
    }

    #[test]
    fn decimal_display() {
        assert_eq!(approx_decimal(&q(13, 12), 6), "1.08333");
        assert_eq!(approx_decimal(&q(1, 1), 6), "1.00000");
        assert_eq!(approx_decimal(&q(7, 9), 6), "0.777778");
    }
}
