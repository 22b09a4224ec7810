//! Exhaustive searches: solutions of `sigma(n) = rad(n)^2` below a bound via a
//! segmented sieve, and prime pairs `p < q` with `q | sigma(p^2)` and
//! `p | sigma(q^2)`.

mod sieve;

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor_u64_flat, factorize, factorize_u64, is_prime_u64, Factorization};

pub use sieve::{base_primes, sigma_rad_block};

/// Largest accepted search limit; `sigma(n)` stays well inside `u64` below it.
pub const MAX_LIMIT: u64 = 1_000_000_000_000;
pub const MAX_BLOCK_SIZE: u64 = 1 << 26;
pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search limit must be between 1 and {MAX_LIMIT}, got {0}")]
    Limit(u64),
    #[error("block size must be between 2 and {MAX_BLOCK_SIZE}, got {0}")]
    BlockSize(u64),
    #[error("worker count must be positive")]
    Workers,
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("sieve reported {0} but exact recomputation disagrees")]
    Verification(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub limit: u64,
    pub block_size: u64,
    pub workers: usize,
}

impl SearchConfig {
    pub fn new(limit: u64) -> Self {
        SearchConfig {
            limit,
            block_size: DEFAULT_BLOCK_SIZE,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(1..=MAX_LIMIT).contains(&self.limit) {
            return Err(SearchError::Limit(self.limit));
        }
        if !(2..=MAX_BLOCK_SIZE).contains(&self.block_size) {
            return Err(SearchError::BlockSize(self.block_size));
        }
        if self.workers == 0 {
            return Err(SearchError::Workers);
        }
        Ok(())
    }

    pub fn block_count(&self) -> u64 {
        self.limit.div_ceil(self.block_size)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub solutions: Vec<u64>,
}

/// All `n <= limit` with `sigma(n) = rad(n)^2`, ascending. Blocks run in
/// parallel and are merged by index. `progress` receives (blocks done, total).
pub fn solution_search(
    cfg: &SearchConfig,
    progress: Option<&(dyn Fn(u64, u64) + Sync)>,
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let primes = base_primes(cfg.limit.isqrt() + 1);
    let total = cfg.block_count();
    let done = AtomicU64::new(0);
    let run_block = |b: u64| -> Vec<u64> {
        let lo = 1 + b * cfg.block_size;
        let hi = (lo + cfg.block_size).min(cfg.limit + 1);
        let hits = sieve::block_hits(lo, hi, &primes);
        let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(report) = progress {
            report(finished, total);
        }
        hits
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    let per_block: Vec<Vec<u64>> = pool.install(|| (0..total).into_par_iter().map(run_block).collect());
    let solutions: Vec<u64> = per_block.into_iter().flatten().collect();
    for &n in &solutions {
        if !verify_exact(n) {
            return Err(SearchError::Verification(n));
        }
    }
    Ok(SearchOutcome {
        config: *cfg,
        solutions,
    })
}

/// Recomputes `sigma(n)` and `rad(n)` from a fresh factorization.
pub fn verify_exact(n: u64) -> bool {
    let Ok(f) = factorize(&BigUint::from(n)) else {
        return false;
    };
    let r = f.radical();
    f.sigma() == &r * &r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MutualPair {
    pub p: u64,
    pub q: u64,
}

/// All prime pairs `p < q <= bound` with `q | sigma(p^2)` and `p | sigma(q^2)`,
/// ascending. Candidates `p` are read off the factorization of `q^2 + q + 1`.
pub fn mutual_pair_search(bound: u64) -> Vec<MutualPair> {
    assert!(bound < 1 << 31, "q^2 + q + 1 must fit in u64");
    let mut out = Vec::new();
    for q in base_primes(bound) {
        let mut ps = factor_u64_flat(q * q + q + 1);
        ps.sort_unstable();
        ps.dedup();
        for p in ps.into_iter().filter(|&p| p < q) {
            if (p * p + p + 1) % q == 0 {
                out.push(MutualPair { p, q });
            }
        }
    }
    out.sort();
    out
}

/// Factorization of `sigma(q^2) = q^2 + q + 1` for a prime `q`.
pub fn chain_step(q: u64) -> Result<Factorization, SearchError> {
    if !is_prime_u64(q) {
        return Err(SearchError::NotPrime(q));
    }
    let q = u128::from(q);
    let s = q * q + q + 1;
    match u64::try_from(s) {
        Ok(small) => Ok(factorize_u64(small).expect("positive")),
        Err(_) => Ok(factorize(&BigUint::from(s)).expect("positive")),
    }
}
