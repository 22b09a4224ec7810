//! A ledger of concrete arithmetic claims, stored as data and re-verified
//! with exact arithmetic.

mod expr;

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    approx_decimal, divisor_sum_naive, factorize, h_set, primality, sigma_prime_power, Natural, Primality,
    PrimePower,
};

pub use expr::{parse_relation, Expr, Relation};

/// The shipped claim ledger.
pub const CATALOG_TOML: &str = include_str!("../../data/claims.toml");

/// Values whose divisor sum is also checked by brute force.
const NAIVE_CROSS_CHECK_BOUND: u64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    SigmaFactorization,
    Primality,
    Congruence,
    Divisibility,
    HInequality,
    ArcChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
    pub payload: String,
    pub source: String,
    /// The relation as it should read if the printed one is a typo.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimVerdict {
    Verified,
    Refuted,
    Corrected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub kind: ClaimKind,
    pub verdict: ClaimVerdict,
    /// The independently computed truth.
    pub computed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactsError {
    #[error("claim file: {0}")]
    Format(String),
    #[error("claim {id}: {message}")]
    Payload { id: String, message: String },
    #[error("duplicate claim id {0}")]
    DuplicateId(String),
    #[error("claim {0}: divisor sum by factorization disagrees with brute force")]
    CrossCheck(String),
}

#[derive(Deserialize)]
struct ClaimFile {
    claim: Vec<Claim>,
}

/// Parses a ledger in the `[[claim]]` TOML layout and checks id uniqueness.
pub fn parse_claims(text: &str) -> Result<Vec<Claim>, FactsError> {
    let file: ClaimFile = toml::from_str(text).map_err(|e| FactsError::Format(e.to_string()))?;
    let mut seen = BTreeSet::new();
    for c in &file.claim {
        if !seen.insert(c.id.as_str()) {
            return Err(FactsError::DuplicateId(c.id.clone()));
        }
    }
    Ok(file.claim)
}

pub fn load_claims(path: &Path) -> Result<Vec<Claim>, FactsError> {
    let text = std::fs::read_to_string(path).map_err(|e| FactsError::Format(format!("{}: {e}", path.display())))?;
    parse_claims(&text)
}

pub fn claim_catalog() -> Vec<Claim> {
    parse_claims(CATALOG_TOML).expect("shipped ledger is well formed")
}

/// Verifies every claim; results keep the input order.
pub fn verify_all(claims: &[Claim]) -> Result<Vec<ClaimResult>, FactsError> {
    claims.par_iter().map(verify_claim).collect()
}

/// Outcome of evaluating one relation: whether it holds and what was computed.
struct Evaluation {
    holds: bool,
    computed: String,
}

pub fn verify_claim(claim: &Claim) -> Result<ClaimResult, FactsError> {
    let bad = |message: String| FactsError::Payload {
        id: claim.id.clone(),
        message,
    };
    let relation = parse_relation(&claim.payload).map_err(&bad)?;
    let eval = evaluate(claim, &relation).map_err(&bad)?;
    let mut verdict = if eval.holds {
        ClaimVerdict::Verified
    } else {
        ClaimVerdict::Refuted
    };
    let mut note = claim.note.clone();
    if !eval.holds {
        if let Some(fix) = &claim.correction {
            let fixed = parse_relation(fix).map_err(&bad)?;
            if evaluate(claim, &fixed).map_err(&bad)?.holds {
                verdict = ClaimVerdict::Corrected;
                let msg = format!("printed: {}; holds as: {fix}", claim.payload);
                note = Some(match note {
                    Some(n) => format!("{msg}; {n}"),
                    None => msg,
                });
            }
        }
    }
    Ok(ClaimResult {
        id: claim.id.clone(),
        kind: claim.kind,
        verdict,
        computed: eval.computed,
        note,
    })
}

fn evaluate(claim: &Claim, relation: &Relation) -> Result<Evaluation, String> {
    match (claim.kind, relation) {
        (ClaimKind::SigmaFactorization, Relation::Equals(lhs, rhs)) => sigma_factorization(claim, lhs, rhs),
        (ClaimKind::Primality, Relation::Prime(e)) => {
            let v = e.eval();
            let p = primality(&v);
            Ok(Evaluation {
                holds: p.is_prime_like(),
                computed: match p {
                    Primality::Composite => format!("{v} = {}", factor_string(&v)?),
                    Primality::Prime => format!("{v} is prime"),
                    Primality::ProbablePrime => format!("{v} is a probable prime"),
                },
            })
        }
        (ClaimKind::Congruence, Relation::Congruent { value, residue, modulus }) => {
            if modulus.is_zero() {
                return Err("modulus 0".into());
            }
            let r = value.eval() % modulus;
            Ok(Evaluation {
                holds: &r == residue,
                computed: format!("{} = {r} mod {modulus}", value.eval()),
            })
        }
        (ClaimKind::Divisibility, Relation::Divides(d, x)) => {
            let (d, x) = (d.eval(), x.eval());
            if d.is_zero() {
                return Err("divisor 0".into());
            }
            Ok(Evaluation {
                holds: (&x % &d).is_zero(),
                computed: format!("{x} = {} mod {d}", &x % &d),
            })
        }
        (ClaimKind::HInequality, Relation::HExceedsOne(set)) => {
            let parts = set
                .iter()
                .map(|(p, e)| PrimePower::new(p.clone(), *e).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let h = h_set(&parts).map_err(|e| e.to_string())?;
            Ok(Evaluation {
                holds: h > crate::arith::ExactRational::one(),
                computed: format!("h = {h} ~ {}", approx_decimal(&h, 8)),
            })
        }
        (ClaimKind::ArcChain, Relation::ArcChain(chain)) => {
            let mut holds = true;
            let mut steps = Vec::new();
            for w in chain.windows(2) {
                let ((p, e), (q, _)) = (&w[0], &w[1]);
                if q.is_zero() {
                    return Err("arc head 0".into());
                }
                let s = sigma_prime_power(p, *e);
                let arc = (&s % q).is_zero();
                holds &= arc;
                steps.push(format!(
                    "sigma({p}^{e}) = {}{}",
                    factor_string(&s)?,
                    if arc { "" } else { " (no arc)" }
                ));
            }
            Ok(Evaluation {
                holds,
                computed: steps.join("; "),
            })
        }
        (kind, _) => Err(format!("payload does not have the shape of a {kind:?} claim")),
    }
}

fn factor_string(v: &Natural) -> Result<String, String> {
    Ok(factorize(v).map_err(|e| e.to_string())?.to_string())
}

fn sigma_factorization(claim: &Claim, lhs: &Expr, rhs: &Expr) -> Result<Evaluation, String> {
    let Expr::Sigma(arg) = lhs else {
        return Err("left side must be sigma(...)".into());
    };
    let claimed = rhs
        .as_power_product()
        .ok_or("right side must be a product of prime powers")?;
    let value = lhs.eval();
    let truth = factorize(&value).map_err(|e| e.to_string())?;
    if let Some(small) = arg.eval().to_u64().filter(|&n| n <= NAIVE_CROSS_CHECK_BOUND) {
        if BigUint::from(divisor_sum_naive(small)) != value {
            return Err(FactsError::CrossCheck(claim.id.clone()).to_string());
        }
    }
    let mut claimed = claimed;
    claimed.sort();
    let truth_pairs: Vec<(Natural, u32)> = truth
        .parts()
        .iter()
        .map(|pp| (pp.prime.clone(), pp.exponent))
        .collect();
    Ok(Evaluation {
        holds: claimed == truth_pairs,
        computed: format!("{value} = {truth}"),
    })
}
