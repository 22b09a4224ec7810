//! Necessary-condition checkers for candidate solutions of
//! `sigma(n) = rad(n)^2`.
//!
//! A `Violated` verdict certifies that the input is not a solution other
//! than 1 and 1782. `Holds` never certifies that it is one.

mod chains;
mod forms;
mod literature;
mod luca;
mod paths;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExactRational, Natural, PrimePower};
use crate::divisor_graph::DivisorGraphError;

pub use chains::{chain_witnesses, ChainWitness};
pub use forms::{bkkl_classify, FormClass, FormTag};
pub use literature::literature_conditions;
pub use luca::{luca_log_bound, LucaBound, LUCA_MAX_T};
pub use paths::closure_path_report;

pub const NECESSARY_ONLY: &str = "necessary conditions only: 'violated' rules the input out as a solution other than 1 and 1782; 'holds' proves nothing";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionsError {
    #[error("first-edge exponent must be 1 or 2, got {0}")]
    InvalidFirstEdgeExponent(u32),
    #[error("invalid bound parameters: {0}")]
    BoundParameter(String),
    #[error(transparent)]
    Graph(#[from] DivisorGraphError),
}

/// Which prime power of an exponent-1 prime `p` feeds the first link of a
/// chain: `sigma(p^2)` as the chain condition is stated, or `sigma(p)` as
/// the arcs of `G(n)` are defined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstEdge {
    /// `q_1 | sigma(p)`.
    Linear,
    /// `q_1 | sigma(p^2)`.
    #[default]
    Square,
}

impl FirstEdge {
    pub fn exponent(self) -> u32 {
        match self {
            FirstEdge::Linear => 1,
            FirstEdge::Square => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FirstEdge::Linear => "first link from sigma(p)",
            FirstEdge::Square => "first link from sigma(p^2)",
        }
    }
}

impl TryFrom<u32> for FirstEdge {
    type Error = ConditionsError;

    fn try_from(e: u32) -> Result<Self, Self::Error> {
        match e {
            1 => Ok(FirstEdge::Linear),
            2 => Ok(FirstEdge::Square),
            other => Err(ConditionsError::InvalidFirstEdgeExponent(other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

/// Evidence attached to every verdict. Integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Integer { value: String },
    PrimePower { prime: String, exponent: u32 },
    Primes { values: Vec<String> },
    Path { vertices: Vec<String> },
    Rational { value: String },
    Count { value: u64 },
    Exponents { values: Vec<u32> },
    Note { text: String },
}

impl Witness {
    pub fn integer(n: &Natural) -> Self {
        Witness::Integer { value: n.to_string() }
    }

    pub fn prime_power(pp: &PrimePower) -> Self {
        Witness::PrimePower {
            prime: pp.prime.to_string(),
            exponent: pp.exponent,
        }
    }

    pub fn primes<'a>(ps: impl IntoIterator<Item = &'a BigUint>) -> Self {
        Witness::Primes {
            values: ps.into_iter().map(ToString::to_string).collect(),
        }
    }

    pub fn path<'a>(vs: impl IntoIterator<Item = &'a BigUint>) -> Self {
        Witness::Path {
            vertices: vs.into_iter().map(ToString::to_string).collect(),
        }
    }

    pub fn rational(q: &ExactRational) -> Self {
        Witness::Rational { value: q.to_string() }
    }

    pub fn count(n: usize) -> Self {
        Witness::Count { value: n as u64 }
    }

    pub fn note(text: impl Into<String>) -> Self {
        Witness::Note { text: text.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub id: String,
    pub verdict: Verdict,
    pub witness: Witness,
    pub detail: String,
}

impl ConditionEntry {
    pub fn new(id: &str, verdict: Verdict, witness: Witness, detail: impl Into<String>) -> Self {
        ConditionEntry {
            id: id.to_string(),
            verdict,
            witness,
            detail: detail.into(),
        }
    }

    fn check(id: &str, ok: bool, witness: Witness, detail: impl Into<String>) -> Self {
        let verdict = if ok { Verdict::Holds } else { Verdict::Violated };
        Self::new(id, verdict, witness, detail)
    }

    fn not_applicable(id: &str, why: &str) -> Self {
        Self::new(id, Verdict::NotApplicable, Witness::note(why), why)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub subject: String,
    pub known_solution: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantics: Option<FirstEdge>,
    pub note: String,
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    fn new(subject: &Natural) -> Self {
        let known_solution = *subject == BigUint::from(1u32) || *subject == BigUint::from(1782u32);
        ConditionReport {
            subject: subject.to_string(),
            known_solution,
            semantics: None,
            note: if known_solution {
                format!("known solution, conditions not required; {NECESSARY_ONLY}")
            } else {
                NECESSARY_ONLY.to_string()
            },
            entries: Vec::new(),
        }
    }

    pub fn entry(&self, id: &str) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn verdict(&self, id: &str) -> Option<Verdict> {
        self.entry(id).map(|e| e.verdict)
    }

    /// Ids of every violated condition.
    pub fn violations(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.verdict == Verdict::Violated)
            .map(|e| e.id.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
