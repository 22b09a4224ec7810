//! Serializable views of library results. Every integer and rational is a
//! decimal string so documents round-trip exactly.

use sigrad::arith::{approx_decimal, ExactRational, Natural};
use sigrad::conditions::{ChainWitness, ConditionReport, FormClass, Witness};
use sigrad::divisor_graph::{ClosureIdentityReport, Precondition};
use sigrad::multigraph::Multigraph;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcView {
    pub tail: String,
    pub head: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphView {
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcView>,
}

impl GraphView {
    pub fn of(g: &Multigraph<Natural>) -> Self {
        GraphView {
            vertices: strings(g.vertices()),
            arcs: g
                .arcs()
                .map(|(t, h, k)| ArcView {
                    tail: t.to_string(),
                    head: h.to_string(),
                    multiplicity: k,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalView {
    pub exact: String,
    pub decimal: String,
}

impl RationalView {
    pub fn of(q: &ExactRational) -> Self {
        RationalView {
            exact: q.to_string(),
            decimal: approx_decimal(q, 6),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityView {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundView {
    pub h_c: RationalView,
    pub bound_squared: RationalView,
    pub strictly_exceeds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureView {
    pub l: Vec<String>,
    pub n: Vec<String>,
    pub b: Vec<String>,
    pub m: Vec<String>,
    pub precondition: Precondition,
    pub degree_defects: Vec<(String, u64)>,
    pub identity: Option<IdentityView>,
    pub bound: Option<BoundView>,
}

impl ClosureView {
    pub fn of(r: &ClosureIdentityReport) -> Self {
        ClosureView {
            l: strings(&r.l),
            n: strings(&r.n),
            b: strings(&r.b),
            m: strings(&r.m),
            precondition: r.precondition.clone(),
            degree_defects: r.degree_defects.iter().map(|(v, d)| (v.to_string(), *d)).collect(),
            identity: r.identity.as_ref().map(|i| IdentityView {
                lhs: i.lhs.to_string(),
                rhs: i.rhs.to_string(),
                holds: i.holds,
            }),
            bound: r.bound.as_ref().map(|b| BoundView {
                h_c: RationalView::of(&b.h_c),
                bound_squared: RationalView::of(&b.bound_squared),
                strictly_exceeds: b.strictly_exceeds,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub n: String,
    pub factorization: String,
    pub sigma: String,
    pub sigma_factorization: String,
    pub radical: String,
    pub h: RationalView,
    pub known_solution: bool,
    pub graph: GraphView,
    /// Arcs of the closure `C(L)`.
    pub closure_arcs: Vec<ArcView>,
    pub closure: ClosureView,
    pub literature: ConditionReport,
    pub form: FormClass,
    pub closure_paths: ConditionReport,
    pub chain_exponent: u32,
    pub chain_max_k: usize,
    pub chain_witnesses: Vec<ChainWitness>,
}

pub fn strings<'a, T: ToString + 'a>(items: impl IntoIterator<Item = &'a T>) -> Vec<String> {
    items.into_iter().map(ToString::to_string).collect()
}

pub fn show_witness(w: &Witness) -> String {
    match w {
        Witness::Integer { value } => value.clone(),
        Witness::PrimePower { prime, exponent } => format!("{prime}^{exponent}"),
        Witness::Primes { values } => format!("{{{}}}", values.join(", ")),
        Witness::Path { vertices } => vertices.join(" -> "),
        Witness::Rational { value } => value.clone(),
        Witness::Count { value } => format!("count {value}"),
        Witness::Exponents { values } => {
            let v: Vec<String> = values.iter().map(ToString::to_string).collect();
            format!("exponents [{}]", v.join(", "))
        }
        Witness::Note { text } => text.clone(),
    }
}

pub fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}
