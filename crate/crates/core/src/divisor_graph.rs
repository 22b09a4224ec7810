//! The multigraph `G(n)` on the primes dividing `n * sigma(n)`.
//!
//! An arc `p -> q` of multiplicity `k` means `q^k || sigma(p^e)` where
//! `p^e || n`. Primes that divide `sigma(n)` but not `n` carry no exponent
//! and have no out-arcs.
//!
//! For a vertex set `S`, the 2-incomponent `N(S)` is `S` together with every
//! vertex `v` with `v^2 || n` that reaches `S` through vertices which also
//! have exponent exactly 2. The 2-boundary `B(S)` holds the vertices outside
//! `N(S)` with an arc into it, and `M(S) = N(S) \ S`. The closure `C(S)`
//! keeps the arcs inside `N(S)` and the arcs from `B(S)` into `N(S)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, factorize, h_prime_power, ratio, to_rational, ArithError, ExactRational, Factorization, Natural};
use crate::multigraph::{Acyclicity, GraphError, Multigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorGraphError {
    #[error("G(n) is defined for n >= 2")]
    TrivialInput,
    #[error("{0} is not a vertex of G(n)")]
    UnknownVertex(Natural),
    #[error("{0} does not divide n, so sigma of its prime power is undefined")]
    MissingExponent(Natural),
    #[error("{0} divides sigma of its own prime power")]
    SelfArc(Natural),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("{0}")]
    Graph(String),
}

impl From<GraphError<Natural>> for DivisorGraphError {
    fn from(e: GraphError<Natural>) -> Self {
        match e {
            GraphError::UnknownVertex(v) => DivisorGraphError::UnknownVertex(v),
            GraphError::SelfLoop(v) => DivisorGraphError::SelfArc(v),
            other => DivisorGraphError::Graph(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorGraph {
    graph: Multigraph<Natural>,
    exponents: BTreeMap<Natural, u32>,
    source: Factorization,
    sigma_parts: BTreeMap<Natural, Factorization>,
}

/// Odd primes with exponent exactly 1.
pub fn l_set(f: &Factorization) -> BTreeSet<Natural> {
    f.odd_parts()
        .iter()
        .filter(|pp| pp.exponent == 1)
        .map(|pp| pp.prime.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureParts {
    pub s: BTreeSet<Natural>,
    /// 2-incomponent.
    pub n: BTreeSet<Natural>,
    /// 2-boundary.
    pub b: BTreeSet<Natural>,
    /// `N \ S`.
    pub m: BTreeSet<Natural>,
    /// Arcs inside `N` plus arcs from `B` into `N`, on the vertex set `N ∪ B`.
    pub c: Multigraph<Natural>,
}

/// Cofactors left after removing the primes of `N` from `sigma(p_i^{e_i})`
/// (the kappas) and from `p_i^2` (the lambdas).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaLambda {
    /// For each vertex of `C` that divides `n`.
    pub kappa: BTreeMap<Natural, Natural>,
    /// For each vertex of `M`: `p_i^2 / prod_{j in N} p_j^{k_ij}`, an exact rational.
    pub lambda: BTreeMap<Natural, ExactRational>,
    /// `k[i][j]`: exponent of `p_j in N` in `sigma(p_i^{e_i})`; zero entries omitted.
    pub k: BTreeMap<Natural, BTreeMap<Natural, u32>>,
}

impl DivisorGraph {
    pub fn build(f: &Factorization) -> Result<Self, DivisorGraphError> {
        if f.is_one() {
            return Err(DivisorGraphError::TrivialInput);
        }
        let mut graph = Multigraph::new();
        let mut exponents = BTreeMap::new();
        let mut sigma_parts = BTreeMap::new();
        for pp in f.parts() {
            graph.add_vertex(pp.prime.clone());
            exponents.insert(pp.prime.clone(), pp.exponent);
            let sf = factorize(&pp.sigma())?;
            for q in sf.parts() {
                graph.add_arc(pp.prime.clone(), q.prime.clone(), q.exponent)?;
            }
            sigma_parts.insert(pp.prime.clone(), sf);
        }
        Ok(DivisorGraph {
            graph,
            exponents,
            source: f.clone(),
            sigma_parts,
        })
    }

    pub fn from_value(n: &Natural) -> Result<Self, DivisorGraphError> {
        Self::build(&factorize(n)?)
    }

    pub fn graph(&self) -> &Multigraph<Natural> {
        &self.graph
    }

    pub fn factorization(&self) -> &Factorization {
        &self.source
    }

    /// `e` with `p^e || n`, or `None` for primes of `sigma(n)` only.
    pub fn exponent(&self, p: &Natural) -> Option<u32> {
        self.exponents.get(p).copied()
    }

    /// Factorization of `sigma(p^e)` for `p^e || n`.
    pub fn sigma_factorization(&self, p: &Natural) -> Option<&Factorization> {
        self.sigma_parts.get(p)
    }

    fn has_exponent_two(&self, p: &Natural) -> bool {
        self.exponent(p) == Some(2)
    }

    pub fn closure_parts(&self, s: &BTreeSet<Natural>) -> Result<ClosureParts, DivisorGraphError> {
        for v in s {
            if !self.graph.contains(v) {
                return Err(DivisorGraphError::UnknownVertex(v.clone()));
            }
        }
        // Reverse breadth-first search admitting only exponent-2 vertices.
        let mut n: BTreeSet<Natural> = s.clone();
        let mut queue: VecDeque<Natural> = s.iter().cloned().collect();
        while let Some(w) = queue.pop_front() {
            for (u, _) in self.graph.in_arcs(&w) {
                if self.has_exponent_two(u) && !n.contains(u) {
                    n.insert(u.clone());
                    queue.push_back(u.clone());
                }
            }
        }
        let b: BTreeSet<Natural> = self
            .graph
            .vertices()
            .iter()
            .filter(|v| !n.contains(*v) && self.graph.out_arcs(v).any(|(h, _)| n.contains(h)))
            .cloned()
            .collect();
        let m: BTreeSet<Natural> = n.difference(s).cloned().collect();
        let mut c = Multigraph::with_vertices(n.iter().chain(b.iter()).cloned());
        for (t, h, k) in self.graph.arcs() {
            if n.contains(h) && (n.contains(t) || b.contains(t)) {
                c.add_arc(t.clone(), h.clone(), k)?;
            }
        }
        Ok(ClosureParts {
            s: s.clone(),
            n,
            b,
            m,
            c,
        })
    }

    /// `kappa_i` for one vertex: `sigma(p^e)` with every prime of `N` removed.
    pub fn kappa_for(&self, parts: &ClosureParts, p: &Natural) -> Result<Natural, DivisorGraphError> {
        let sf = self
            .sigma_parts
            .get(p)
            .ok_or_else(|| DivisorGraphError::MissingExponent(p.clone()))?;
        Ok(sf
            .parts()
            .iter()
            .filter(|q| !parts.n.contains(&q.prime))
            .map(|q| q.value())
            .product())
    }

    /// Kappas for every vertex of `C` that divides `n` (vertices of `S` that
    /// only divide `sigma(n)` have none) and lambdas for every vertex of `M`.
    pub fn kappa_lambda(&self, parts: &ClosureParts) -> Result<KappaLambda, DivisorGraphError> {
        let mut out = KappaLambda {
            kappa: BTreeMap::new(),
            lambda: BTreeMap::new(),
            k: BTreeMap::new(),
        };
        for p in parts.c.vertices() {
            let Some(sf) = self.sigma_parts.get(p) else {
                continue;
            };
            let row: BTreeMap<Natural, u32> = sf
                .parts()
                .iter()
                .filter(|q| parts.n.contains(&q.prime))
                .map(|q| (q.prime.clone(), q.exponent))
                .collect();
            out.kappa.insert(p.clone(), self.kappa_for(parts, p)?);
            out.k.insert(p.clone(), row);
        }
        for p in &parts.m {
            let row = out.k.get(p).ok_or_else(|| DivisorGraphError::MissingExponent(p.clone()))?;
            let removed: Natural = row
                .iter()
                .map(|(q, &e)| num_traits::pow(q.clone(), e as usize))
                .product();
            out.lambda.insert(p.clone(), ratio(&(p * p), &removed));
        }
        Ok(out)
    }

    /// Checks the structural hypotheses on `N(L)` and, when they hold,
    /// evaluates the closure product identity and the lower bound on `h(C)`.
    /// Every failure mode is reported, never raised.
    pub fn closure_identity_check(&self, l: &BTreeSet<Natural>) -> ClosureIdentityReport {
        let mut report = ClosureIdentityReport {
            l: l.iter().cloned().collect(),
            n: Vec::new(),
            b: Vec::new(),
            m: Vec::new(),
            precondition: Precondition::Holds,
            degree_defects: Vec::new(),
            identity: None,
            bound: None,
        };
        let parts = match self.closure_parts(l) {
            Ok(p) => p,
            Err(DivisorGraphError::UnknownVertex(v)) => {
                report.precondition = Precondition::UnknownVertex { vertex: v };
                return report;
            }
            Err(e) => unreachable!("closure_parts only fails on unknown vertices: {e}"),
        };
        report.n = parts.n.iter().cloned().collect();
        report.b = parts.b.iter().cloned().collect();
        report.m = parts.m.iter().cloned().collect();
        report.degree_defects = parts
            .n
            .iter()
            .map(|v| (v.clone(), parts.c.in_degree(v)))
            .filter(|(_, d)| *d != 2)
            .collect();

        let n_graph = parts
            .c
            .spanned_subgraph(&parts.n)
            .expect("N is a subset of C");
        if let Acyclicity::Cyclic(w) = n_graph.is_acyclic() {
            report.precondition = Precondition::Cyclic { witness: w };
            return report;
        }
        for v in l {
            if let Some((h, _)) = n_graph.out_arcs(v).next() {
                report.precondition = Precondition::NotSink {
                    vertex: v.clone(),
                    head: h.clone(),
                };
                return report;
            }
        }
        for v in parts.c.vertices() {
            if self.exponent(v).is_none() {
                report.precondition = Precondition::MissingExponent { vertex: v.clone() };
                return report;
            }
        }

        let kl = self.kappa_lambda(&parts).expect("every vertex of C divides n");
        let lhs: Natural = parts.b.iter().map(|p| self.sigma_parts[p].value()).product();
        let mut rhs = ExactRational::one();
        for p in &parts.b {
            rhs *= to_rational(&kl.kappa[p]);
        }
        for lam in kl.lambda.values() {
            rhs *= lam;
        }
        for p in l {
            rhs *= to_rational(&(p * p));
        }
        report.identity = Some(IdentityEvaluation {
            holds: to_rational(&lhs) == rhs,
            lhs,
            rhs,
        });

        // h(C) against the bound, both squared.
        let h_c: ExactRational = parts
            .c
            .vertices()
            .iter()
            .map(|p| h_prime_power(self.source.part_of(p).expect("checked above")))
            .product();
        let mut bound_sq = ExactRational::one();
        for p in &parts.b {
            let e = self.exponents[p] as i32;
            bound_sq *= to_rational(&kl.kappa[p]) * pow_rational(p, e - 4);
        }
        for p in &parts.m {
            bound_sq *= ratio(&arith::sigma_prime_power(p, 2), &(p * p));
        }
        for p in l {
            let e = self.exponents[p] as i32;
            bound_sq *= pow_rational(p, 2 * (e - 1));
        }
        let h_c_sq = &h_c * &h_c;
        report.bound = Some(BoundEvaluation {
            strictly_exceeds: h_c_sq > bound_sq,
            h_c,
            bound_squared: bound_sq,
        });
        report
    }

    /// DOT text with `p^e` labels; primes of `sigma(n)` only are dashed.
    pub fn to_dot(&self) -> String {
        let name = format!("G({})", self.source.value());
        self.graph.to_dot(&name, |p| match self.exponent(p) {
            Some(e) => Some(format!("label=\"{p}^{e}\"")),
            None => Some(format!("label=\"{p}\", style=dashed")),
        })
    }
}

fn pow_rational(p: &Natural, e: i32) -> ExactRational {
    let base = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        to_rational(&base)
    } else {
        ratio(&BigUint::one(), &base)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Precondition {
    Holds,
    UnknownVertex {
        #[serde(with = "crate::serde_nat")]
        vertex: Natural,
    },
    Cyclic {
        #[serde(with = "crate::serde_nat::seq")]
        witness: Vec<Natural>,
    },
    NotSink {
        #[serde(with = "crate::serde_nat")]
        vertex: Natural,
        #[serde(with = "crate::serde_nat")]
        head: Natural,
    },
    MissingExponent {
        #[serde(with = "crate::serde_nat")]
        vertex: Natural,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityEvaluation {
    /// `prod_B sigma(p_i^{e_i})`.
    pub lhs: Natural,
    /// `prod_B kappa_i * prod_M lambda_j * prod_L p_i^2`.
    pub rhs: ExactRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEvaluation {
    pub h_c: ExactRational,
    /// Square of `prod_B kappa^(1/2) p^(e/2-2) * prod_M sqrt(sigma(p^2))/p * prod_L p^(e-1)`.
    pub bound_squared: ExactRational,
    pub strictly_exceeds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureIdentityReport {
    pub l: Vec<Natural>,
    pub n: Vec<Natural>,
    pub b: Vec<Natural>,
    pub m: Vec<Natural>,
    pub precondition: Precondition,
    /// Vertices of `N` whose in-degree in `C` is not 2. A solution of the
    /// equation has none, and the identity needs none.
    pub degree_defects: Vec<(Natural, u64)>,
    pub identity: Option<IdentityEvaluation>,
    pub bound: Option<BoundEvaluation>,
}

impl ClosureIdentityReport {
    pub fn preconditions_hold(&self) -> bool {
        self.precondition == Precondition::Holds
    }

    pub fn identity_holds(&self) -> Option<bool> {
        self.identity.as_ref().map(|i| i.holds)
    }
}
