//! Directed multigraphs with arc multiplicities.
//!
//! Parallel arcs are a multiplicity on a single arc record; degrees count
//! them with multiplicity. Traversals visit vertices in ascending label order
//! so every result is deterministic.

mod identity;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display, Write as _};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::ExactRational;

pub use identity::{random_dag, run_identity_suite, IdentityFailure, IdentitySummary};

/// Upper bound on the number of source paths [`Multigraph::enumerate_source_paths`]
/// will materialise.
pub const PATH_ENUMERATION_LIMIT: u64 = 100_000;

pub trait Vertex: Ord + Clone + Display {}
impl<T: Ord + Clone + Display> Vertex for T {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError<V> {
    UnknownVertex(V),
    SelfLoop(V),
    ZeroMultiplicity(V, V),
    Cyclic(Vec<V>),
    SourceVertex(V),
    TooManyPaths { count: Box<BigUint>, limit: u64 },
    EvaluatorMismatch {
        vertex: V,
        recurrence: Box<ExactRational>,
        enumeration: Box<ExactRational>,
    },
}

impl<V: Display> Display for GraphError<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            GraphError::SelfLoop(v) => write!(f, "self-loop at {v} is not allowed"),
            GraphError::ZeroMultiplicity(u, v) => {
                write!(f, "arc {u} -> {v} must have positive multiplicity")
            }
            GraphError::Cyclic(w) => write!(f, "graph has a cycle: {}", join_arrow(w)),
            GraphError::SourceVertex(v) => write!(f, "vertex {v} is a source"),
            GraphError::TooManyPaths { count, limit } => {
                write!(f, "{count} source paths exceed the enumeration limit {limit}")
            }
            GraphError::EvaluatorMismatch {
                vertex,
                recurrence,
                enumeration,
            } => write!(
                f,
                "path sums disagree at {vertex}: recurrence {recurrence}, enumeration {enumeration}"
            ),
        }
    }
}

impl<V: fmt::Debug + Display> std::error::Error for GraphError<V> {}

pub fn join_arrow<V: Display>(seq: &[V]) -> String {
    seq.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Result of an acyclicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acyclicity<V> {
    Acyclic,
    /// A cycle `u_1 -> ... -> u_k -> u_1`, first vertex repeated at the end.
    Cyclic(Vec<V>),
}

impl<V> Acyclicity<V> {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic)
    }
}

/// A source-to-target path. `arc_copies[i]` selects which of the parallel
/// arcs `vertices[i] -> vertices[i + 1]` is used.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path<V> {
    pub vertices: Vec<V>,
    pub arc_copies: Vec<u32>,
}

impl<V: Vertex> Path<V> {
    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.arc_copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arc_copies.is_empty()
    }

    /// Consecutive pairs are arcs of `g`, the copy index is in range, and all
    /// vertices are distinct.
    pub fn is_path_in(&self, g: &Multigraph<V>) -> bool {
        if self.vertices.len() != self.arc_copies.len() + 1 {
            return false;
        }
        let distinct: BTreeSet<&V> = self.vertices.iter().collect();
        distinct.len() == self.vertices.len()
            && self
                .vertices
                .windows(2)
                .zip(&self.arc_copies)
                .all(|(w, &c)| c < g.multiplicity(&w[0], &w[1]))
    }
}

/// True when `seq` is `u_1 -> ... -> u_k -> u_1` with `u_1..u_k` distinct,
/// `k >= 2`, and every step an arc of `g`.
pub fn is_cycle_in<V: Vertex>(g: &Multigraph<V>, seq: &[V]) -> bool {
    if seq.len() < 3 || seq.first() != seq.last() {
        return false;
    }
    let body = &seq[..seq.len() - 1];
    let distinct: BTreeSet<&V> = body.iter().collect();
    distinct.len() == body.len() && seq.windows(2).all(|w| g.multiplicity(&w[0], &w[1]) > 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph<V: Ord> {
    vertices: BTreeSet<V>,
    out: BTreeMap<V, BTreeMap<V, u32>>,
    inn: BTreeMap<V, BTreeMap<V, u32>>,
}

impl<V: Vertex> Default for Multigraph<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Vertex> Multigraph<V> {
    pub fn new() -> Self {
        Multigraph {
            vertices: BTreeSet::new(),
            out: BTreeMap::new(),
            inn: BTreeMap::new(),
        }
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = V>) -> Self {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: V) {
        self.vertices.insert(v);
    }

    /// Adds `multiplicity` parallel arcs `tail -> head`, inserting missing
    /// endpoints.
    pub fn add_arc(&mut self, tail: V, head: V, multiplicity: u32) -> Result<(), GraphError<V>> {
        if tail == head {
            return Err(GraphError::SelfLoop(tail));
        }
        if multiplicity == 0 {
            return Err(GraphError::ZeroMultiplicity(tail, head));
        }
        self.vertices.insert(tail.clone());
        self.vertices.insert(head.clone());
        *self
            .out
            .entry(tail.clone())
            .or_default()
            .entry(head.clone())
            .or_insert(0) += multiplicity;
        *self.inn.entry(head).or_default().entry(tail).or_insert(0) += multiplicity;
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<V> {
        &self.vertices
    }

    pub fn contains(&self, v: &V) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Arc records `(tail, head, multiplicity)` in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (&V, &V, u32)> + '_ {
        self.out
            .iter()
            .flat_map(|(t, heads)| heads.iter().map(move |(h, &k)| (t, h, k)))
    }

    pub fn multiplicity(&self, tail: &V, head: &V) -> u32 {
        self.out
            .get(tail)
            .and_then(|heads| heads.get(head))
            .copied()
            .unwrap_or(0)
    }

    /// Sum of all arc multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.arcs().map(|(_, _, k)| k as u64).sum()
    }

    pub fn out_arcs(&self, v: &V) -> impl Iterator<Item = (&V, u32)> + '_ {
        self.out
            .get(v)
            .into_iter()
            .flat_map(|m| m.iter().map(|(h, &k)| (h, k)))
    }

    pub fn in_arcs(&self, v: &V) -> impl Iterator<Item = (&V, u32)> + '_ {
        self.inn
            .get(v)
            .into_iter()
            .flat_map(|m| m.iter().map(|(t, &k)| (t, k)))
    }

    pub fn out_degree(&self, v: &V) -> u64 {
        self.out_arcs(v).map(|(_, k)| k as u64).sum()
    }

    pub fn in_degree(&self, v: &V) -> u64 {
        self.in_arcs(v).map(|(_, k)| k as u64).sum()
    }

    /// `(out, in)` counted with multiplicity.
    pub fn degrees(&self, v: &V) -> Result<(u64, u64), GraphError<V>> {
        self.require(v)?;
        Ok((self.out_degree(v), self.in_degree(v)))
    }

    fn require(&self, v: &V) -> Result<(), GraphError<V>> {
        if self.vertices.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v.clone()))
        }
    }

    pub fn sources(&self) -> BTreeSet<V> {
        self.vertices
            .iter()
            .filter(|v| self.in_degree(v) == 0)
            .cloned()
            .collect()
    }

    pub fn sinks(&self) -> BTreeSet<V> {
        self.vertices
            .iter()
            .filter(|v| self.out_degree(v) == 0)
            .cloned()
            .collect()
    }

    pub fn sources_sinks(&self) -> (BTreeSet<V>, BTreeSet<V>) {
        (self.sources(), self.sinks())
    }

    /// Depth-first search in ascending label order; returns the first cycle
    /// closed by a back edge.
    pub fn find_cycle(&self) -> Option<Vec<V>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut marks: BTreeMap<&V, Mark> = BTreeMap::new();
        for root in &self.vertices {
            if marks.contains_key(root) {
                continue;
            }
            // Explicit stack of (vertex, successor iterator).
            let mut trail: Vec<&V> = vec![root];
            let mut stack = vec![self.out_arcs(root).map(|(h, _)| h).collect::<Vec<_>>().into_iter()];
            marks.insert(root, Mark::Active);
            while let Some(next) = stack.last_mut() {
                match next.next() {
                    Some(h) => match marks.get(h) {
                        Some(Mark::Active) => {
                            let start = trail.iter().position(|v| *v == h).expect("active vertex on trail");
                            let mut cycle: Vec<V> = trail[start..].iter().map(|v| (*v).clone()).collect();
                            cycle.push(h.clone());
                            return Some(cycle);
                        }
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(h, Mark::Active);
                            trail.push(h);
                            stack.push(self.out_arcs(h).map(|(x, _)| x).collect::<Vec<_>>().into_iter());
                        }
                    },
                    None => {
                        stack.pop();
                        let v = trail.pop().expect("trail tracks stack");
                        marks.insert(v, Mark::Done);
                    }
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> Acyclicity<V> {
        match self.find_cycle() {
            Some(c) => Acyclicity::Cyclic(c),
            None => Acyclicity::Acyclic,
        }
    }

    /// Kahn's algorithm; ready vertices leave in ascending order.
    pub fn topological_order(&self) -> Result<Vec<V>, GraphError<V>> {
        let mut remaining: BTreeMap<&V, u64> =
            self.vertices.iter().map(|v| (v, self.in_degree(v))).collect();
        let mut ready: BTreeSet<&V> = remaining
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| *v)
            .collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop_first() {
            order.push(v.clone());
            for (h, k) in self.out_arcs(v) {
                let d = remaining.get_mut(h).expect("head is a vertex");
                *d -= k as u64;
                if *d == 0 {
                    ready.insert(h);
                }
            }
        }
        if order.len() == self.vertices.len() {
            Ok(order)
        } else {
            Err(GraphError::Cyclic(self.find_cycle().expect("Kahn stalled on a cycle")))
        }
    }

    /// The subgraph on `s` keeping every arc with both ends in `s`.
    pub fn spanned_subgraph(&self, s: &BTreeSet<V>) -> Result<Self, GraphError<V>> {
        for v in s {
            self.require(v)?;
        }
        let mut g = Self::with_vertices(s.iter().cloned());
        for (t, h, k) in self.arcs() {
            if s.contains(t) && s.contains(h) {
                g.add_arc(t.clone(), h.clone(), k)?;
            }
        }
        Ok(g)
    }

    /// Copy of the graph with every arc into `v` removed.
    pub fn without_arcs_into(&self, v: &V) -> Result<Self, GraphError<V>> {
        self.require(v)?;
        let mut g = Self::with_vertices(self.vertices.iter().cloned());
        for (t, h, k) in self.arcs() {
            if h != v {
                g.add_arc(t.clone(), h.clone(), k)?;
            }
        }
        Ok(g)
    }

    fn require_acyclic(&self) -> Result<Vec<V>, GraphError<V>> {
        self.topological_order()
    }

    /// Number of source paths ending at `v0`, parallel arcs counted
    /// separately.
    pub fn count_source_paths(&self, v0: &V) -> Result<BigUint, GraphError<V>> {
        self.require(v0)?;
        let order = self.require_acyclic()?;
        let mut counts: BTreeMap<&V, BigUint> = BTreeMap::new();
        for v in &order {
            let c = if self.in_degree(v) == 0 {
                BigUint::one()
            } else {
                self.in_arcs(v)
                    .map(|(u, k)| &counts[u] * BigUint::from(k))
                    .sum()
            };
            counts.insert(v, c);
        }
        Ok(counts.remove(v0).unwrap_or_default())
    }

    /// All paths from a source to `v0`. A source `v0` yields the single
    /// trivial path. Refuses graphs with more than
    /// [`PATH_ENUMERATION_LIMIT`] such paths.
    pub fn enumerate_source_paths(&self, v0: &V) -> Result<Vec<Path<V>>, GraphError<V>> {
        let count = self.count_source_paths(v0)?;
        if count > BigUint::from(PATH_ENUMERATION_LIMIT) {
            return Err(GraphError::TooManyPaths {
                count: Box::new(count),
                limit: PATH_ENUMERATION_LIMIT,
            });
        }
        let mut paths = Vec::new();
        let mut rev_vertices = vec![v0.clone()];
        let mut rev_copies = Vec::new();
        self.walk_back(&mut rev_vertices, &mut rev_copies, &mut paths);
        paths.sort();
        Ok(paths)
    }

    fn walk_back(&self, verts: &mut Vec<V>, copies: &mut Vec<u32>, out: &mut Vec<Path<V>>) {
        let head = verts.last().expect("non-empty").clone();
        if self.in_degree(&head) == 0 {
            let mut vertices = verts.clone();
            vertices.reverse();
            let mut arc_copies = copies.clone();
            arc_copies.reverse();
            out.push(Path { vertices, arc_copies });
            return;
        }
        let preds: Vec<(V, u32)> = self.in_arcs(&head).map(|(u, k)| (u.clone(), k)).collect();
        for (u, k) in preds {
            for copy in 0..k {
                verts.push(u.clone());
                copies.push(copy);
                self.walk_back(verts, copies, out);
                verts.pop();
                copies.pop();
            }
        }
    }

    fn check_path_sum_target(&self, v0: &V) -> Result<Vec<V>, GraphError<V>> {
        self.require(v0)?;
        let order = self.require_acyclic()?;
        if self.in_degree(v0) == 0 {
            return Err(GraphError::SourceVertex(v0.clone()));
        }
        Ok(order)
    }

    /// Path weights `W`: 1 on sources, and for any other vertex the
    /// multiplicity-weighted sum of its predecessors' weights divided by its
    /// in-degree. Requires an acyclic graph.
    pub fn path_sum_weights(&self) -> Result<BTreeMap<V, ExactRational>, GraphError<V>> {
        let order = self.require_acyclic()?;
        let mut w: BTreeMap<V, ExactRational> = BTreeMap::new();
        for v in order {
            let d = self.in_degree(&v);
            let value = if d == 0 {
                ExactRational::one()
            } else {
                let mut acc = ExactRational::zero();
                for (u, k) in self.in_arcs(&v) {
                    acc += &w[u] * BigRational::from_integer(BigInt::from(k));
                }
                acc / BigRational::from_integer(BigInt::from(d))
            };
            w.insert(v, value);
        }
        Ok(w)
    }

    /// Sum over source paths `v_k -> ... -> v_0` of `1 / prod d^-(v_i)`
    /// (`i < k`), evaluated by the weight recurrence in topological order.
    pub fn path_sum(&self, v0: &V) -> Result<ExactRational, GraphError<V>> {
        self.check_path_sum_target(v0)?;
        let mut w = self.path_sum_weights()?;
        Ok(w.remove(v0).expect("v0 is a vertex"))
    }

    /// The same sum by explicit path enumeration.
    pub fn path_sum_by_enumeration(&self, v0: &V) -> Result<ExactRational, GraphError<V>> {
        self.check_path_sum_target(v0)?;
        let mut total = ExactRational::zero();
        for path in self.enumerate_source_paths(v0)? {
            let denom: BigUint = path.vertices[1..]
                .iter()
                .map(|v| BigUint::from(self.in_degree(v)))
                .product();
            total += BigRational::new(BigInt::one(), BigInt::from(denom));
        }
        Ok(total)
    }

    /// Evaluates both routes and fails if they disagree. The enumeration side
    /// is `None` when the path count is above the limit.
    pub fn path_sum_checked(&self, v0: &V) -> Result<PathSumCheck, GraphError<V>> {
        let recurrence = self.path_sum(v0)?;
        let enumeration = match self.path_sum_by_enumeration(v0) {
            Ok(e) => Some(e),
            Err(GraphError::TooManyPaths { .. }) => None,
            Err(e) => return Err(e),
        };
        if let Some(e) = &enumeration {
            if *e != recurrence {
                return Err(GraphError::EvaluatorMismatch {
                    vertex: v0.clone(),
                    recurrence: Box::new(recurrence),
                    enumeration: Box::new(e.clone()),
                });
            }
        }
        Ok(PathSumCheck {
            recurrence,
            enumeration,
        })
    }

    /// DOT text. One line per vertex, then one line per arc with parallel
    /// arcs repeated. `attrs` supplies optional vertex attributes.
    pub fn to_dot(&self, name: &str, attrs: impl Fn(&V) -> Option<String>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(name));
        for v in &self.vertices {
            match attrs(v) {
                Some(a) => {
                    let _ = writeln!(s, "  \"{}\" [{}];", escape(&v.to_string()), a);
                }
                None => {
                    let _ = writeln!(s, "  \"{}\";", escape(&v.to_string()));
                }
            }
        }
        for (t, h, k) in self.arcs() {
            for _ in 0..k {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\";",
                    escape(&t.to_string()),
                    escape(&h.to_string())
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSumCheck {
    pub recurrence: ExactRational,
    pub enumeration: Option<ExactRational>,
}
