//! Seeded random acyclic multigraphs and the path-sum identity run over them.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphError, Multigraph};
use crate::arith::ExactRational;

/// A random acyclic multigraph on `2..=max_vertices` vertices labelled
/// `0..n`. Arcs follow a random vertex permutation, so the graph is acyclic
/// by construction; multiplicities are drawn from `1..=max_multiplicity`.
/// At least one arc is always present.
pub fn random_dag<R: Rng>(rng: &mut R, max_vertices: u32, max_multiplicity: u32) -> Multigraph<u32> {
    let n = rng.random_range(2..=max_vertices.max(2));
    let mut order: Vec<u32> = (0..n).collect();
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let density: f64 = rng.random_range(0.15..0.6);
    let mut g = Multigraph::with_vertices(0..n);
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.random_bool(density) {
                let k = rng.random_range(1..=max_multiplicity.max(1));
                g.add_arc(order[i], order[j], k).expect("distinct endpoints");
            }
        }
    }
    if g.total_multiplicity() == 0 {
        g.add_arc(order[0], order[1], 1).expect("distinct endpoints");
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub graph_index: usize,
    pub vertex: u32,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySummary {
    pub seed: u64,
    pub graphs: usize,
    pub graphs_holding: usize,
    /// Non-source vertices whose path sum was evaluated.
    pub vertices_checked: usize,
    /// Of those, how many were also evaluated by enumeration.
    pub vertices_enumerated: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentitySummary {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty() && self.graphs_holding == self.graphs
    }
}

/// Generates `graphs` random acyclic multigraphs from `seed` and checks that
/// every non-source vertex has path sum exactly 1, comparing the recurrence
/// with enumeration whenever the path count allows.
pub fn run_identity_suite(graphs: usize, max_vertices: u32, max_multiplicity: u32, seed: u64) -> IdentitySummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = IdentitySummary {
        seed,
        graphs,
        graphs_holding: 0,
        vertices_checked: 0,
        vertices_enumerated: 0,
        failures: Vec::new(),
    };
    for graph_index in 0..graphs {
        let g = random_dag(&mut rng, max_vertices, max_multiplicity);
        let mut holds = true;
        for v in g.vertices().iter().filter(|v| g.in_degree(v) > 0) {
            summary.vertices_checked += 1;
            let detail = match g.path_sum_checked(v) {
                Ok(check) => {
                    if check.enumeration.is_some() {
                        summary.vertices_enumerated += 1;
                    }
                    if check.recurrence == ExactRational::one() {
                        continue;
                    }
                    format!("path sum {} != 1", check.recurrence)
                }
                Err(e @ GraphError::EvaluatorMismatch { .. }) => e.to_string(),
                Err(e) => e.to_string(),
            };
            holds = false;
            summary.failures.push(IdentityFailure {
                graph_index,
                vertex: *v,
                detail,
            });
        }
        if holds {
            summary.graphs_holding += 1;
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_acyclic_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = random_dag(&mut rng, 12, 3);
            assert!(g.vertex_count() >= 2 && g.vertex_count() <= 12);
            assert!(g.is_acyclic().is_acyclic());
            assert!(g.arcs().all(|(_, _, k)| (1..=3).contains(&k)));
            assert!(g.total_multiplicity() > 0);
        }
    }

    #[test]
    fn suite_is_reproducible() {
        let a = run_identity_suite(50, 10, 3, 99);
        let b = run_identity_suite(50, 10, 3, 99);
        assert_eq!(a, b);
        assert!(a.all_hold());
    }
}
