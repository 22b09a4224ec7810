//! Divisor multigraphs and exact arithmetic for the equation
//! `sigma(n) = rad(n)^2`.

pub mod arith;
pub mod multigraph;
pub mod divisor_graph;
pub mod conditions;
pub mod search;
pub mod facts;
mod serde_nat;
