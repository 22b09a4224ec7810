use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use super::{ConditionEntry, ConditionReport, ConditionsError, FirstEdge, Verdict, Witness};
use crate::arith::{sigma_prime_power, Factorization, Natural};
use crate::divisor_graph::{l_set, ClosureParts, DivisorGraph};

/// Enumeration cap for boundary paths; beyond it item (i) is not decided.
pub const BOUNDARY_PATH_LIMIT: usize = 100_000;

/// Structural conditions on the closure of `L`: boundary paths (i), the
/// residue and cardinality bounds on `M` (ii), and an `L`-to-`L` path through
/// `M` (iii). Item (iii) and the direct-arc entry depend on `first_edge`.
pub fn closure_path_report(f: &Factorization, first_edge: FirstEdge) -> Result<ConditionReport, ConditionsError> {
    let dg = DivisorGraph::build(f)?;
    let l = l_set(f);
    let parts = dg.closure_parts(&l)?;
    let mut report = ConditionReport::new(&f.value());
    report.semantics = Some(first_edge);
    report.entries.push(boundary_paths(&dg, &parts));
    let residue_one: Vec<&Natural> = parts.m.iter().filter(|q| *q % 3u32 == 1u32.into()).collect();
    report.entries.push(ConditionEntry::check(
        "closure.ii.residue",
        residue_one.len() <= 2,
        Witness::primes(residue_one.iter().copied()),
        format!("{} primes of M are 1 (mod 3), at most 2 allowed", residue_one.len()),
    ));
    report.entries.push(cardinality_entry(parts.s.len(), parts.m.len()));
    report.entries.push(l_to_l_path(&dg, &parts, first_edge));
    report.entries.push(direct_arc(&dg, &parts, first_edge));
    Ok(report)
}

fn cardinality_entry(l_len: usize, m_len: usize) -> ConditionEntry {
    const ID: &str = "closure.ii.cardinality";
    let cap = match l_len {
        1 => 6,
        2 => 8,
        _ => return ConditionEntry::not_applicable(ID, "bound stated only for #L in {1, 2}"),
    };
    ConditionEntry::check(
        ID,
        m_len <= cap,
        Witness::count(m_len),
        format!("#L = {l_len}, #M = {m_len}, bound {cap}"),
    )
}

/// Every path `b -> q_k -> ... -> q_1 -> p` with `b` in `B`, distinct `q_i`
/// in `M` and `p` in `L`; requires `k <= 3` and `q_i = 1 (mod 3)` for `i < k`.
fn boundary_paths(dg: &DivisorGraph, parts: &ClosureParts) -> ConditionEntry {
    const ID: &str = "closure.i.boundary_paths";
    let g = dg.graph();
    let mut paths: Vec<Vec<Natural>> = Vec::new();
    // Search backwards from each L vertex; `stack` holds p, q_1, q_2, ...
    fn walk(
        g: &crate::multigraph::Multigraph<Natural>,
        parts: &ClosureParts,
        stack: &mut Vec<Natural>,
        paths: &mut Vec<Vec<Natural>>,
    ) -> bool {
        let head = stack.last().expect("nonempty").clone();
        for (u, _) in g.in_arcs(&head) {
            if paths.len() > BOUNDARY_PATH_LIMIT {
                return false;
            }
            if parts.b.contains(u) {
                let mut path: Vec<Natural> = stack.iter().rev().cloned().collect();
                path.insert(0, u.clone());
                paths.push(path);
            } else if parts.m.contains(u) && !stack.contains(u) {
                stack.push(u.clone());
                let ok = walk(g, parts, stack, paths);
                stack.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    for p in &parts.s {
        let mut stack = vec![p.clone()];
        if !walk(g, parts, &mut stack, &mut paths) {
            return ConditionEntry::new(
                ID,
                Verdict::NotApplicable,
                Witness::count(paths.len()),
                format!("more than {BOUNDARY_PATH_LIMIT} boundary paths"),
            );
        }
    }
    paths.sort();
    // path = [b, q_k, ..., q_1, p]
    let bad = paths.iter().find(|path| {
        let interior = &path[1..path.len() - 1];
        let k = interior.len();
        // interior[0] is q_k, the exempt vertex next to the boundary.
        k > 3 || interior.iter().skip(1).any(|q| q % 3u32 != 1u32.into())
    });
    match bad {
        Some(path) => ConditionEntry::check(
            ID,
            false,
            Witness::path(path),
            "boundary path with more than 3 interior primes or an interior prime not 1 (mod 3)",
        ),
        None => ConditionEntry::check(
            ID,
            true,
            Witness::count(paths.len()),
            "every boundary path has at most 3 interior primes, all but the outermost 1 (mod 3)",
        ),
    }
}

/// Heads of the first link out of `p` in `L` under the given semantics.
fn first_links<'a>(
    dg: &DivisorGraph,
    p: &Natural,
    targets: impl Iterator<Item = &'a Natural>,
    first_edge: FirstEdge,
) -> Vec<Natural> {
    match first_edge {
        FirstEdge::Linear => targets.filter(|t| dg.graph().multiplicity(p, t) > 0).cloned().collect(),
        FirstEdge::Square => {
            let s = sigma_prime_power(p, 2);
            targets.filter(|t| (&s % *t).is_zero()).cloned().collect()
        }
    }
}

fn l_to_l_path(dg: &DivisorGraph, parts: &ClosureParts, first_edge: FirstEdge) -> ConditionEntry {
    const ID: &str = "closure.iii.path";
    let g = dg.graph();
    for p in &parts.s {
        let mut parent: BTreeMap<Natural, Option<Natural>> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for q in first_links(dg, p, parts.m.iter(), first_edge) {
            parent.insert(q.clone(), None);
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            if let Some((end, _)) = g.out_arcs(&q).find(|(h, _)| parts.s.contains(*h)) {
                let mut interior = vec![q.clone()];
                let mut cur = q;
                while let Some(Some(prev)) = parent.get(&cur) {
                    interior.push(prev.clone());
                    cur = prev.clone();
                }
                interior.reverse();
                let mut path = vec![p.clone()];
                path.extend(interior);
                path.push(end.clone());
                return ConditionEntry::check(ID, true, Witness::path(&path), "L-to-L path with interior in M");
            }
            for (h, _) in g.out_arcs(&q) {
                if parts.m.contains(h) && !parent.contains_key(h) {
                    parent.insert(h.clone(), Some(q.clone()));
                    queue.push_back(h.clone());
                }
            }
        }
    }
    ConditionEntry::check(
        ID,
        false,
        Witness::primes(&parts.s),
        format!("no L-to-L path through M ({})", first_edge.label()),
    )
}

fn direct_arc(dg: &DivisorGraph, parts: &ClosureParts, first_edge: FirstEdge) -> ConditionEntry {
    const ID: &str = "closure.iii.direct_arc";
    for p in &parts.s {
        if let Some(end) = first_links(dg, p, parts.s.iter(), first_edge).into_iter().next() {
            return ConditionEntry::check(ID, true, Witness::path([p, &end]), "direct L-to-L link");
        }
    }
    ConditionEntry::check(ID, false, Witness::primes(&parts.s), "no direct L-to-L link")
}
