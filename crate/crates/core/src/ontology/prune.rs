use std::collections::BTreeSet;

use super::ConceptGraph;

/// Baseline frequency pruning.
///
/// Drops every concept whose frequency is strictly below the mean frequency
/// of the unpruned graph, except is-a ancestors of a surviving concept.
/// Links touching dropped concepts go with them. One pass; the mean is not
/// recomputed.
pub fn prune_baseline(g: &ConceptGraph) -> ConceptGraph {
    if g.is_empty() {
        return ConceptGraph::new();
    }
    let n = g.len() as u128;
    let total: u128 = g.freq.values().map(|&f| f as u128).sum();
    // freq >= total / n, without division
    let mut keep: BTreeSet<&str> =
        g.concepts().filter(|c| g.freq(c) as u128 * n >= total).collect();
    let mut stack: Vec<&str> = keep.iter().copied().collect();
    while let Some(c) = stack.pop() {
        for p in g.parents(c) {
            if keep.insert(p) {
                stack.push(p);
            }
        }
    }

    let mut out = ConceptGraph::new();
    for &c in &keep {
        out.set_freq(c, g.freq(c));
        if g.is_domain(c) {
            out.mark_domain(c);
        }
        if let Some(services) = g.providers(c) {
            for s in services {
                out.add_provider(c, s);
            }
        }
    }
    for (child, parent) in g.is_a_edges() {
        if keep.contains(child) && keep.contains(parent) {
            out.add_is_a(child, parent);
        }
    }
    out
}
