//! Tab-separated triple serialization of a [`ConceptGraph`].
//!
//! Predicates: `isA`, `providedBy`, `freq`, `isDomain`. Lines are sorted by
//! subject, predicate, object so output is canonical.

use super::{ConceptGraph, OntologyError};

pub fn save_triples(g: &ConceptGraph) -> String {
    let mut triples: Vec<(&str, &str, String)> = Vec::new();
    for c in g.concepts() {
        triples.push((c, "freq", g.freq(c).to_string()));
    }
    for (child, parent) in g.is_a_edges() {
        triples.push((child, "isA", parent.to_string()));
    }
    for (c, services) in &g.provided_by {
        for s in services {
            triples.push((c, "providedBy", s.clone()));
        }
    }
    for c in g.domain_concepts() {
        triples.push((c, "isDomain", "true".to_string()));
    }
    triples.sort();
    let mut out = String::new();
    for (s, p, o) in triples {
        out.push_str(s);
        out.push('\t');
        out.push_str(p);
        out.push('\t');
        out.push_str(&o);
        out.push('\n');
    }
    out
}

pub fn load_triples(text: &str) -> Result<ConceptGraph, OntologyError> {
    let mut g = ConceptGraph::new();
    let mut seen_freq = std::collections::HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = || OntologyError::MalformedTriple(idx + 1);
        let mut parts = line.split('\t');
        let (Some(s), Some(p), Some(o), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        if s.is_empty() || o.is_empty() {
            return Err(bad());
        }
        match p {
            "isA" => {
                if s == o {
                    return Err(bad());
                }
                g.add_is_a(s, o);
            }
            "providedBy" => g.add_provider(s, o),
            "freq" => {
                if !seen_freq.insert(s.to_string()) {
                    return Err(bad());
                }
                g.set_freq(s, o.parse().map_err(|_| bad())?);
            }
            "isDomain" if o == "true" => g.mark_domain(s),
            _ => return Err(bad()),
        }
    }
    g.check_acyclic()?;
    Ok(g)
}
