use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::{NodeKind, ProcessGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    DuplicateId,
    MissingStart,
    MultipleStart,
    MissingEnd,
    DanglingEdge,
    SelfLoop,
    Unreachable,
    EmptyDescription,
}

/// One invariant violation, pointing at the offending node or flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub id: String,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, id: impl Into<String>) -> Self {
        Self { code, id: id.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at `{}`", self.code, self.id)
    }
}

/// Checks the process graph invariants; an empty result means the graph is valid.
pub fn validate(graph: &ProcessGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut seen = HashSet::new();
    for id in graph.nodes.iter().map(|n| &n.id).chain(graph.edges.iter().map(|e| &e.id)) {
        if !seen.insert(id.as_str()) {
            out.push(Diagnostic::new(DiagnosticCode::DuplicateId, id.clone()));
        }
    }

    let starts: Vec<&str> = graph
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::StartEvent)
        .map(|n| n.id.as_str())
        .collect();
    match starts.len() {
        0 => out.push(Diagnostic::new(DiagnosticCode::MissingStart, graph.id.clone())),
        1 => {}
        _ => out.push(Diagnostic::new(DiagnosticCode::MultipleStart, starts[1])),
    }
    if !graph.nodes.iter().any(|n| n.kind == NodeKind::EndEvent) {
        out.push(Diagnostic::new(DiagnosticCode::MissingEnd, graph.id.clone()));
    }

    for n in graph.tasks() {
        if n.description.trim().is_empty() {
            out.push(Diagnostic::new(DiagnosticCode::EmptyDescription, n.id.clone()));
        }
    }

    let index: HashMap<&str, usize> =
        graph.nodes.iter().enumerate().rev().map(|(i, n)| (n.id.as_str(), i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); graph.nodes.len()];
    for e in &graph.edges {
        if e.source == e.target {
            out.push(Diagnostic::new(DiagnosticCode::SelfLoop, e.id.clone()));
            continue;
        }
        match (index.get(e.source.as_str()), index.get(e.target.as_str())) {
            (Some(&s), Some(&t)) => succ[s].push(t),
            _ => out.push(Diagnostic::new(DiagnosticCode::DanglingEdge, e.id.clone())),
        }
    }

    if !starts.is_empty() {
        let mut reached = vec![false; graph.nodes.len()];
        let mut queue: VecDeque<usize> = starts.iter().map(|s| index[s]).collect();
        for &s in &queue {
            reached[s] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &t in &succ[i] {
                if !reached[t] {
                    reached[t] = true;
                    queue.push_back(t);
                }
            }
        }
        for (i, n) in graph.nodes.iter().enumerate() {
            // duplicates are already reported; only the first occurrence is indexed
            if !reached[i] && index[n.id.as_str()] == i {
                out.push(Diagnostic::new(DiagnosticCode::Unreachable, n.id.clone()));
            }
        }
    }

    out
}
