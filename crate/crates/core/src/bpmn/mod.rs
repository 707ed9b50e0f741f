//! Process model: the design-input dialect, its validation, and the
//! implemented-output writer.

mod emit;
mod parse;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use emit::emit_implemented;
pub use parse::parse_design;
pub use validate::{validate, Diagnostic, DiagnosticCode};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("schema violation in <{element}>{}: {reason}", id.as_ref().map(|i| format!(" `{i}`")).unwrap_or_default())]
    SchemaViolation { element: String, id: Option<String>, reason: String },
    #[error("invalid process graph: {0}")]
    GraphInvalid(Diagnostic),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Task,
    StartEvent,
    EndEvent,
    ExclusiveGateway,
    ParallelGateway,
}

impl NodeKind {
    pub fn element_name(self) -> &'static str {
        match self {
            NodeKind::Task => "task",
            NodeKind::StartEvent => "startEvent",
            NodeKind::EndEvent => "endEvent",
            NodeKind::ExclusiveGateway => "exclusiveGateway",
            NodeKind::ParallelGateway => "parallelGateway",
        }
    }

    pub fn from_element_name(name: &str) -> Option<Self> {
        Some(match name {
            "task" => NodeKind::Task,
            "startEvent" => NodeKind::StartEvent,
            "endEvent" => NodeKind::EndEvent,
            "exclusiveGateway" => NodeKind::ExclusiveGateway,
            "parallelGateway" => NodeKind::ParallelGateway,
            _ => return None,
        })
    }
}

/// Declared data types a task consumes and produces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaskIo {
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingKind {
    Single,
    Composite,
}

impl BindingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BindingKind::Single => "single",
            BindingKind::Composite => "composite",
        }
    }
}

/// Service assignment for a resolved task.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub kind: BindingKind,
    /// Execution order; exactly one element for [`BindingKind::Single`].
    pub services: Vec<String>,
    pub matched_concepts: BTreeSet<String>,
    pub qos: i64,
    pub score: f64,
}

impl Binding {
    pub fn single(service: String, matched_concepts: BTreeSet<String>, qos: i64, score: f64) -> Self {
        Self { kind: BindingKind::Single, services: vec![service], matched_concepts, qos, score }
    }

    /// Binds a service chain; a one-element chain is recorded as a single binding.
    pub fn chain(services: Vec<String>, qos: i64) -> Self {
        let kind = if services.len() == 1 { BindingKind::Single } else { BindingKind::Composite };
        Self { kind, services, matched_concepts: BTreeSet::new(), qos, score: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnresolvedReason {
    #[serde(rename = "NO_MATCH")]
    NoMatch,
    #[serde(rename = "COMPOSITION_FAILED")]
    CompositionFailed,
}

impl UnresolvedReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnresolvedReason::NoMatch => "NO_MATCH",
            UnresolvedReason::CompositionFailed => "COMPOSITION_FAILED",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "NO_MATCH" => Some(UnresolvedReason::NoMatch),
            "COMPOSITION_FAILED" => Some(UnresolvedReason::CompositionFailed),
            _ => None,
        }
    }
}

impl fmt::Display for UnresolvedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome attached to a task in the implemented document.
#[derive(Clone, Debug, PartialEq)]
pub enum Resolution {
    Bound(Binding),
    Unresolved(UnresolvedReason),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub name: String,
    /// Natural-language requirement; empty for non-task nodes.
    pub description: String,
    pub io: Option<TaskIo>,
    pub resolution: Option<Resolution>,
}

impl Node {
    pub fn new(id: impl Into<String>, kind: NodeKind) -> Self {
        Self {
            id: id.into(),
            kind,
            name: String::new(),
            description: String::new(),
            io: None,
            resolution: None,
        }
    }

    pub fn task(id: impl Into<String>, name: impl Into<String>, description: impl Into<String>) -> Self {
        Self { name: name.into(), description: description.into(), ..Node::new(id, NodeKind::Task) }
    }

    pub fn is_task(&self) -> bool {
        self.kind == NodeKind::Task
    }

    pub fn binding(&self) -> Option<&Binding> {
        match &self.resolution {
            Some(Resolution::Bound(b)) => Some(b),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowEdge {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl FlowEdge {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Self { id: id.into(), source: source.into(), target: target.into() }
    }
}

/// A business process: nodes and flows in document order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProcessGraph {
    pub id: String,
    pub nodes: Vec<Node>,
    pub edges: Vec<FlowEdge>,
    /// Data types available when the process starts.
    pub inputs: BTreeSet<String>,
}

impl ProcessGraph {
    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.is_task())
    }

    /// Copy of the graph with every task resolution removed.
    pub fn strip_resolutions(&self) -> ProcessGraph {
        let mut g = self.clone();
        for n in &mut g.nodes {
            n.resolution = None;
        }
        g
    }

    /// Layered topological order over all nodes.
    ///
    /// Each layer holds the nodes whose predecessors all sit in earlier
    /// layers, in document order. When only cycles remain, the earliest
    /// remaining node in document order is released on its own.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let index: HashMap<&str, usize> =
            self.nodes.iter().enumerate().rev().map(|(i, n)| (n.id.as_str(), i)).collect();
        let mut indegree = vec![0usize; self.nodes.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if let (Some(&s), Some(&t)) = (index.get(e.source.as_str()), index.get(e.target.as_str())) {
                if s != t {
                    indegree[t] += 1;
                    succ[s].push(t);
                }
            }
        }
        let mut done = vec![false; self.nodes.len()];
        let mut remaining = self.nodes.len();
        let mut layers = Vec::new();
        while remaining > 0 {
            let mut layer: Vec<usize> =
                (0..self.nodes.len()).filter(|&i| !done[i] && indegree[i] == 0).collect();
            if layer.is_empty() {
                // cycle: release the first remaining node
                layer.push((0..self.nodes.len()).find(|&i| !done[i]).expect("remaining > 0"));
            }
            for &i in &layer {
                done[i] = true;
                remaining -= 1;
            }
            for &i in &layer {
                for &t in &succ[i] {
                    indegree[t] = indegree[t].saturating_sub(1);
                }
            }
            layers.push(layer);
        }
        layers
    }

    /// Task indices grouped by topological rank; empty ranks are dropped.
    pub fn task_ranks(&self) -> Vec<Vec<usize>> {
        self.layers()
            .into_iter()
            .map(|layer| layer.into_iter().filter(|&i| self.nodes[i].is_task()).collect::<Vec<_>>())
            .filter(|layer| !layer.is_empty())
            .collect()
    }

    /// Task ids in visiting order.
    pub fn task_order(&self) -> Vec<&str> {
        self.task_ranks().into_iter().flatten().map(|i| self.nodes[i].id.as_str()).collect()
    }
}
