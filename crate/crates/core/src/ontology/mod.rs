//! Service/domain concept graph learned from service descriptions, baseline
//! pruning, triple-file persistence, and the process memo of validated
//! compositions.

mod build;
mod memo;
mod prune;
mod triples;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub use build::build_service_ontology;
pub use memo::{MemoError, ProcessMemo};
pub use prune::prune_baseline;
pub use triples::{load_triples, save_triples};

#[derive(Debug, Error, PartialEq)]
pub enum OntologyError {
    #[error("cannot build an ontology from an empty registry")]
    EmptyRegistry,
    #[error("triple line {0} is malformed")]
    MalformedTriple(usize),
    #[error("isA edges form a cycle through `{0}`")]
    Cyclic(String),
}

/// Concepts with is-a edges (child → parent), provider links and occurrence
/// counts. `freq` has an entry for every concept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConceptGraph {
    pub(crate) concepts: BTreeSet<String>,
    pub(crate) is_a: BTreeSet<(String, String)>,
    pub(crate) provided_by: BTreeMap<String, BTreeSet<String>>,
    pub(crate) freq: BTreeMap<String, u64>,
    pub(crate) domain: BTreeSet<String>,
}

impl ConceptGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_concept(&mut self, concept: &str) {
        if self.concepts.insert(concept.to_string()) {
            self.freq.insert(concept.to_string(), 0);
        }
    }

    /// Adds one occurrence of `concept`.
    pub fn bump(&mut self, concept: &str) {
        self.add_concept(concept);
        *self.freq.get_mut(concept).expect("added above") += 1;
    }

    pub fn set_freq(&mut self, concept: &str, freq: u64) {
        self.add_concept(concept);
        self.freq.insert(concept.to_string(), freq);
    }

    pub fn add_is_a(&mut self, child: &str, parent: &str) {
        self.add_concept(child);
        self.add_concept(parent);
        self.is_a.insert((child.to_string(), parent.to_string()));
    }

    pub fn add_provider(&mut self, concept: &str, service: &str) {
        self.add_concept(concept);
        self.provided_by.entry(concept.to_string()).or_default().insert(service.to_string());
    }

    pub fn mark_domain(&mut self, concept: &str) {
        self.add_concept(concept);
        self.domain.insert(concept.to_string());
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.concepts.contains(concept)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &str> {
        self.concepts.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn freq(&self, concept: &str) -> u64 {
        self.freq.get(concept).copied().unwrap_or(0)
    }

    pub fn is_domain(&self, concept: &str) -> bool {
        self.domain.contains(concept)
    }

    pub fn domain_concepts(&self) -> impl Iterator<Item = &str> {
        self.domain.iter().map(String::as_str)
    }

    pub fn is_a_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.is_a.iter().map(|(c, p)| (c.as_str(), p.as_str()))
    }

    pub fn parents<'a>(&'a self, concept: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.is_a
            .range((concept.to_string(), String::new())..)
            .take_while(move |(c, _)| c == concept)
            .map(|(_, p)| p.as_str())
    }

    pub fn providers(&self, concept: &str) -> Option<&BTreeSet<String>> {
        self.provided_by.get(concept)
    }

    pub fn provides(&self, concept: &str, service: &str) -> bool {
        self.provided_by.get(concept).is_some_and(|s| s.contains(service))
    }

    /// Every service id referenced by a provider link.
    pub fn services(&self) -> BTreeSet<&str> {
        self.provided_by.values().flatten().map(String::as_str).collect()
    }

    /// Upward generalizations of `term` within `max_hops`, with hop counts
    /// and the parent each was reached from.
    ///
    /// A multiword term absent from the graph generalizes to its final word,
    /// the same head-noun rule the builder uses.
    pub fn generalizations(&self, term: &str, max_hops: u32) -> Vec<(String, u32, Option<String>)> {
        let mut seen: HashMap<String, (u32, Option<String>)> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(term.to_string(), (0, None));
        order.push(term.to_string());
        queue.push_back(term.to_string());
        while let Some(current) = queue.pop_front() {
            let hops = seen[&current].0;
            if hops >= max_hops {
                continue;
            }
            let parents: Vec<String> = if self.contains(&current) {
                self.parents(&current).map(str::to_string).collect()
            } else {
                head_word(&current).map(str::to_string).into_iter().collect()
            };
            for p in parents {
                if !seen.contains_key(&p) {
                    seen.insert(p.clone(), (hops + 1, Some(current.clone())));
                    order.push(p.clone());
                    queue.push_back(p);
                }
            }
        }
        order
            .into_iter()
            .map(|c| {
                let (hops, via) = seen.remove(&c).expect("recorded");
                (c, hops, via)
            })
            .collect()
    }

    /// Checks that is-a edges are acyclic.
    pub fn check_acyclic(&self) -> Result<(), OntologyError> {
        // Kahn over child -> parent edges
        let mut indegree: BTreeMap<&str, usize> = self.concepts.iter().map(|c| (c.as_str(), 0)).collect();
        for (_, p) in &self.is_a {
            *indegree.entry(p.as_str()).or_insert(0) += 1;
        }
        let mut queue: VecDeque<&str> =
            indegree.iter().filter(|(_, &d)| d == 0).map(|(c, _)| *c).collect();
        let mut visited = 0;
        while let Some(c) = queue.pop_front() {
            visited += 1;
            for p in self.parents(c) {
                let d = indegree.get_mut(p).expect("parent indexed");
                *d -= 1;
                if *d == 0 {
                    queue.push_back(p);
                }
            }
        }
        if visited == indegree.len() {
            Ok(())
        } else {
            let stuck = indegree.iter().find(|(_, &d)| d > 0).map(|(c, _)| c.to_string()).unwrap_or_default();
            Err(OntologyError::Cyclic(stuck))
        }
    }
}

/// Final word of a multiword term.
pub(crate) fn head_word(term: &str) -> Option<&str> {
    term.rsplit_once(' ').map(|(_, head)| head)
}
