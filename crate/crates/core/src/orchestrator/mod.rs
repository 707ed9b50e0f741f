//! Drives resolution of every task in a design: extract keywords, match,
//! select, and fall back to composition.

mod report;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

pub use report::{ReportCounters, ResolutionReport, TaskOutcome};

use crate::bpmn::{validate, Binding, Diagnostic, Node, ProcessGraph, Resolution, UnresolvedReason};
use crate::composition::{plan_with_memo, CompositionGoal};
use crate::config::Config;
use crate::exec::map_ordered;
use crate::keywords::{Extractor, KeywordError, KeywordSet, Lexicon};
use crate::matching::match_task;
use crate::ontology::{ConceptGraph, ProcessMemo};
use crate::registry::Snapshot;
use crate::selection::{qos_value, select_best};
use crate::stats::Counters;

#[derive(Debug, Error)]
pub enum OrchestratorError {
    #[error("invalid design: {0}")]
    InvalidDesign(Diagnostic),
    #[error("ontology references service `{0}`, which is not in the registry")]
    OntologyRegistryMismatch(String),
    #[error(transparent)]
    Keywords(#[from] KeywordError),
}

struct Resolved {
    outcome: TaskOutcome,
    resolution: Resolution,
    outputs: BTreeSet<String>,
    memo_write: Option<(KeywordSet, Vec<String>)>,
}

/// Resolution context bound to one registry snapshot and concept graph.
pub struct Orchestrator<'a> {
    snapshot: &'a Snapshot,
    graph: &'a ConceptGraph,
    config: &'a Config,
    extractor: Extractor,
    counters: Counters,
}

impl<'a> Orchestrator<'a> {
    pub fn new(snapshot: &'a Snapshot, graph: &'a ConceptGraph, config: &'a Config) -> Result<Self, OrchestratorError> {
        Self::with_lexicon(snapshot, graph, config, Lexicon::builtin())
    }

    pub fn with_lexicon(
        snapshot: &'a Snapshot,
        graph: &'a ConceptGraph,
        config: &'a Config,
        lexicon: Arc<Lexicon>,
    ) -> Result<Self, OrchestratorError> {
        if let Some(missing) = graph.services().into_iter().find(|s| !snapshot.contains(s)) {
            return Err(OrchestratorError::OntologyRegistryMismatch(missing.to_string()));
        }
        let extractor = Extractor::new(lexicon, &config.chunk_pattern)?;
        Ok(Self { snapshot, graph, config, extractor, counters: Counters::new() })
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn extractor(&self) -> &Extractor {
        &self.extractor
    }

    /// Text keywords are drawn from for `task`.
    pub fn task_text(&self, task: &Node) -> String {
        if self.config.use_name && !task.name.is_empty() {
            format!("{} {}", task.description, task.name)
        } else {
            task.description.clone()
        }
    }

    pub fn task_keywords(&self, task: &Node) -> KeywordSet {
        self.extractor.extract(&self.task_text(task))
    }

    fn resolve(&self, task: &Node, available: &BTreeSet<String>, memo: &ProcessMemo) -> Resolved {
        let k = self.task_keywords(task);
        let cands = match_task(&k, self.graph, self.snapshot, &self.config.matching, self.config.execution);
        self.counters.record_match(cands.len());
        if !cands.is_empty() {
            let id = select_best(&cands, self.snapshot, self.config.select.score_first)
                .expect("ontology services are in the snapshot")
                .expect("candidates are non-empty");
            let cand = cands.iter().find(|c| c.service_id == id).expect("selected from candidates");
            let rec = self.snapshot.get(&id).expect("checked by select_best");
            let qos = qos_value(&rec.qos);
            return Resolved {
                outcome: TaskOutcome::BoundSingle { service_id: id.clone(), score: cand.score, qos },
                resolution: Resolution::Bound(Binding::single(id, cand.matched_concepts.clone(), qos, cand.score)),
                outputs: rec.outputs.clone(),
                memo_write: None,
            };
        }

        self.counters.record_composition_attempt();
        let unresolved = |reason| Resolved {
            outcome: TaskOutcome::Unresolved { reason },
            resolution: Resolution::Unresolved(reason),
            outputs: BTreeSet::new(),
            memo_write: None,
        };
        let io = task.io.clone().unwrap_or_default();
        let required: BTreeSet<String> = if io.outputs.is_empty() {
            let vocab = self.snapshot.io_vocabulary();
            k.head_nouns.iter().filter(|h| vocab.contains(h.as_str())).cloned().collect()
        } else {
            io.outputs
        };
        if required.is_empty() {
            return unresolved(UnresolvedReason::NoMatch);
        }
        let goal = CompositionGoal { available: available.union(&io.inputs).cloned().collect(), required };
        let planned = plan_with_memo(
            &goal,
            self.snapshot,
            memo,
            &k,
            &self.config.compose,
            Some(self.graph),
            &self.counters,
        );
        match planned.plan {
            None => unresolved(UnresolvedReason::CompositionFailed),
            Some(p) if p.is_empty() => unresolved(UnresolvedReason::NoMatch),
            Some(p) => {
                let outputs = p
                    .services
                    .iter()
                    .flat_map(|s| self.snapshot.get(s).expect("planned from snapshot").outputs.iter().cloned())
                    .collect();
                Resolved {
                    outcome: TaskOutcome::BoundComposite { services: p.services.clone(), total_qos: p.total_qos },
                    resolution: Resolution::Bound(Binding::chain(p.services.clone(), p.total_qos)),
                    outputs,
                    memo_write: planned.record.then_some((k, p.services)),
                }
            }
        }
    }

    /// Binds every task of `design`.
    ///
    /// Tasks are visited by topological rank. Tasks of one rank see the same
    /// available types and memo, so they may run in parallel; their outputs
    /// and memo writes are applied in document order once the rank is done.
    pub fn implement(
        &self,
        design: &ProcessGraph,
        memo: &mut ProcessMemo,
    ) -> Result<(ProcessGraph, ResolutionReport), OrchestratorError> {
        if let Some(d) = validate(design).into_iter().next() {
            return Err(OrchestratorError::InvalidDesign(d));
        }
        let mut out = design.strip_resolutions();
        let mut report = ResolutionReport { config_echo: self.config.echo(), ..Default::default() };
        let mut available = design.inputs.clone();
        for rank in design.task_ranks() {
            let memo_view: &ProcessMemo = memo;
            let resolved = map_ordered(self.config.execution, &rank, |&i| {
                self.resolve(&design.nodes[i], &available, memo_view)
            });
            for (i, r) in rank.into_iter().zip(resolved) {
                let node = &mut out.nodes[i];
                report.push(&node.id, r.outcome);
                node.resolution = Some(r.resolution);
                available.extend(r.outputs);
                if let Some((k, services)) = r.memo_write {
                    memo.record(&k, services);
                }
            }
        }
        Ok((out, report))
    }
}

/// Binds every task of `design` with the built-in lexicon.
pub fn implement_process(
    design: &ProcessGraph,
    reg: &Snapshot,
    g: &ConceptGraph,
    memo: &mut ProcessMemo,
    cfg: &Config,
) -> Result<(ProcessGraph, ResolutionReport), OrchestratorError> {
    Orchestrator::new(reg, g, cfg)?.implement(design, memo)
}
