use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bpmn::{BindingKind, ProcessGraph, Resolution, UnresolvedReason};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum TaskOutcome {
    #[serde(rename_all = "camelCase")]
    BoundSingle { service_id: String, score: f64, qos: i64 },
    #[serde(rename_all = "camelCase")]
    BoundComposite { services: Vec<String>, total_qos: i64 },
    Unresolved { reason: UnresolvedReason },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCounters {
    pub tasks: usize,
    pub matched: usize,
    pub composed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolutionReport {
    pub per_task: BTreeMap<String, TaskOutcome>,
    pub counters: ReportCounters,
    pub config_echo: BTreeMap<String, String>,
}

impl ResolutionReport {
    pub(crate) fn push(&mut self, task: &str, outcome: TaskOutcome) {
        self.counters.tasks += 1;
        match &outcome {
            TaskOutcome::BoundSingle { .. } => self.counters.matched += 1,
            TaskOutcome::BoundComposite { .. } => self.counters.composed += 1,
            TaskOutcome::Unresolved { .. } => self.counters.failed += 1,
        }
        self.per_task.insert(task.to_string(), outcome);
    }

    pub fn all_bound(&self) -> bool {
        self.counters.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Whether every outcome agrees with the resolution on the same task in
    /// `graph`, and the graph has no other tasks.
    pub fn consistent_with(&self, graph: &ProcessGraph) -> bool {
        let tasks: Vec<_> = graph.tasks().collect();
        tasks.len() == self.per_task.len()
            && tasks.iter().all(|t| {
                let Some(outcome) = self.per_task.get(&t.id) else { return false };
                match (outcome, &t.resolution) {
                    (TaskOutcome::BoundSingle { service_id, score, qos }, Some(Resolution::Bound(b))) => {
                        b.kind == BindingKind::Single
                            && b.services == [service_id.clone()]
                            && b.score == *score
                            && b.qos == *qos
                    }
                    (TaskOutcome::BoundComposite { services, total_qos }, Some(Resolution::Bound(b))) => {
                        b.services == *services && b.qos == *total_qos
                    }
                    (TaskOutcome::Unresolved { reason }, Some(Resolution::Unresolved(r))) => reason == r,
                    _ => false,
                }
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_stable() {
        let mut r = ResolutionReport::default();
        r.push("t1", TaskOutcome::BoundSingle { service_id: "svc".into(), score: 1.0, qos: -2 });
        r.push("t2", TaskOutcome::Unresolved { reason: UnresolvedReason::NoMatch });
        let json = r.to_json();
        assert!(json.contains("\"outcome\": \"boundSingle\""));
        assert!(json.contains("\"serviceId\": \"svc\""));
        assert!(json.contains("\"reason\": \"NO_MATCH\""));
        assert!(json.find("perTask").unwrap() < json.find("configEcho").unwrap());
        assert_eq!(serde_json::from_str::<ResolutionReport>(&json).unwrap(), r);
        assert_eq!(r.counters, ReportCounters { tasks: 2, matched: 1, composed: 0, failed: 1 });
    }
}
