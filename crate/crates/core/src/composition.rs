//! Chains services over typed inputs and outputs when no single service
//! matches a task.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::config::ComposeConfig;
use crate::keywords::KeywordSet;
use crate::ontology::{ConceptGraph, ProcessMemo};
use crate::registry::Snapshot;
use crate::selection::qos_value;
use crate::stats::Counters;

#[derive(Debug, Error, PartialEq)]
pub enum CompositionError {
    #[error("unknown service id `{0}`")]
    UnknownServiceId(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompositionGoal {
    pub available: BTreeSet<String>,
    pub required: BTreeSet<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompositionPlan {
    /// Firing order.
    pub services: Vec<String>,
    pub total_qos: i64,
}

impl CompositionPlan {
    pub fn len(&self) -> usize {
        self.services.len()
    }

    pub fn is_empty(&self) -> bool {
        self.services.is_empty()
    }
}

/// Adds every is-a ancestor of the types in `set`.
fn close_upward(set: &mut BTreeSet<String>, isa: &ConceptGraph) {
    let mut stack: Vec<String> = set.iter().cloned().collect();
    while let Some(t) = stack.pop() {
        for p in isa.parents(&t) {
            if set.insert(p.to_string()) {
                stack.push(p.to_string());
            }
        }
    }
}

/// Whether firing `plan` from `goal.available` reaches `goal.required`.
///
/// A service fires only when all its inputs are present; firing adds its
/// outputs. With `isa`, every state is closed upward under is-a.
pub fn replay(
    plan: &CompositionPlan,
    goal: &CompositionGoal,
    reg: &Snapshot,
    isa: Option<&ConceptGraph>,
) -> Result<bool, CompositionError> {
    let mut state = goal.available.clone();
    if let Some(g) = isa {
        close_upward(&mut state, g);
    }
    let mut fired_all = true;
    for id in &plan.services {
        let rec = reg.get(id).ok_or_else(|| CompositionError::UnknownServiceId(id.clone()))?;
        if fired_all && rec.inputs.is_subset(&state) {
            state.extend(rec.outputs.iter().cloned());
            if let Some(g) = isa {
                close_upward(&mut state, g);
            }
        } else {
            fired_all = false;
        }
    }
    Ok(fired_all && goal.required.is_subset(&state))
}

type Bits = Vec<u64>;

fn has(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut Bits, i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn union(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

struct Action {
    id: String,
    qos: i64,
    inputs: Bits,
    outputs: Bits,
}

/// Total QoS and action indices of a plan.
type Scored = (i64, Vec<usize>);

/// Best fixed-length plans over interned type sets.
struct Search {
    actions: Vec<Action>,
    required: Bits,
    /// Per type index, the indices of its is-a ancestors (when enabled).
    ancestors: Option<Vec<Vec<usize>>>,
    memo: HashMap<(Bits, usize), Option<Scored>>,
}

impl Search {
    fn new(goal: &CompositionGoal, reg: &Snapshot, isa: Option<&ConceptGraph>) -> (Self, Bits) {
        let mut vocab: BTreeSet<String> = goal.available.iter().chain(&goal.required).cloned().collect();
        for r in reg.records() {
            vocab.extend(r.inputs.iter().chain(&r.outputs).cloned());
        }
        if let Some(g) = isa {
            close_upward(&mut vocab, g);
        }
        let index: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
        let words = vocab.len().div_ceil(64).max(1);
        let bits_of = |types: &BTreeSet<String>| {
            let mut b = vec![0; words];
            for t in types {
                set(&mut b, index[t.as_str()]);
            }
            b
        };
        let ancestors = isa.map(|g| {
            vocab
                .iter()
                .map(|t| {
                    let mut up = BTreeSet::from([t.clone()]);
                    close_upward(&mut up, g);
                    up.iter().filter(|u| *u != t).map(|u| index[u.as_str()]).collect()
                })
                .collect()
        });
        let actions = reg
            .records()
            .map(|r| Action { id: r.id.clone(), qos: qos_value(&r.qos), inputs: bits_of(&r.inputs), outputs: bits_of(&r.outputs) })
            .collect();
        let s = Search { actions, required: bits_of(&goal.required), ancestors, memo: HashMap::new() };
        let start = s.close(bits_of(&goal.available));
        (s, start)
    }

    fn close(&self, mut bits: Bits) -> Bits {
        if let Some(anc) = &self.ancestors {
            for (i, parents) in anc.iter().enumerate() {
                if has(&bits, i) {
                    for &p in parents {
                        set(&mut bits, p);
                    }
                }
            }
        }
        bits
    }

    /// Best plan of exactly `steps` state-growing firings that ends with
    /// `required` covered: max total QoS, then smallest id sequence.
    fn best(&mut self, state: &Bits, steps: usize) -> Option<Scored> {
        if steps == 0 {
            return subset(&self.required, state).then(|| (0, Vec::new()));
        }
        let key = (state.clone(), steps);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut best: Option<Scored> = None;
        for a in 0..self.actions.len() {
            let act = &self.actions[a];
            if !subset(&act.inputs, state) || subset(&act.outputs, state) {
                continue;
            }
            let (qos, next) = (act.qos, self.close(union(state, &act.outputs)));
            if &next == state {
                continue;
            }
            if let Some((q, rest)) = self.best(&next, steps - 1) {
                let mut seq = Vec::with_capacity(steps);
                seq.push(a);
                seq.extend(rest);
                let cand = (qos + q, seq);
                let better = match &best {
                    None => true,
                    Some((bq, bseq)) => cand.0 > *bq || (cand.0 == *bq && self.ids_less(&cand.1, bseq)),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        self.memo.insert(key, best.clone());
        best
    }

    fn ids_less(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().map(|&i| &self.actions[i].id).lt(b.iter().map(|&i| &self.actions[i].id))
    }
}

/// Shortest chain reaching `goal.required`, by search only.
///
/// Among the shortest chains the highest total QoS wins, then the
/// lexicographically smallest id sequence.
pub fn search(goal: &CompositionGoal, reg: &Snapshot, cfg: &ComposeConfig, isa: Option<&ConceptGraph>) -> Option<CompositionPlan> {
    let (mut s, start) = Search::new(goal, reg, isa);
    if subset(&s.required, &start) {
        return Some(CompositionPlan::default());
    }
    for depth in 1..=cfg.max_depth {
        if let Some((total_qos, seq)) = s.best(&start, depth) {
            let services = seq.into_iter().map(|i| s.actions[i].id.clone()).collect();
            return Some(CompositionPlan { services, total_qos });
        }
    }
    None
}

/// Result of planning against a read-only memo.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Planned {
    pub plan: Option<CompositionPlan>,
    /// Set when a fresh non-empty plan should be stored in the memo.
    pub record: bool,
}

pub(crate) fn plan_with_memo(
    goal: &CompositionGoal,
    reg: &Snapshot,
    memo: &ProcessMemo,
    k: &KeywordSet,
    cfg: &ComposeConfig,
    isa: Option<&ConceptGraph>,
    counters: &Counters,
) -> Planned {
    let isa = if cfg.use_isa { isa } else { None };
    if goal.required.is_subset(&goal.available) {
        return Planned { plan: Some(CompositionPlan::default()), record: false };
    }
    if let Some(services) = memo.lookup(k) {
        if services.iter().all(|s| reg.contains(s)) {
            let total_qos = services.iter().map(|s| qos_value(&reg.get(s).expect("checked").qos)).sum();
            let plan = CompositionPlan { services: services.to_vec(), total_qos };
            if replay(&plan, goal, reg, isa) == Ok(true) {
                counters.record_memo_hit();
                return Planned { plan: Some(plan), record: false };
            }
        }
    }
    counters.record_search();
    let plan = search(goal, reg, cfg, isa);
    let record = plan.as_ref().is_some_and(|p| !p.is_empty());
    Planned { plan, record }
}

/// Finds a service chain for `goal`, consulting and updating `memo`.
///
/// A memo entry under `k` is reused when it still replays against the
/// current registry; otherwise the search runs and its plan replaces the
/// entry. `isa` is only consulted when `cfg.use_isa` is set.
pub fn compose(
    goal: &CompositionGoal,
    reg: &Snapshot,
    memo: &mut ProcessMemo,
    k: &KeywordSet,
    cfg: &ComposeConfig,
    isa: Option<&ConceptGraph>,
    counters: &Counters,
) -> Option<CompositionPlan> {
    let planned = plan_with_memo(goal, reg, memo, k, cfg, isa, counters);
    if planned.record {
        if let Some(p) = &planned.plan {
            memo.record(k, p.services.clone());
        }
    }
    planned.plan
}
