//! Random instance generators and brute-force oracles shared by the
//! integration tests. The oracles deliberately avoid library helpers beyond
//! plain accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use bpmn_weaver::bpmn::{FlowEdge, TaskIo};
use bpmn_weaver::registry::ComponentType;
use bpmn_weaver::{ConceptGraph, Node, NodeKind, ProcessGraph, QosRecord, ServiceRecord, Snapshot};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const VERBS: [&str; 12] =
    ["send", "check", "book", "print", "archive", "verify", "charge", "create", "generate", "cancel", "approve", "receive"];
pub const NOUNS: [&str; 14] = [
    "order", "invoice", "email", "payment", "parcel", "label", "customer", "stock", "receipt", "courier", "claim",
    "report", "account", "ticket",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn service(id: &str, inputs: BTreeSet<String>, outputs: BTreeSet<String>, qos: QosRecord) -> ServiceRecord {
    ServiceRecord {
        id: id.to_string(),
        publisher: "test".into(),
        component_type: ComponentType::CallServiceTask,
        last_use: None,
        url: format!("http://test.example.com/{id}"),
        description: format!("Serve the {id} request."),
        qos,
        operation_name: id.to_string(),
        inputs,
        outputs,
    }
}

pub fn random_qos(rng: &mut ChaCha8Rng, max_calls: u64) -> QosRecord {
    let calls = rng.gen_range(0..=max_calls);
    let available = rng.gen_range(0..=calls);
    let sum = if calls == 0 { 0 } else { rng.gen_range(0..=calls * 1000) };
    QosRecord::new(available, calls, sum).unwrap()
}

// ---------------------------------------------------------------- selection

/// Brute-force scan under (max a-n, min average response, min id), with
/// never-called services treated as infinitely slow.
pub fn oracle_select(ids: &[String], reg: &Snapshot) -> Option<String> {
    let mut best: Option<(i64, f64, &String)> = None;
    for id in ids {
        let q = reg.get(id).unwrap().qos;
        let v = q.available as i64 - q.calls as i64;
        let b = if q.calls == 0 { f64::INFINITY } else { q.response_sum_ms as f64 / q.calls as f64 };
        let better = match best {
            None => true,
            Some((bv, bb, bid)) => v > bv || (v == bv && (b < bb || (b == bb && id < bid))),
        };
        if better {
            best = Some((v, b, id));
        }
    }
    best.map(|(_, _, id)| id.clone())
}

// -------------------------------------------------------------- composition

pub struct Instance {
    pub services: Vec<(String, BTreeSet<String>, BTreeSet<String>, i64)>,
}

fn fires(seq: &[usize], inst: &Instance, available: &BTreeSet<String>) -> Option<BTreeSet<String>> {
    let mut state = available.clone();
    for &i in seq {
        let (_, ins, outs, _) = &inst.services[i];
        if !ins.is_subset(&state) {
            return None;
        }
        state.extend(outs.iter().cloned());
    }
    Some(state)
}

/// Exhaustive enumeration of every service sequence up to `max_depth`,
/// repeats allowed; best by (length, -total QoS, id sequence).
pub fn oracle_compose(
    inst: &Instance,
    available: &BTreeSet<String>,
    required: &BTreeSet<String>,
    max_depth: usize,
) -> Option<(Vec<String>, i64)> {
    let n = inst.services.len();
    for len in 0..=max_depth {
        let mut best: Option<(i64, Vec<String>)> = None;
        let total = n.pow(len as u32);
        for code in 0..total {
            let mut seq = Vec::with_capacity(len);
            let mut c = code;
            for _ in 0..len {
                seq.push(c % n);
                c /= n;
            }
            let Some(state) = fires(&seq, inst, available) else { continue };
            if !required.is_subset(&state) {
                continue;
            }
            let qos: i64 = seq.iter().map(|&i| inst.services[i].3).sum();
            let ids: Vec<String> = seq.iter().map(|&i| inst.services[i].0.clone()).collect();
            let better = match &best {
                None => true,
                Some((bq, bids)) => qos > *bq || (qos == *bq && ids < *bids),
            };
            if better {
                best = Some((qos, ids));
            }
        }
        if let Some((qos, ids)) = best {
            return Some((ids, qos));
        }
    }
    None
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_services: usize, types: &[String]) -> Instance {
    let count = rng.gen_range(1..=max_services);
    let mut services = Vec::new();
    for i in 0..count {
        let ins: BTreeSet<String> = types.iter().filter(|_| rng.gen_bool(0.25)).cloned().collect();
        let mut outs: BTreeSet<String> = types.iter().filter(|_| rng.gen_bool(0.2)).cloned().collect();
        if outs.is_empty() {
            outs.insert(types.choose(rng).unwrap().clone());
        }
        let failures = rng.gen_range(0..4);
        services.push((format!("s{i}"), ins, outs, -failures));
    }
    Instance { services }
}

// ----------------------------------------------------------------- matching

fn last_word(term: &str) -> Option<&str> {
    term.rsplit_once(' ').map(|(_, w)| w)
}

/// Minimum hop distance to every concept reachable upward from `term`.
fn upward(g: &ConceptGraph, term: &str, max_hops: u32) -> BTreeMap<String, u32> {
    let mut parents: HashMap<&str, Vec<&str>> = HashMap::new();
    for (c, p) in g.is_a_edges() {
        parents.entry(c).or_default().push(p);
    }
    let mut dist = BTreeMap::from([(term.to_string(), 0)]);
    let mut queue = VecDeque::from([term.to_string()]);
    while let Some(c) = queue.pop_front() {
        let d = dist[&c];
        if d == max_hops {
            continue;
        }
        let next: Vec<String> = if g.contains(&c) {
            parents.get(c.as_str()).into_iter().flatten().map(|s| s.to_string()).collect()
        } else {
            last_word(&c).map(str::to_string).into_iter().collect()
        };
        for p in next {
            if !dist.contains_key(&p) {
                dist.insert(p.clone(), d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// Every service's score under the exact/decayed-generalization formula,
/// filtered at `theta` and sorted by score then id.
pub fn oracle_match(
    terms: &BTreeSet<String>,
    g: &ConceptGraph,
    services: &[String],
    theta: f64,
    decay: f64,
    max_hops: u32,
) -> Vec<(String, f64)> {
    if terms.is_empty() {
        return Vec::new();
    }
    let reach: Vec<BTreeMap<String, u32>> = terms.iter().map(|t| upward(g, t, max_hops)).collect();
    let mut out = Vec::new();
    for s in services {
        let mut sum = 0.0;
        for r in &reach {
            let best = r
                .iter()
                .filter(|(c, _)| g.providers(c).is_some_and(|p| p.contains(s)))
                .map(|(_, &h)| decay.powi(h as i32))
                .fold(0.0, f64::max);
            sum += best;
        }
        let score = sum / terms.len() as f64;
        if score > 0.0 && score >= theta {
            out.push((s.clone(), score));
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Random concept graph over at most `max_concepts` concepts; multiword
/// concepts point at their head word, plus a few extra acyclic edges.
pub fn random_graph(rng: &mut ChaCha8Rng, max_concepts: usize, services: &[String]) -> ConceptGraph {
    let mut g = ConceptGraph::new();
    let target = rng.gen_range(1..=max_concepts);
    let mut names: Vec<String> = Vec::new();
    while names.len() < target {
        let noun = NOUNS.choose(rng).unwrap().to_string();
        let name = if rng.gen_bool(0.5) && names.len() + 1 < target {
            let m = NOUNS.choose(rng).unwrap();
            format!("{m} {noun}")
        } else if rng.gen_bool(0.3) {
            VERBS.choose(rng).unwrap().to_string()
        } else {
            noun
        };
        if names.contains(&name) {
            continue;
        }
        if let Some(head) = last_word(&name) {
            if !names.iter().any(|n| n == head) {
                if names.len() + 2 > target {
                    continue;
                }
                names.push(head.to_string());
            }
        }
        names.push(name);
    }
    for n in &names {
        g.set_freq(n, rng.gen_range(0..6));
        if let Some(head) = last_word(n) {
            g.add_is_a(n, head);
        }
        for s in services {
            if rng.gen_bool(0.3) {
                g.add_provider(n, s);
            }
        }
    }
    // extra edges from later to earlier single words keep the graph acyclic
    let singles: Vec<&String> = names.iter().filter(|n| !n.contains(' ')).collect();
    for i in 0..singles.len() {
        for j in 0..i {
            if rng.gen_bool(0.1) {
                g.add_is_a(singles[i], singles[j]);
            }
        }
    }
    g
}

// ------------------------------------------------------------------ process

fn sentence(rng: &mut ChaCha8Rng) -> String {
    let verb = VERBS.choose(rng).unwrap();
    let verb = format!("{}{}", verb[..1].to_uppercase(), &verb[1..]);
    if rng.gen_bool(0.5) {
        format!("{verb} the {} {}.", NOUNS.choose(rng).unwrap(), NOUNS.choose(rng).unwrap())
    } else {
        format!("{verb} the {}.", NOUNS.choose(rng).unwrap())
    }
}

pub fn description(rng: &mut ChaCha8Rng, sentences: usize) -> String {
    (0..sentences).map(|_| sentence(rng)).collect::<Vec<_>>().join(" ")
}

/// Registry with descriptions drawn from the shared word pools and random
/// typed operations over `types`.
pub fn random_registry(rng: &mut ChaCha8Rng, count: usize, types: &[String]) -> Vec<ServiceRecord> {
    (0..count)
        .map(|i| {
            let ins: BTreeSet<String> = types.iter().filter(|_| rng.gen_bool(0.25)).cloned().collect();
            let mut outs: BTreeSet<String> = types.iter().filter(|_| rng.gen_bool(0.25)).cloned().collect();
            if outs.is_empty() {
                outs.insert(types.choose(rng).unwrap().clone());
            }
            let mut r = service(&format!("svc-{i:02}"), ins, outs, random_qos(rng, 50));
            let sentences = rng.gen_range(1..=3);
            r.description = description(rng, sentences);
            r
        })
        .collect()
}

/// Random valid process: a start event, tasks in a chain with an optional
/// parallel split/join, and one end event.
pub fn random_process(rng: &mut ChaCha8Rng, tasks: usize, types: &[String]) -> ProcessGraph {
    let mut nodes = vec![Node::new("start", NodeKind::StartEvent)];
    let mut edges = Vec::new();
    let edge = |s: &str, t: &str, edges: &mut Vec<FlowEdge>| {
        let id = format!("f{}", edges.len());
        edges.push(FlowEdge::new(id, s, t));
    };
    let mut prev = vec!["start".to_string()];
    let mut i = 0;
    while i < tasks {
        let split = i + 1 < tasks && rng.gen_bool(0.3);
        let width = if split { 2 } else { 1 };
        let mut made = Vec::new();
        if split {
            let gw = format!("split{i}");
            nodes.push(Node::new(gw.clone(), NodeKind::ParallelGateway));
            for p in &prev {
                edge(p, &gw, &mut edges);
            }
            prev = vec![gw];
        }
        for _ in 0..width {
            let id = format!("t{i}");
            let sentences = rng.gen_range(1..=2);
            let mut t = Node::task(id.clone(), "", description(rng, sentences));
            if rng.gen_bool(0.3) {
                let out = types.choose(rng).unwrap().clone();
                t.io = Some(TaskIo { inputs: BTreeSet::new(), outputs: BTreeSet::from([out]) });
            }
            nodes.push(t);
            for p in &prev {
                edge(p, &id, &mut edges);
            }
            made.push(id);
            i += 1;
        }
        prev = made;
    }
    nodes.push(Node::new("end", NodeKind::EndEvent));
    for p in &prev {
        edge(p, "end", &mut edges);
    }
    let inputs: BTreeSet<String> = types.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    ProcessGraph { id: "proc".into(), nodes, edges, inputs }
}

pub fn types(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("T{i}")).collect()
}

pub fn shuffled<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}
