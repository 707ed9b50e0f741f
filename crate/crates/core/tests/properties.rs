mod common;

use std::collections::BTreeSet;

use bpmn_weaver::composition::search;
use bpmn_weaver::config::{ComposeConfig, MatchConfig};
use bpmn_weaver::keywords::normalize;
use bpmn_weaver::{
    build_service_ontology, explain_match, implement_process, match_task, prune_baseline, replay, select_best,
    CompositionGoal, Config, Execution, Extractor, KeywordSet, ProcessMemo, QosRecord, Registry,
};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn keywords_for(r: &mut rand_chacha::ChaCha8Rng, g: &bpmn_weaver::ConceptGraph) -> KeywordSet {
    let concepts: Vec<String> = g.concepts().map(str::to_string).collect();
    let mut k = KeywordSet::default();
    for _ in 0..r.gen_range(1..=4) {
        if r.gen_bool(0.2) {
            k.verbs.insert(VERBS.choose(r).unwrap().to_string());
        } else {
            k.noun_phrases.insert(concepts.choose(r).unwrap().clone());
        }
    }
    k
}

fn world(seed: u64) -> (bpmn_weaver::ConceptGraph, bpmn_weaver::Snapshot, Vec<String>, KeywordSet) {
    let mut r = rng(seed);
    let ids: Vec<String> = (0..r.gen_range(1..=5)).map(|i| format!("s{i}")).collect();
    let g = random_graph(&mut r, 15, &ids);
    let reg = Registry::from_records(ids.iter().map(|id| service(id, BTreeSet::new(), set(&["x"]), QosRecord::default())))
        .unwrap()
        .snapshot();
    let k = keywords_for(&mut r, &g);
    (g, reg, ids, k)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalize_is_idempotent(word in "[A-Za-z]{1,14}") {
        let once = normalize(&word);
        prop_assert_eq!(normalize(&once), once.clone());
        prop_assert_eq!(once.clone(), once.to_lowercase());
    }

    #[test]
    fn scores_are_bounded_and_sorted(seed in any::<u64>(), theta in 0.0f64..1.0) {
        let (g, reg, _, k) = world(seed);
        let cfg = MatchConfig { theta, ..MatchConfig::default() };
        let cands = match_task(&k, &g, &reg, &cfg, Execution::Sequential);
        for c in &cands {
            prop_assert!(c.score > 0.0 && c.score <= 1.0 && c.score >= theta);
        }
        for w in cands.windows(2) {
            prop_assert!(w[0].score > w[1].score || (w[0].score == w[1].score && w[0].service_id < w[1].service_id));
        }
    }

    #[test]
    fn raising_theta_filters(seed in any::<u64>(), lo in 0.0f64..1.0, hi in 0.0f64..1.0) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (g, reg, _, k) = world(seed);
        let loose = match_task(&k, &g, &reg, &MatchConfig { theta: lo, ..MatchConfig::default() }, Execution::Sequential);
        let strict = match_task(&k, &g, &reg, &MatchConfig { theta: hi, ..MatchConfig::default() }, Execution::Sequential);
        let kept: Vec<_> = loose.into_iter().filter(|c| c.score >= hi).collect();
        prop_assert_eq!(strict, kept);
    }

    #[test]
    fn extra_provider_never_lowers_a_score(seed in any::<u64>()) {
        let (g, reg, ids, k) = world(seed);
        let cfg = MatchConfig { theta: 0.0, ..MatchConfig::default() };
        let before = match_task(&k, &g, &reg, &cfg, Execution::Sequential);
        let mut r = rng(seed ^ 0x5eed);
        let mut g2 = g.clone();
        let concept = g.concepts().collect::<Vec<_>>().choose(&mut r).unwrap().to_string();
        let sid = ids.choose(&mut r).unwrap().clone();
        g2.add_provider(&concept, &sid);
        let after = match_task(&k, &g2, &reg, &cfg, Execution::Sequential);
        for c in &before {
            let now = after.iter().find(|a| a.service_id == c.service_id);
            prop_assert!(now.is_some_and(|a| a.score >= c.score));
        }
    }

    #[test]
    fn explanation_accounts_for_the_score(seed in any::<u64>()) {
        let (g, reg, ids, k) = world(seed);
        let cfg = MatchConfig { theta: 0.0, ..MatchConfig::default() };
        let cands = match_task(&k, &g, &reg, &cfg, Execution::Sequential);
        for id in &ids {
            let trace = explain_match(&k, &g, &reg, id, &cfg).unwrap();
            let sum: f64 = trace.keywords.iter().map(|t| t.contribution).sum();
            prop_assert_eq!(trace.keywords.len(), k.terms().len());
            prop_assert!((sum - trace.score * k.terms().len() as f64).abs() < 1e-12);
            let matched = cands.iter().find(|c| &c.service_id == id).map_or(0.0, |c| c.score);
            prop_assert!((matched - trace.score).abs() < 1e-12);
        }
    }

    #[test]
    fn parallel_matching_equals_sequential(seed in any::<u64>()) {
        let (g, reg, _, k) = world(seed);
        let cfg = MatchConfig { theta: 0.0, ..MatchConfig::default() };
        prop_assert_eq!(
            match_task(&k, &g, &reg, &cfg, Execution::Sequential),
            match_task(&k, &g, &reg, &cfg, Execution::Parallel)
        );
    }

    #[test]
    fn selection_ignores_candidate_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let records: Vec<_> = (0..r.gen_range(1..12))
            .map(|i| service(&format!("s{i}"), BTreeSet::new(), set(&["x"]), random_qos(&mut r, 5)))
            .collect();
        let reg = Registry::from_records(records).unwrap().snapshot();
        let cands: Vec<_> = reg
            .ids()
            .map(|id| bpmn_weaver::Candidate {
                service_id: id.to_string(),
                score: f64::from(r.gen_range(1..4u8)) / 4.0,
                matched_concepts: BTreeSet::new(),
                hop_profile: Default::default(),
            })
            .collect();
        for score_first in [false, true] {
            let a = select_best(&cands, &reg, score_first).unwrap();
            let b = select_best(&shuffled(&mut r, &cands), &reg, score_first).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.is_some_and(|id| cands.iter().any(|c| c.service_id == id)));
        }
        prop_assert_eq!(select_best(&[], &reg, false).unwrap(), None);
    }

    #[test]
    fn plans_replay_and_availability_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pool = types(r.gen_range(2..=6));
        let count = r.gen_range(1..=7);
        let reg = Registry::from_records(random_registry(&mut r, count, &pool)).unwrap().snapshot();
        let available: BTreeSet<String> = pool.iter().filter(|_| r.gen_bool(0.3)).cloned().collect();
        let required: BTreeSet<String> = pool.iter().filter(|_| r.gen_bool(0.3)).cloned().collect();
        let cfg = ComposeConfig::default();
        let goal = CompositionGoal { available: available.clone(), required: required.clone() };
        let plan = search(&goal, &reg, &cfg, None);
        if let Some(p) = &plan {
            prop_assert!(replay(p, &goal, &reg, None).unwrap());
            prop_assert!(p.len() <= cfg.max_depth);
            let qos: i64 = p.services.iter().map(|id| bpmn_weaver::qos_value(&reg.get(id).unwrap().qos)).sum();
            prop_assert_eq!(qos, p.total_qos);
        }
        let mut more = available;
        more.insert(pool.choose(&mut r).unwrap().clone());
        let richer = search(&CompositionGoal { available: more, required }, &reg, &cfg, None);
        if let Some(p) = plan {
            prop_assert!(richer.is_some_and(|q| q.len() <= p.len()));
        }
    }

    #[test]
    fn pruning_keeps_a_closed_acyclic_subgraph(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ids = ["a".to_string(), "b".to_string()];
        let g = random_graph(&mut r, 20, &ids);
        let p = prune_baseline(&g);
        prop_assert!(p.check_acyclic().is_ok());
        prop_assert!(!g.is_empty() && !p.is_empty());
        for c in p.concepts() {
            prop_assert!(g.contains(c));
            for parent in g.parents(c) {
                prop_assert!(p.contains(parent));
            }
        }
    }

    #[test]
    fn built_ontology_is_acyclic_and_grounded(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pool = types(4);
        let count = r.gen_range(1..=8);
        let records = random_registry(&mut r, count, &pool);
        let reg = Registry::from_records(records.clone()).unwrap().snapshot();
        let g = build_service_ontology(&reg, &Extractor::default()).unwrap();
        prop_assert!(g.check_acyclic().is_ok());
        prop_assert!(g.services().iter().all(|s| reg.contains(s)));
        let again = Registry::from_records(shuffled(&mut r, &records)).unwrap().snapshot();
        prop_assert_eq!(build_service_ontology(&again, &Extractor::default()).unwrap(), g);
    }

    #[test]
    fn memo_keys_ignore_insertion_order(terms in proptest::collection::vec("[a-z]{1,8}( [a-z]{1,8})?", 1..6)) {
        let mut a = KeywordSet::default();
        let mut b = KeywordSet::default();
        for t in &terms {
            a.noun_phrases.insert(t.clone());
        }
        for t in terms.iter().rev() {
            b.noun_phrases.insert(t.clone());
        }
        prop_assert_eq!(a.canonical_key(), b.canonical_key());
        let mut memo = ProcessMemo::new();
        memo.record(&a, vec!["s1".into(), "s2".into()]);
        prop_assert_eq!(memo.lookup(&b), Some(&["s1".to_string(), "s2".to_string()][..]));
        prop_assert_eq!(ProcessMemo::parse(&memo.save()).unwrap(), memo);
    }

    #[test]
    fn reports_agree_with_the_bound_graph(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pool = types(5);
        let count = r.gen_range(1..=10);
        let reg = Registry::from_records(random_registry(&mut r, count, &pool)).unwrap();
        let g = build_service_ontology(&reg.snapshot(), &Extractor::default()).unwrap();
        let tasks = r.gen_range(1..=6);
        let design = random_process(&mut r, tasks, &pool);
        let (out, report) = implement_process(&design, &reg.snapshot(), &g, &mut ProcessMemo::new(), &Config::default()).unwrap();
        prop_assert!(report.consistent_with(&out));
        let c = &report.counters;
        prop_assert_eq!(c.tasks, tasks);
        prop_assert_eq!(c.matched + c.composed + c.failed, c.tasks);
        prop_assert_eq!(out.strip_resolutions(), design.strip_resolutions());
    }
}
