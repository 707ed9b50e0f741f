//! Scores registry services against task keywords over the concept graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::config::MatchConfig;
use crate::exec::{map_ordered, Execution};
use crate::keywords::KeywordSet;
use crate::ontology::ConceptGraph;
use crate::registry::Snapshot;

#[derive(Debug, Error, PartialEq)]
pub enum MatchError {
    #[error("unknown service id `{0}`")]
    UnknownServiceId(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub service_id: String,
    pub score: f64,
    pub matched_concepts: BTreeSet<String>,
    /// Hop count used per matched keyword; 0 is an exact hit.
    pub hop_profile: BTreeMap<String, u32>,
}

/// Upward reach of one keyword: (concept, hops, parent it was reached from).
struct Reach {
    keyword: String,
    steps: Vec<(String, u32, Option<String>)>,
}

fn reaches(k: &KeywordSet, g: &ConceptGraph, max_hops: u32) -> Vec<Reach> {
    k.terms()
        .into_iter()
        .map(|w| Reach { keyword: w.to_string(), steps: g.generalizations(w, max_hops) })
        .collect()
}

/// Best match of one keyword for one service: index into `steps` and weight.
fn best_step(r: &Reach, g: &ConceptGraph, service: &str, decay: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (concept, hops, _)) in r.steps.iter().enumerate() {
        if g.provides(concept, service) {
            let w = decay.powi(*hops as i32);
            if best.is_none_or(|(_, b)| w > b) {
                best = Some((i, w));
            }
        }
    }
    best
}

fn score_service(reach: &[Reach], g: &ConceptGraph, service: &str, cfg: &MatchConfig) -> Option<Candidate> {
    let mut sum = 0.0;
    let mut matched = BTreeSet::new();
    let mut hop_profile = BTreeMap::new();
    for r in reach {
        if let Some((i, w)) = best_step(r, g, service, cfg.decay) {
            let (concept, hops, _) = &r.steps[i];
            sum += w;
            matched.insert(concept.clone());
            hop_profile.insert(r.keyword.clone(), *hops);
        }
    }
    let score = sum / reach.len() as f64;
    (score > 0.0 && score >= cfg.theta).then(|| Candidate {
        service_id: service.to_string(),
        score,
        matched_concepts: matched,
        hop_profile,
    })
}

/// Candidates with score at least `theta`, best first, ties by id.
///
/// A keyword scores 1 for a service providing it directly and `decay^h` for
/// a service providing an is-a ancestor `h` hops up; the service score is the
/// mean over all keywords.
pub fn match_task(
    k: &KeywordSet,
    g: &ConceptGraph,
    reg: &Snapshot,
    cfg: &MatchConfig,
    exec: Execution,
) -> Vec<Candidate> {
    if k.is_empty() {
        return Vec::new();
    }
    let reach = reaches(k, g, cfg.max_hops);
    let services: Vec<&str> = reg.ids().collect();
    let mut out: Vec<Candidate> = map_ordered(exec, &services, |s| score_service(&reach, g, s, cfg))
        .into_iter()
        .flatten()
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.service_id.cmp(&b.service_id)));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeywordTrace {
    pub keyword: String,
    /// Concepts from the keyword up to the matched concept; empty on a miss.
    pub path: Vec<String>,
    pub contribution: f64,
}

impl KeywordTrace {
    pub fn hops(&self) -> Option<usize> {
        self.path.len().checked_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchTrace {
    pub service_id: String,
    pub keywords: Vec<KeywordTrace>,
    pub score: f64,
}

impl fmt::Display for MatchTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "service {}  score {:.4}", self.service_id, self.score)?;
        for t in &self.keywords {
            match t.hops() {
                Some(h) => writeln!(
                    f,
                    "  {:<24} -> {}  hops {h}  +{:.4}",
                    t.keyword,
                    t.path.join(" -> "),
                    t.contribution
                )?,
                None => writeln!(f, "  {:<24} -> (no match)  +0", t.keyword)?,
            }
        }
        Ok(())
    }
}

/// Per-keyword account of how `service_id` scores against `k`.
pub fn explain_match(
    k: &KeywordSet,
    g: &ConceptGraph,
    reg: &Snapshot,
    service_id: &str,
    cfg: &MatchConfig,
) -> Result<MatchTrace, MatchError> {
    if !reg.contains(service_id) {
        return Err(MatchError::UnknownServiceId(service_id.to_string()));
    }
    let mut keywords = Vec::new();
    let mut sum = 0.0;
    for r in reaches(k, g, cfg.max_hops) {
        let (path, contribution) = match best_step(&r, g, service_id, cfg.decay) {
            Some((i, w)) => {
                let mut path = vec![r.steps[i].0.clone()];
                let mut via = r.steps[i].2.clone();
                while let Some(prev) = via {
                    via = r.steps.iter().find(|(c, ..)| *c == prev).and_then(|s| s.2.clone());
                    path.push(prev);
                }
                path.reverse();
                (path, w)
            }
            None => (Vec::new(), 0.0),
        };
        sum += contribution;
        keywords.push(KeywordTrace { keyword: r.keyword, path, contribution });
    }
    let score = if keywords.is_empty() { 0.0 } else { sum / keywords.len() as f64 };
    Ok(MatchTrace { service_id: service_id.to_string(), keywords, score })
}
