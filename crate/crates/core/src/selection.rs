//! QoS value and best-candidate selection.

use std::cmp::Ordering;

use thiserror::Error;

use crate::matching::Candidate;
use crate::registry::{QosRecord, Snapshot};

#[derive(Debug, Error, PartialEq)]
pub enum SelectionError {
    #[error("candidate `{0}` is not in the registry")]
    UnknownServiceId(String),
}

/// Successes minus calls: the negated failure count.
pub fn qos_value(q: &QosRecord) -> i64 {
    q.available as i64 - q.calls as i64
}

/// Orders average response times exactly; a never-called service is slowest.
fn cmp_response(a: &QosRecord, b: &QosRecord) -> Ordering {
    match (a.calls, b.calls) {
        (0, 0) => Ordering::Equal,
        (0, _) => Ordering::Greater,
        (_, 0) => Ordering::Less,
        (na, nb) => (a.response_sum_ms as u128 * nb as u128).cmp(&(b.response_sum_ms as u128 * na as u128)),
    }
}

/// Picks the candidate with the highest QoS value, then the lowest average
/// response time, then the smallest id.
///
/// With `score_first`, only the candidates sharing the top match score compete.
pub fn select_best(
    cands: &[Candidate],
    reg: &Snapshot,
    score_first: bool,
) -> Result<Option<String>, SelectionError> {
    let mut pool = Vec::with_capacity(cands.len());
    for c in cands {
        let rec = reg.get(&c.service_id).ok_or_else(|| SelectionError::UnknownServiceId(c.service_id.clone()))?;
        pool.push((c, &rec.qos));
    }
    if score_first {
        let top = pool.iter().map(|(c, _)| c.score).fold(f64::NEG_INFINITY, f64::max);
        pool.retain(|(c, _)| c.score == top);
    }
    let best = pool.into_iter().min_by(|(ca, qa), (cb, qb)| {
        qos_value(qb)
            .cmp(&qos_value(qa))
            .then_with(|| cmp_response(qa, qb))
            .then_with(|| ca.service_id.cmp(&cb.service_id))
    });
    Ok(best.map(|(c, _)| c.service_id.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::tests::record;
    use crate::registry::Registry;

    fn cand(id: &str, score: f64) -> Candidate {
        Candidate { service_id: id.into(), score, matched_concepts: Default::default(), hop_profile: Default::default() }
    }

    fn reg(qos: &[(&str, u64, u64, u64)]) -> Snapshot {
        Registry::from_records(qos.iter().map(|&(id, a, n, sum)| {
            let mut r = record(id, &[], &["x"]);
            r.qos = QosRecord::new(a, n, sum).unwrap();
            r
        }))
        .unwrap()
        .snapshot()
    }

    #[test]
    fn qos_examples() {
        assert_eq!(qos_value(&QosRecord::default()), 0);
        assert_eq!(qos_value(&QosRecord::new(10, 12, 0).unwrap()), -2);
        assert_eq!(qos_value(&QosRecord::new(7, 7, 0).unwrap()), 0);
    }

    #[test]
    fn empty_and_singleton() {
        let r = reg(&[("svc-a", 0, 5, 0)]);
        assert_eq!(select_best(&[], &r, false), Ok(None));
        assert_eq!(select_best(&[cand("svc-a", 0.5)], &r, false), Ok(Some("svc-a".into())));
    }

    #[test]
    fn higher_qos_wins() {
        let r = reg(&[("svc-a", 9, 10, 0), ("svc-b", 5, 8, 0)]);
        assert_eq!(select_best(&[cand("svc-b", 1.0), cand("svc-a", 0.5)], &r, false), Ok(Some("svc-a".into())));
    }

    #[test]
    fn response_time_breaks_ties() {
        let r = reg(&[("svc-a", 9, 10, 2000), ("svc-b", 9, 10, 1200), ("svc-c", 0, 1, 0)]);
        assert_eq!(select_best(&[cand("svc-a", 1.0), cand("svc-b", 1.0)], &r, false), Ok(Some("svc-b".into())));
        // never-called loses the tie to any called service
        let r = reg(&[("svc-a", 3, 3, 90000), ("svc-z", 0, 0, 0)]);
        assert_eq!(select_best(&[cand("svc-z", 1.0), cand("svc-a", 1.0)], &r, false), Ok(Some("svc-a".into())));
    }

    #[test]
    fn id_breaks_residual_ties() {
        let r = reg(&[("b", 0, 0, 0), ("a", 0, 0, 0)]);
        assert_eq!(select_best(&[cand("b", 1.0), cand("a", 1.0)], &r, false), Ok(Some("a".into())));
    }

    #[test]
    fn score_first_prefilters() {
        let r = reg(&[("svc-a", 9, 10, 0), ("svc-b", 5, 8, 0)]);
        let c = [cand("svc-a", 0.5), cand("svc-b", 1.0)];
        assert_eq!(select_best(&c, &r, true), Ok(Some("svc-b".into())));
    }

    #[test]
    fn unknown_candidate() {
        assert_eq!(
            select_best(&[cand("ghost", 1.0)], &reg(&[]), false),
            Err(SelectionError::UnknownServiceId("ghost".into()))
        );
    }
}
