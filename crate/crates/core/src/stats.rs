//! Instrumentation counters for the resolution pipeline.

use std::sync::atomic::{AtomicU64, Ordering};

/// Monotone call counters shared across one or more pipeline runs.
#[derive(Debug, Default)]
pub struct Counters {
    match_calls: AtomicU64,
    empty_matches: AtomicU64,
    composition_attempts: AtomicU64,
    searches: AtomicU64,
    memo_hits: AtomicU64,
}

/// Plain copy of [`Counters`] at one instant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CounterValues {
    pub match_calls: u64,
    pub empty_matches: u64,
    pub composition_attempts: u64,
    pub searches: u64,
    pub memo_hits: u64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record_match(&self, candidates: usize) {
        self.match_calls.fetch_add(1, Ordering::Relaxed);
        if candidates == 0 {
            self.empty_matches.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub(crate) fn record_composition_attempt(&self) {
        self.composition_attempts.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_search(&self) {
        self.searches.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_memo_hit(&self) {
        self.memo_hits.fetch_add(1, Ordering::Relaxed);
    }

    pub fn values(&self) -> CounterValues {
        CounterValues {
            match_calls: self.match_calls.load(Ordering::Relaxed),
            empty_matches: self.empty_matches.load(Ordering::Relaxed),
            composition_attempts: self.composition_attempts.load(Ordering::Relaxed),
            searches: self.searches.load(Ordering::Relaxed),
            memo_hits: self.memo_hits.load(Ordering::Relaxed),
        }
    }
}
