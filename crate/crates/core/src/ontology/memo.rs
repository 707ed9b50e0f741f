use std::collections::BTreeMap;

use thiserror::Error;

use crate::keywords::KeywordSet;

#[derive(Debug, Error, PartialEq)]
#[error("memo line {0} is malformed")]
pub struct MemoError(pub usize);

/// Previously validated service chains, keyed by canonical keyword key.
///
/// Lookups are exact-key only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProcessMemo {
    entries: BTreeMap<String, Vec<String>>,
}

impl ProcessMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, k: &KeywordSet) -> Option<&[String]> {
        self.lookup_key(&k.canonical_key())
    }

    pub fn lookup_key(&self, key: &str) -> Option<&[String]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    /// Stores `services` under `k`, replacing any earlier entry.
    pub fn record(&mut self, k: &KeywordSet, services: Vec<String>) {
        self.record_key(k.canonical_key(), services);
    }

    pub fn record_key(&mut self, key: String, services: Vec<String>) {
        self.entries.insert(key, services);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `canonicalKey<TAB>svc1,svc2,...` per line, sorted by key.
    pub fn save(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}\t{}\n", v.join(","))).collect()
    }

    pub fn parse(text: &str) -> Result<Self, MemoError> {
        let mut memo = ProcessMemo::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (key, services) = line.split_once('\t').ok_or(MemoError(idx + 1))?;
            let services: Vec<String> = services.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect();
            if services.is_empty() {
                return Err(MemoError(idx + 1));
            }
            memo.record_key(key.to_string(), services);
        }
        Ok(memo)
    }
}
