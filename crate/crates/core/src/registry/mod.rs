//! Service registry: descriptor records, QoS bookkeeping from execution logs,
//! and immutable snapshots for resolution runs.

mod descriptor;
mod qos_log;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use chrono::NaiveDate;
use thiserror::Error;

pub use descriptor::{emit_descriptor, parse_descriptor};
pub use qos_log::IngestWarning;

#[derive(Debug, Error, PartialEq)]
pub enum RegistryError {
    #[error("descriptor #{index}: {reason}")]
    MalformedDescriptor { index: usize, reason: String },
    #[error("duplicate service id `{0}`")]
    DuplicateServiceId(String),
    #[error("QoS log line {0} is malformed")]
    MalformedLogLine(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentType {
    HumanTask,
    BpmnProcess,
    CallServiceTask,
}

impl ComponentType {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentType::HumanTask => "humanTask",
            ComponentType::BpmnProcess => "bpmnProcess",
            ComponentType::CallServiceTask => "callServiceTask",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "humanTask" => Some(ComponentType::HumanTask),
            "bpmnProcess" => Some(ComponentType::BpmnProcess),
            "callServiceTask" => Some(ComponentType::CallServiceTask),
            _ => None,
        }
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Execution statistics for one service.
///
/// `available` counts successful calls and `calls` counts all calls, so
/// `available <= calls` always holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QosRecord {
    pub available: u64,
    pub calls: u64,
    pub response_sum_ms: u64,
}

impl QosRecord {
    pub fn new(available: u64, calls: u64, response_sum_ms: u64) -> Option<Self> {
        (available <= calls).then_some(Self { available, calls, response_sum_ms })
    }

    /// Average response time in milliseconds; undefined before the first call.
    pub fn average_response_ms(&self) -> Option<f64> {
        (self.calls > 0).then(|| self.response_sum_ms as f64 / self.calls as f64)
    }

    pub fn failures(&self) -> u64 {
        self.calls - self.available
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceRecord {
    pub id: String,
    pub publisher: String,
    pub component_type: ComponentType,
    pub last_use: Option<NaiveDate>,
    /// Service locator; stored, never dereferenced.
    pub url: String,
    pub description: String,
    pub qos: QosRecord,
    pub operation_name: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
}

/// Owned registry. Mutation produces a new value with a higher version.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Registry {
    records: Arc<BTreeMap<String, ServiceRecord>>,
    version: u64,
}

/// Read-only registry view, cheap to clone and share across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    records: Arc<BTreeMap<String, ServiceRecord>>,
    version: u64,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a registry from descriptor documents, one record per text.
    pub fn load<S: AsRef<str>>(descriptor_texts: &[S]) -> Result<Self, RegistryError> {
        let mut records = BTreeMap::new();
        for (index, text) in descriptor_texts.iter().enumerate() {
            let record = parse_descriptor(text.as_ref())
                .map_err(|reason| RegistryError::MalformedDescriptor { index, reason })?;
            if records.contains_key(&record.id) {
                return Err(RegistryError::DuplicateServiceId(record.id));
            }
            records.insert(record.id.clone(), record);
        }
        Ok(Self { records: Arc::new(records), version: 0 })
    }

    pub fn from_records(records: impl IntoIterator<Item = ServiceRecord>) -> Result<Self, RegistryError> {
        let mut map = BTreeMap::new();
        for (index, r) in records.into_iter().enumerate() {
            if r.outputs.is_empty() || r.description.trim().is_empty() || r.qos.available > r.qos.calls {
                return Err(RegistryError::MalformedDescriptor {
                    index,
                    reason: "record violates registry invariants".into(),
                });
            }
            if map.contains_key(&r.id) {
                return Err(RegistryError::DuplicateServiceId(r.id));
            }
            map.insert(r.id.clone(), r);
        }
        Ok(Self { records: Arc::new(map), version: 0 })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn get(&self, id: &str) -> Option<&ServiceRecord> {
        self.records.get(id)
    }

    pub fn records(&self) -> impl Iterator<Item = &ServiceRecord> {
        self.records.values()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { records: Arc::clone(&self.records), version: self.version }
    }
}

impl Snapshot {
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn get(&self, id: &str) -> Option<&ServiceRecord> {
        self.records.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.records.contains_key(id)
    }

    /// Records in ascending id order.
    pub fn records(&self) -> impl Iterator<Item = &ServiceRecord> {
        self.records.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Every type concept mentioned as some service's input or output.
    pub fn io_vocabulary(&self) -> BTreeSet<&str> {
        self.records
            .values()
            .flat_map(|r| r.inputs.iter().chain(r.outputs.iter()))
            .map(String::as_str)
            .collect()
    }
}
