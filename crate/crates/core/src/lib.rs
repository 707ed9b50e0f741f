//! Compiles design-stage process documents into implemented ones.
//!
//! Each task's natural-language description is reduced to keywords, matched
//! against a concept graph learned from service descriptions, and bound to the
//! best service by QoS. Tasks no single service covers are bound to a chain of
//! services found by searching over typed inputs and outputs.

pub mod bpmn;
pub mod cli;
pub mod composition;
pub mod config;
pub mod exec;
pub mod keywords;
pub mod matching;
pub mod ontology;
pub mod orchestrator;
pub mod registry;
pub mod selection;
pub mod stats;
mod xml;

pub use bpmn::{parse_design, Binding, BindingKind, Node, NodeKind, ProcessGraph, UnresolvedReason};
pub use composition::{compose, replay, CompositionGoal, CompositionPlan};
pub use config::Config;
pub use exec::Execution;
pub use keywords::{extract_keywords, Extractor, KeywordSet, Lexicon, Tag};
pub use matching::{explain_match, match_task, Candidate};
pub use ontology::{build_service_ontology, prune_baseline, ConceptGraph, ProcessMemo};
pub use orchestrator::{implement_process, ResolutionReport, TaskOutcome};
pub use registry::{QosRecord, Registry, ServiceRecord, Snapshot};
pub use selection::{qos_value, select_best};
pub use stats::Counters;
