//! Flat `key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected so typos never silently fall back to a default.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exec::Execution;

pub const DEFAULT_CHUNK_PATTERN: &str = "(ADJ|N)*N";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: invalid value `{value}` for `{key}`")]
    InvalidValue { line: usize, key: String, value: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchConfig {
    pub theta: f64,
    pub decay: f64,
    pub max_hops: u32,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self { theta: 0.5, decay: 0.5, max_hops: 2 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelectConfig {
    pub score_first: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComposeConfig {
    pub max_depth: usize,
    pub use_isa: bool,
}

impl Default for ComposeConfig {
    fn default() -> Self {
        Self { max_depth: 4, use_isa: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub chunk_pattern: String,
    pub matching: MatchConfig,
    pub select: SelectConfig,
    pub compose: ComposeConfig,
    pub use_name: bool,
    pub execution: Execution,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            chunk_pattern: DEFAULT_CHUNK_PATTERN.to_string(),
            matching: MatchConfig::default(),
            select: SelectConfig::default(),
            compose: ComposeConfig::default(),
            use_name: true,
            execution: Execution::default(),
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_unit_interval(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse_value(line, key, value)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ConfigError::InvalidValue { line, key: key.to_string(), value: value.to_string() })
    }
}

impl Config {
    /// Parses config text, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ConfigError::Syntax { line })?;
            cfg.set(line, key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "chunk_pattern" => self.chunk_pattern = value.to_string(),
            "match.theta" => self.matching.theta = parse_unit_interval(line, key, value)?,
            "match.decay" => self.matching.decay = parse_unit_interval(line, key, value)?,
            "match.max_hops" => self.matching.max_hops = parse_value(line, key, value)?,
            "select.score_first" => self.select.score_first = parse_value(line, key, value)?,
            "compose.max_depth" => {
                let depth: usize = parse_value(line, key, value)?;
                if depth == 0 {
                    return Err(ConfigError::InvalidValue {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                    });
                }
                self.compose.max_depth = depth;
            }
            "compose.use_isa" => self.compose.use_isa = parse_value(line, key, value)?,
            "orchestrator.use_name" => self.use_name = parse_value(line, key, value)?,
            "orchestrator.parallel" => {
                let parallel: bool = parse_value(line, key, value)?;
                self.execution = if parallel { Execution::Parallel } else { Execution::Sequential };
            }
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
        Ok(())
    }

    /// Effective values keyed by config key, for echoing into reports.
    ///
    /// The execution mode is left out: output must not depend on it.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        out.insert("chunk_pattern".into(), self.chunk_pattern.clone());
        out.insert("match.theta".into(), self.matching.theta.to_string());
        out.insert("match.decay".into(), self.matching.decay.to_string());
        out.insert("match.max_hops".into(), self.matching.max_hops.to_string());
        out.insert("select.score_first".into(), self.select.score_first.to_string());
        out.insert("compose.max_depth".into(), self.compose.max_depth.to_string());
        out.insert("compose.use_isa".into(), self.compose.use_isa.to_string());
        out.insert("orchestrator.use_name".into(), self.use_name.to_string());
        out
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.echo() {
            writeln!(f, "{k} = {v}")?;
        }
        let parallel = self.execution == Execution::Parallel;
        writeln!(f, "orchestrator.parallel = {parallel}")
    }
}
