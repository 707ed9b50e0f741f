use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use chrono::NaiveDate;

use super::{Registry, RegistryError};

/// Non-fatal problem found while ingesting a log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IngestWarning {
    UnknownServiceId { line: usize, id: String },
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestWarning::UnknownServiceId { line, id } => {
                write!(f, "line {line}: unknown service id `{id}`")
            }
        }
    }
}

struct LogLine<'a> {
    date: NaiveDate,
    service: &'a str,
    success: bool,
    response_ms: u64,
}

/// Accepts `YYYY-MM-DD`, optionally followed by an ISO 8601 time part.
fn parse_date(s: &str) -> Option<NaiveDate> {
    let (date, rest) = if s.len() > 10 && s.is_char_boundary(10) { s.split_at(10) } else { (s, "") };
    if !rest.is_empty() && !rest.starts_with('T') {
        return None;
    }
    NaiveDate::parse_from_str(date, "%Y-%m-%d").ok()
}

fn parse_line(text: &str) -> Option<LogLine<'_>> {
    let mut fields = text.split(',').map(str::trim);
    let date = parse_date(fields.next()?)?;
    let service = fields.next().filter(|s| !s.is_empty())?;
    let success = match fields.next()? {
        "success" => true,
        "failure" => false,
        _ => return None,
    };
    let response_ms = fields.next()?.parse().ok()?;
    if fields.next().is_some() {
        return None;
    }
    Some(LogLine { date, service, success, response_ms })
}

impl Registry {
    /// Folds an execution log into the QoS counters.
    ///
    /// Every logged call counts toward `calls` and the response-time sum;
    /// successes also count toward `available`. The last-use date becomes the
    /// latest date seen, so the result does not depend on line order. The log
    /// is validated in full before anything is applied.
    pub fn ingest_qos_log(&self, log_text: &str) -> Result<(Registry, Vec<IngestWarning>), RegistryError> {
        let mut parsed = Vec::new();
        for (idx, raw) in log_text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let line = parse_line(raw).ok_or(RegistryError::MalformedLogLine(idx + 1))?;
            parsed.push((idx + 1, line));
        }

        let mut records: BTreeMap<_, _> = (*self.records).clone();
        let mut warnings = Vec::new();
        for (line_no, line) in parsed {
            let Some(rec) = records.get_mut(line.service) else {
                warnings.push(IngestWarning::UnknownServiceId { line: line_no, id: line.service.to_string() });
                continue;
            };
            rec.qos.calls += 1;
            if line.success {
                rec.qos.available += 1;
            }
            rec.qos.response_sum_ms += line.response_ms;
            rec.last_use = Some(rec.last_use.map_or(line.date, |d| d.max(line.date)));
        }
        Ok((Registry { records: Arc::new(records), version: self.version + 1 }, warnings))
    }
}
