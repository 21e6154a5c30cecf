//! Verification reports: one entry per check, with JSON and text output.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Unverified,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub check_id: String,
    /// What the check is about, in words.
    pub anchor: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub suites: Vec<String>,
    pub cache_hits: usize,
    pub versions: BTreeMap<String, String>,
    pub generators_digest: Option<String>,
    /// Seconds since the epoch; cleared by [`Report::normalized`].
    pub timestamp: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("bouc-core".to_string(), env!("CARGO_PKG_VERSION").to_string());
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report { metadata: Metadata { seed, versions, timestamp, ..Default::default() }, entries: Vec::new() }
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = Entry>) {
        self.entries.extend(entries);
    }

    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed() > 0)
    }

    pub fn get(&self, check_id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.check_id == check_id)
    }

    /// The same report with wall-clock fields zeroed, for comparing runs.
    pub fn normalized(&self) -> Report {
        let mut r = self.clone();
        r.metadata.timestamp = 0;
        for e in &mut r.entries {
            e.runtime_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// One line per entry and a closing tally.
    pub fn to_text(&self) -> String {
        let width = self.entries.iter().map(|e| e.check_id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{:<10} {:<width$}  expected {}  actual {}  ({} ms)\n",
                e.status.label().to_uppercase(),
                e.check_id,
                e.expected,
                e.actual,
                e.runtime_ms
            ));
        }
        out.push_str(&format!(
            "{} checks: {} pass, {} fail, {} unverified, {} skipped\n",
            self.entries.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Unverified),
            self.count(Status::Skipped)
        ));
        out
    }
}

/// Collects entries, charging each one the time since the previous.
pub struct Recorder {
    entries: Vec<Entry>,
    last: Instant,
}

impl Default for Recorder {
    fn default() -> Self {
        Self::new()
    }
}

impl Recorder {
    pub fn new() -> Self {
        Recorder { entries: Vec::new(), last: Instant::now() }
    }

    pub fn record(&mut self, id: impl Into<String>, anchor: &str, status: Status, expected: impl Display, actual: impl Display) {
        let now = Instant::now();
        self.entries.push(Entry {
            check_id: id.into(),
            anchor: anchor.to_string(),
            status,
            expected: expected.to_string(),
            actual: actual.to_string(),
            runtime_ms: now.duration_since(self.last).as_millis() as u64,
        });
        self.last = now;
    }

    /// A pass/fail entry comparing two displayed values for equality.
    pub fn equal<T: PartialEq + std::fmt::Debug>(&mut self, id: impl Into<String>, anchor: &str, expected: T, actual: T) {
        let status = Status::from_bool(expected == actual);
        self.record(id, anchor, status, format!("{expected:?}"), format!("{actual:?}"));
    }

    pub fn holds(&mut self, id: impl Into<String>, anchor: &str, expected: impl Display, actual: impl Display, ok: bool) {
        self.record(id, anchor, Status::from_bool(ok), expected, actual);
    }

    /// Restarts the clock, so setup work is not charged to the next entry.
    pub fn reset_clock(&mut self) {
        self.last = Instant::now();
    }

    pub fn finish(self) -> Vec<Entry> {
        self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_failures() {
        let mut rec = Recorder::new();
        rec.equal("a", "x", 1, 1);
        rec.record("b", "x", Status::Unverified, "?", "?");
        let mut r = Report::new(3);
        r.extend(rec.finish());
        assert_eq!(r.exit_code(), 0);
        let mut rec = Recorder::new();
        rec.equal("c", "x", 1, 2);
        r.extend(rec.finish());
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.get("c").unwrap().expected, "1");
    }

    #[test]
    fn json_round_trip_and_normalization() {
        let mut r = Report::new(7);
        let mut rec = Recorder::new();
        rec.holds("k", "anchor", 5, 5, true);
        r.extend(rec.finish());
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"status\": \"pass\""));
        let n = r.normalized();
        assert_eq!(n.metadata.timestamp, 0);
        assert_eq!(n.entries[0].runtime_ms, 0);
    }
}
