//! Text form of schedules and certificates, one step per line:
//!
//! ```text
//! orbit <label>
//! collapse <Sigma ids> over <sigma ids>
//! star <vertex id>
//! hash <sha256> <simplex count>
//! ```
//!
//! `orbit` lines open a labelled group of steps; `#` starts a comment.

use std::fmt::Write;

use super::{CollapsePair, MorseError};
use crate::complex::TypedComplex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseStep {
    Collapse(CollapsePair),
    Star(u32),
}

/// Ordered steps; `orbits` marks `(first step, label)` of each group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub steps: Vec<CollapseStep>,
    pub orbits: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseCertificate {
    pub steps: Vec<CollapseStep>,
    pub orbits: Vec<(usize, String)>,
    pub terminal_hash: String,
    pub terminal_size: usize,
}

fn ids(s: &[u32]) -> String {
    s.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn write_steps(out: &mut String, steps: &[CollapseStep], orbits: &[(usize, String)]) {
    let mut marks = orbits.iter().peekable();
    for (k, step) in steps.iter().enumerate() {
        while let Some((_, label)) = marks.next_if(|(at, _)| *at == k) {
            writeln!(out, "orbit {label}").unwrap();
        }
        match step {
            CollapseStep::Collapse(p) => writeln!(out, "collapse {} over {}", ids(&p.upper), ids(&p.sigma)).unwrap(),
            CollapseStep::Star(v) => writeln!(out, "star {v}").unwrap(),
        }
    }
    for (_, label) in marks {
        writeln!(out, "orbit {label}").unwrap();
    }
}

fn parse_lines(text: &str) -> Result<(Schedule, Option<(String, usize)>), MorseError> {
    let mut sched = Schedule::default();
    let mut hash = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| MorseError::Parse { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        let Some((head, rest)) = body.split_once(' ').or(if body.is_empty() { None } else { Some((body, "")) }) else {
            continue;
        };
        let nums = |s: &str| -> Result<Vec<u32>, MorseError> {
            s.split_whitespace().map(|p| p.parse::<u32>().map_err(|_| err(format!("bad id {p}")))).collect()
        };
        match head {
            "orbit" => sched.orbits.push((sched.steps.len(), rest.trim().to_string())),
            "collapse" => {
                let (upper, sigma) = rest.split_once(" over ").ok_or_else(|| err("missing `over`".into()))?;
                sched.steps.push(CollapseStep::Collapse(CollapsePair::new(&nums(sigma)?, &nums(upper)?)));
            }
            "star" => match nums(rest)?[..] {
                [v] => sched.steps.push(CollapseStep::Star(v)),
                _ => return Err(err("star takes one vertex".into())),
            },
            "hash" => {
                let mut parts = rest.split_whitespace();
                let h = parts.next().ok_or_else(|| err("missing hash".into()))?;
                let n = parts.next().and_then(|p| p.parse().ok()).ok_or_else(|| err("missing size".into()))?;
                hash = Some((h.to_string(), n));
            }
            other => return Err(err(format!("unknown step {other}"))),
        }
    }
    Ok((sched, hash))
}

impl Schedule {
    pub fn parse(text: &str) -> Result<Self, MorseError> {
        Ok(parse_lines(text)?.0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_steps(&mut out, &self.steps, &self.orbits);
        out
    }

    /// Starts a labelled group at the next step.
    pub fn begin_orbit(&mut self, label: impl Into<String>) {
        self.orbits.push((self.steps.len(), label.into()));
    }

    pub fn push(&mut self, step: CollapseStep) {
        self.steps.push(step);
    }
}

impl CollapseCertificate {
    pub(crate) fn new(steps: Vec<CollapseStep>, orbits: Vec<(usize, String)>, terminal: &TypedComplex) -> Self {
        CollapseCertificate { steps, orbits, terminal_hash: terminal.content_hash(), terminal_size: terminal.len() }
    }

    /// Certificate for a schedule already applied, ending at `terminal`.
    pub fn from_schedule(schedule: &Schedule, terminal: &TypedComplex) -> Self {
        Self::new(schedule.steps.clone(), schedule.orbits.clone(), terminal)
    }

    /// True when the run ended on a single vertex.
    pub fn reaches_point(&self) -> bool {
        self.terminal_size == 1
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_steps(&mut out, &self.steps, &self.orbits);
        writeln!(out, "hash {} {}", self.terminal_hash, self.terminal_size).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<Self, MorseError> {
        let (sched, hash) = parse_lines(text)?;
        let (terminal_hash, terminal_size) =
            hash.ok_or(MorseError::Parse { line: text.lines().count(), msg: "certificate has no hash line".into() })?;
        Ok(CollapseCertificate { steps: sched.steps, orbits: sched.orbits, terminal_hash, terminal_size })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_round_trip() {
        let mut s = Schedule::default();
        s.begin_orbit("first");
        s.push(CollapseStep::Collapse(CollapsePair::new(&[1, 2], &[0, 1, 2])));
        s.push(CollapseStep::Star(4));
        s.begin_orbit("second");
        s.push(CollapseStep::Star(5));
        let text = s.to_text();
        assert!(text.contains("collapse 0 1 2 over 1 2"));
        assert_eq!(Schedule::parse(&text).unwrap(), s);
    }

    #[test]
    fn comments_and_errors() {
        let s = Schedule::parse("# header\nstar 3 # apex\n\n").unwrap();
        assert_eq!(s.steps, vec![CollapseStep::Star(3)]);
        assert!(matches!(Schedule::parse("collapse 1 2 3\n"), Err(MorseError::Parse { line: 1, .. })));
        assert!(CollapseCertificate::parse("star 1\n").is_err());
    }
}
