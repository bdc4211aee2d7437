//! Check outcomes and their stable text form.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Failure, with the first failing basis tuple when there is one.
    Fail(Option<String>),
    /// Not evaluated because an earlier check on the same side failed.
    Skip,
}

impl Outcome {
    pub fn from_witness(w: Option<String>) -> Outcome {
        match w {
            None => Outcome::Pass,
            Some(t) => Outcome::Fail(Some(t)),
        }
    }

    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(None)
        }
    }

    pub fn passed(&self) -> Option<bool> {
        match self {
            Outcome::Pass => Some(true),
            Outcome::Fail(_) => Some(false),
            Outcome::Skip => None,
        }
    }

    pub fn is_pass(&self) -> bool {
        *self == Outcome::Pass
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => write!(f, "PASS"),
            Outcome::Fail(Some(w)) => write!(f, "FAIL at {w}"),
            Outcome::Fail(None) => write!(f, "FAIL"),
            Outcome::Skip => write!(f, "SKIP"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub key: String,
    pub outcome: Outcome,
}

/// An ordered list of named outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, outcome: Outcome) {
        self.lines.push(Line { key: key.into(), outcome });
    }

    pub fn get(&self, key: &str) -> Option<&Outcome> {
        self.lines.iter().find(|l| l.key == key).map(|l| &l.outcome)
    }

    /// `Some(pass)` if the line exists and was evaluated.
    pub fn passed(&self, key: &str) -> Option<bool> {
        self.get(key).and_then(|o| o.passed())
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.outcome.is_pass())
    }

    pub fn failures(&self) -> Vec<&str> {
        self.lines.iter().filter(|l| matches!(l.outcome, Outcome::Fail(_))).map(|l| l.key.as_str()).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{} {}", l.key, l.outcome)?;
        }
        Ok(())
    }
}
