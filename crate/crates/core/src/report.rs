//! Structured outcomes of verification runs.

use std::fmt;

use serde::Serialize;

/// How strong the checked statement is; decides how a failure is labeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Theorem,
    Conjecture,
    Internal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    ConjectureSupported,
    Refuted,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Verified => "verified",
            Status::ConjectureSupported => "conjecture-supported",
            Status::Refuted => "REFUTED",
            Status::Error => "error",
        };
        f.write_str(s)
    }
}

/// One named check: how many cases ran and which of them failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub level: Level,
    pub cases: usize,
    pub failures: Vec<String>,
    pub errors: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, level: Level) -> Self {
        CheckReport {
            check: check.into(),
            level,
            cases: 0,
            failures: Vec::new(),
            errors: Vec::new(),
        }
    }

    /// Records one case; `Some(msg)` marks it failed.
    pub fn record(&mut self, failure: Option<String>) {
        self.cases += 1;
        if let Some(msg) = failure {
            self.failures.push(msg);
        }
    }

    pub fn pass(&mut self) {
        self.record(None);
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.record(Some(msg.into()));
    }

    pub fn error(&mut self, msg: impl Into<String>) {
        self.cases += 1;
        self.errors.push(msg.into());
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.errors.extend(other.errors);
    }

    pub fn status(&self) -> Status {
        if !self.errors.is_empty() {
            Status::Error
        } else if !self.failures.is_empty() {
            Status::Refuted
        } else if self.level == Level::Conjecture {
            Status::ConjectureSupported
        } else {
            Status::Verified
        }
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.failures.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({} cases", self.check, self.status(), self.cases)?;
        if !self.failures.is_empty() {
            write!(f, ", {} failed", self.failures.len())?;
        }
        write!(f, ")")
    }
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for CheckReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            check: &'a str,
            level: Level,
            status: Status,
            cases: usize,
            failures: &'a [String],
            errors: &'a [String],
        }
        View {
            check: &self.check,
            level: self.level,
            status: self.status(),
            cases: self.cases,
            failures: &self.failures,
            errors: &self.errors,
        }
        .serialize(s)
    }
}
