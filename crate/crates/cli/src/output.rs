use std::time::Instant;

use envelope_core::error::EnvelopeError;
use envelope_core::report::{CheckReport, Level};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Failure {
    Usage,
    Theorem,
    Conjecture,
    Internal,
}

impl Failure {
    pub fn code(self) -> u8 {
        match self {
            Failure::Usage => 2,
            Failure::Theorem => 3,
            Failure::Conjecture => 4,
            Failure::Internal => 5,
        }
    }
}

#[derive(Debug)]
pub struct Fatal {
    pub kind: Failure,
    pub message: String,
}

impl Fatal {
    pub fn usage(message: impl Into<String>) -> Self {
        Fatal {
            kind: Failure::Usage,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Fatal {
            kind: Failure::Internal,
            message: message.into(),
        }
    }
}

impl From<EnvelopeError> for Fatal {
    fn from(e: EnvelopeError) -> Self {
        let kind = match e {
            EnvelopeError::NonIntegerResult(_)
            | EnvelopeError::LimitDoesNotExist(_)
            | EnvelopeError::NonPolynomialRestriction
            | EnvelopeError::ZeroWeightEncountered
            | EnvelopeError::Algebra(_) => Failure::Internal,
            _ => Failure::Usage,
        };
        Fatal {
            kind,
            message: e.to_string(),
        }
    }
}

/// What a command prints and how it exits.
pub struct Output {
    pub text: String,
    pub code: u8,
}

/// Collects one command's parameters, results and checks, then renders them.
pub struct Run {
    command: &'static str,
    params: Value,
    results: Vec<Value>,
    checks: Vec<CheckReport>,
    started: Instant,
}

impl Run {
    pub fn new(command: &'static str, params: Value) -> Self {
        Run {
            command,
            params,
            results: Vec::new(),
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn push(&mut self, v: impl Serialize) {
        self.results.push(serde_json::to_value(v).expect("serializable result"));
    }

    pub fn check(&mut self, r: CheckReport) {
        self.checks.push(r);
    }

    /// The worst failure among the recorded checks.
    pub fn exit_code(&self) -> u8 {
        let mut code = 0;
        for c in &self.checks {
            let kind = if !c.errors.is_empty() {
                Some(Failure::Internal)
            } else if c.failures.is_empty() {
                None
            } else {
                Some(match c.level {
                    Level::Theorem => Failure::Theorem,
                    Level::Conjecture => Failure::Conjecture,
                    Level::Internal => Failure::Internal,
                })
            };
            if let Some(k) = kind {
                code = code.max(k.code());
            }
        }
        code
    }

    /// JSON gets the versioned envelope; text and csv get `body` as is.
    pub fn finish(self, format: Format, body: String) -> Output {
        let code = self.exit_code();
        let text = match format {
            Format::Json => {
                let mut results = self.results;
                results.extend(
                    self.checks
                        .iter()
                        .map(|c| serde_json::to_value(c).expect("serializable report")),
                );
                let doc = json!({
                    "schema": 1,
                    "command": self.command,
                    "params": self.params,
                    "results": results,
                    "runtime_ms": self.started.elapsed().as_millis() as u64,
                });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("valid json"))
            }
            _ => {
                let mut out = body;
                for c in &self.checks {
                    out.push_str(&format!("{c}\n"));
                    for f in c.failures.iter().chain(&c.errors).take(5) {
                        out.push_str(&format!("  {f}\n"));
                    }
                }
                out
            }
        };
        Output { text, code }
    }
}
