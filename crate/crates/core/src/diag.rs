//! Uniform error reports for every phase, as text or JSON.

use serde::Serialize;

use crate::eval::RuntimeError;
use crate::lint::LintError;
use crate::syntax::{ParseError, Span};
use crate::typecheck::{TypeError, TypeErrorKind};
use crate::Level;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Parse,
    Typecheck,
    Lint,
    Runtime,
    Internal,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Parse => "parse",
            Phase::Typecheck => "typecheck",
            Phase::Lint => "lint",
            Phase::Runtime => "runtime",
            Phase::Internal => "internal",
        }
    }
}

/// One error report. Phases that work on core rather than source text have
/// no position to offer and leave `span` null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub phase: Phase,
    pub code: String,
    pub message: String,
    pub span: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_level: Option<Level>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub use_level: Option<Level>,
}

impl Diagnostic {
    fn new(phase: Phase, code: &str, message: String, span: Option<Span>) -> Diagnostic {
        Diagnostic {
            phase,
            code: code.to_string(),
            message,
            span,
            bound_level: None,
            use_level: None,
        }
    }

    pub fn parse(e: &ParseError) -> Diagnostic {
        let mut d = Diagnostic::new(Phase::Parse, "ParseError", e.to_string(), Some(e.span));
        // The span is reported separately.
        d.message = d
            .message
            .strip_prefix(&format!("{}: ", e.span))
            .map(str::to_string)
            .unwrap_or(d.message);
        d
    }

    pub fn typecheck(e: &TypeError) -> Diagnostic {
        let mut d = Diagnostic::new(Phase::Typecheck, e.code(), e.kind.to_string(), Some(e.span));
        if let TypeErrorKind::StageError { bound, used, .. } = e.kind {
            d.bound_level = Some(bound);
            d.use_level = Some(used);
        }
        d
    }

    pub fn lint(e: &LintError, phase: Phase) -> Diagnostic {
        Diagnostic::new(phase, e.kind.code(), e.to_string(), None)
    }

    pub fn runtime(e: &RuntimeError) -> Diagnostic {
        Diagnostic::new(Phase::Runtime, e.code(), e.to_string(), None)
    }

    pub fn usage(message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(Phase::Parse, "Usage", message.into(), None)
    }

    /// `file:line:col: phase error[Code]: message`
    pub fn render(&self, file: &str) -> String {
        let at = match self.span {
            Some(s) => format!("{file}:{s}"),
            None => file.to_string(),
        };
        format!(
            "{at}: {} error[{}]: {}",
            self.phase.name(),
            self.code,
            self.message
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}
