//! Findings produced by parsing, validation, derivation and export.
//!
//! Every finding carries a stable code. Codes are listed in [`codes`] and
//! in the README; a code is never reused for a different meaning.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Stable diagnostic codes.
pub mod codes {
    pub const EMPTY_NAME: &str = "E000";
    pub const DUPLICATE_ID: &str = "E001";
    pub const ATTR_NOT_ALLOWED: &str = "E002";
    pub const UNKNOWN_REFERENCE: &str = "E003";
    pub const FORBIDDEN_RELATION: &str = "E004";
    pub const INVALID_ID: &str = "E005";
    pub const SECOND_ACTOR: &str = "E006";
    pub const ATTR_OUT_OF_BRANCH: &str = "E007";
    pub const COMPONENT_WITHOUT_FUNCTION: &str = "E010";
    pub const EVENT_NOT_ANCHORED: &str = "E011";

    pub const EXPECTED_SYSTEM: &str = "E100";
    pub const UNEXPECTED_CHAR: &str = "E101";
    pub const UNTERMINATED_STRING: &str = "E102";
    pub const UNEXPECTED_TOKEN: &str = "E103";
    pub const UNKNOWN_STATEMENT: &str = "E104";
    pub const UNKNOWN_CLAUSE: &str = "E105";
    pub const TRAILING_INPUT: &str = "E107";
    pub const INVALID_VALUE: &str = "E108";
    pub const UNKNOWN_LEAF: &str = "E120";
    pub const LEAF_WRONG_BRANCH: &str = "E121";
    pub const NOT_REPRESENTABLE: &str = "E150";
    pub const UNREADABLE_FILE: &str = "E190";
    pub const INVALID_UTF8: &str = "E191";

    pub const INVALID_MODEL_FOR_DERIVATION: &str = "E200";
    pub const ITEMSET_MISMATCH: &str = "E201";
    pub const INVALID_MODEL_FOR_EXPORT: &str = "E300";
    pub const DUPLICATE_SYSTEM: &str = "E400";

    pub const DANGLING_EVENT: &str = "W101";
    pub const ACTIVITY_WITHOUT_BUSINESS_VALUE: &str = "W102";
    pub const UNSERVED_USER_ACTIVITY: &str = "W103";
    pub const UNACCESSED_DATA: &str = "W104";
    pub const FALLBACK_ASSOCIATION: &str = "W105";
    pub const INFLUENCE_WITHOUT_BUSINESS_VALUE: &str = "W110";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// A position in a source file. Line and column are 1-based and counted
/// in characters; `length` is the token length in characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file.display(), self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("{severity} {code}: {message}")]
pub struct Diagnostic {
    pub code: String,
    pub severity: Severity,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<SourceSpan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
}

impl Diagnostic {
    pub fn error(code: &str, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Error, message)
    }

    pub fn warning(code: &str, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Warning, message)
    }

    fn new(code: &str, severity: Severity, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            severity,
            message: message.into(),
            location: None,
            subject: None,
        }
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }

    pub fn with_location(mut self, span: SourceSpan) -> Self {
        self.location = Some(span);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Renders `<file>:<line>:<col>: <severity> <code>: <message>`. Findings
    /// without a location render as `<severity> <code>: <message>`.
    pub fn render(&self, color: bool) -> String {
        let severity = if color {
            match self.severity {
                Severity::Error => "\x1b[1;31merror\x1b[0m".to_string(),
                Severity::Warning => "\x1b[1;33mwarning\x1b[0m".to_string(),
            }
        } else {
            self.severity.to_string()
        };
        match &self.location {
            Some(span) => format!("{span}: {severity} {}: {}", self.code, self.message),
            None => format!("{severity} {}: {}", self.code, self.message),
        }
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_with_location() {
        let d = Diagnostic::error(codes::UNKNOWN_LEAF, "unknown leaf `funktional`").with_location(
            SourceSpan {
                file: PathBuf::from("faq.dsa"),
                line: 7,
                column: 24,
                length: 10,
            },
        );
        assert_eq!(
            d.render(false),
            "faq.dsa:7:24: error E120: unknown leaf `funktional`"
        );
        assert!(d.render(true).contains("\x1b[1;31m"));
    }

    #[test]
    fn render_without_location() {
        let d = Diagnostic::warning(codes::DANGLING_EVENT, "dangling event");
        assert_eq!(d.render(false), "warning W101: dangling event");
    }
}
