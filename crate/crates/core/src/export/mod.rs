//! Serialization of alignment models for other tools.

mod dot;
mod open_exchange;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use dot::to_dot;
pub use open_exchange::{archimate_type, to_open_exchange};

use crate::diagnostic::{codes, has_errors, Diagnostic};
use crate::model::{AlignmentModel, Element, Relation};
use crate::validate::validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    OpenExchange,
    Dot,
}

impl ExportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ExportFormat::OpenExchange => "open_exchange",
            ExportFormat::Dot => "dot",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open_exchange" => Ok(ExportFormat::OpenExchange),
            "dot" => Ok(ExportFormat::Dot),
            _ => Err(format!("unknown export format `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportOptions {
    pub format: ExportFormat,
    /// Emit value, risk, cost and principle elements.
    pub include_derived: bool,
    /// Derive exported identifiers from element ids. When false, fresh
    /// random identifiers are generated for every export.
    pub deterministic_ids: bool,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            format: ExportFormat::OpenExchange,
            include_derived: true,
            deterministic_ids: true,
        }
    }
}

impl ExportOptions {
    pub fn new(format: ExportFormat) -> Self {
        ExportOptions {
            format,
            ..Self::default()
        }
    }
}

/// Dispatches on `options.format`.
pub fn export(model: &AlignmentModel, options: &ExportOptions) -> Result<String, Diagnostic> {
    match options.format {
        ExportFormat::OpenExchange => to_open_exchange(model, options),
        ExportFormat::Dot => to_dot(model, options),
    }
}

fn ensure_valid(model: &AlignmentModel) -> Result<(), Diagnostic> {
    let findings = validate(model);
    if has_errors(&findings) {
        let first = findings.iter().find(|d| d.is_error()).expect("has errors");
        return Err(Diagnostic::error(
            codes::INVALID_MODEL_FOR_EXPORT,
            format!(
                "cannot export `{}`: {} validation error(s), first: {}",
                model.system_name(),
                findings.iter().filter(|d| d.is_error()).count(),
                first
            ),
        ));
    }
    Ok(())
}

/// Elements and relations selected by `options`, in model order.
fn selection<'m>(model: &'m AlignmentModel, options: &ExportOptions) -> (Vec<&'m Element>, Vec<&'m Relation>) {
    let elements: Vec<&Element> = model
        .elements()
        .filter(|e| options.include_derived || !e.kind.is_motivation())
        .collect();
    let kept: HashSet<&str> = elements.iter().map(|e| e.id.as_str()).collect();
    let relations = model
        .relations()
        .iter()
        .filter(|r| kept.contains(r.source.as_str()) && kept.contains(r.target.as_str()))
        .collect();
    (elements, relations)
}
