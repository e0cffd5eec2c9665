//! Canonical printer for alignment models.
//!
//! Output uses two-space indentation, one blank line between top-level
//! statements, elements in insertion order, attributes in allowlist order
//! and a trailing newline. Functions realized by a component are nested in
//! the first such component.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::parser::{cost_short_name, parse};
use crate::diagnostic::{codes, has_errors, Diagnostic};
use crate::model::{AlignmentModel, Attr, Element, ElementKind, Relation, RelationKind};
use crate::validate::validate;

pub fn format(model: &AlignmentModel) -> Result<String, Vec<Diagnostic>> {
    let findings = validate(model);
    if has_errors(&findings) {
        return Err(findings.into_iter().filter(Diagnostic::is_error).collect());
    }
    if let Some(e) = model.elements().find(|e| e.kind.is_motivation()) {
        return Err(vec![Diagnostic::error(
            codes::NOT_REPRESENTABLE,
            format!(
                "{} `{}` is a derived element and has no textual form; format the model before attaching items",
                e.kind, e.id
            ),
        )
        .with_subject(&e.id)]);
    }

    let printer = Printer::new(model);
    let text = printer.print();

    let reparsed = parse(&text, Path::new("<formatted>"));
    match reparsed.model {
        Some(again) if equivalent(model, &again) => Ok(text),
        _ => Err(vec![Diagnostic::error(
            codes::NOT_REPRESENTABLE,
            "model contains relations that no clause of the textual form can express",
        )]),
    }
}

/// Same elements and the same relation multiset, ignoring order and
/// relation ids.
fn equivalent(a: &AlignmentModel, b: &AlignmentModel) -> bool {
    if a.system_name() != b.system_name() || a.elements().len() != b.elements().len() {
        return false;
    }
    if !a.elements().all(|e| b.element(&e.id) == Some(e)) {
        return false;
    }
    let key = |r: &Relation| {
        let (s, t) = if r.kind.is_directed() || r.source <= r.target {
            (r.source.clone(), r.target.clone())
        } else {
            (r.target.clone(), r.source.clone())
        };
        (r.kind, s, t)
    };
    let mut ra: Vec<_> = a.relations().iter().map(key).collect();
    let mut rb: Vec<_> = b.relations().iter().map(key).collect();
    ra.sort();
    rb.sort();
    ra == rb
}

pub(crate) fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

struct Printer<'m> {
    model: &'m AlignmentModel,
    /// Function id to the component it is printed under.
    nest: HashMap<&'m str, &'m str>,
}

impl<'m> Printer<'m> {
    fn new(model: &'m AlignmentModel) -> Self {
        let mut nest = HashMap::new();
        for r in model.relations() {
            if r.kind != RelationKind::Realization {
                continue;
            }
            let kinds = (
                model.element(&r.source).map(|e| e.kind),
                model.element(&r.target).map(|e| e.kind),
            );
            if kinds == (Some(ElementKind::SystemComponent), Some(ElementKind::ComponentFunction)) {
                nest.entry(r.target.as_str()).or_insert(r.source.as_str());
            }
        }
        Printer { model, nest }
    }

    fn print(&self) -> String {
        let mut out = format!("system {} {{\n", quote(self.model.system_name()));
        let mut first = true;
        for e in self.model.elements() {
            if e.kind == ElementKind::ComponentFunction && self.nest.contains_key(e.id.as_str()) {
                continue;
            }
            if !first {
                out.push('\n');
            }
            first = false;
            self.statement(&mut out, e, 1);
        }
        out.push_str("}\n");
        out
    }

    fn statement(&self, out: &mut String, e: &Element, depth: usize) {
        let indent = "  ".repeat(depth);
        let keyword = match e.kind {
            ElementKind::User => "actor user",
            ElementKind::Operator => "actor operator",
            ElementKind::UserActivity => "user_activity",
            ElementKind::OperatorActivity => "operator_activity",
            ElementKind::DialogueService => "service",
            ElementKind::SystemComponent => "component",
            ElementKind::ComponentFunction => "function",
            ElementKind::DataModel => "data",
            ElementKind::ObservedEvent => "event",
            _ => unreachable!("derived elements are rejected before printing"),
        };
        let _ = write!(out, "{indent}{keyword} {} {}", e.id, quote(&e.name));
        let nested = depth > 1;
        let body = self.clauses(e, depth + 1);
        if body.is_empty() {
            out.push_str(if nested { ";\n" } else { "\n" });
        } else {
            out.push_str(" {\n");
            out.push_str(&body);
            let _ = writeln!(out, "{indent}}}");
        }
    }

    fn ids<'a>(&self, relations: impl Iterator<Item = &'a Relation>, pick: fn(&'a Relation) -> &'a str) -> Vec<&'a str> {
        relations.map(pick).collect()
    }

    fn clauses(&self, e: &Element, depth: usize) -> String {
        let indent = "  ".repeat(depth);
        let m = self.model;
        let mut out = String::new();
        let list = |out: &mut String, key: &str, ids: Vec<&str>| {
            if !ids.is_empty() {
                let _ = writeln!(out, "{indent}{key}: {};", ids.join(", "));
            }
        };

        if let Some(d) = &e.description {
            let _ = writeln!(out, "{indent}description: {};", quote(d));
        }
        for attr in &e.attrs {
            if let Attr::Role { text } = attr {
                let _ = writeln!(out, "{indent}role: {};", quote(text));
            }
        }
        let kind_is = |id: &str, kinds: &[ElementKind]| {
            m.element(id).is_some_and(|x| kinds.contains(&x.kind))
        };
        match e.kind {
            ElementKind::UserActivity | ElementKind::OperatorActivity => {
                let by = self.ids(m.incoming(&e.id, RelationKind::Assignment), |r| &r.source);
                list(&mut out, "by", by);
            }
            ElementKind::DialogueService => {
                let serves = self.ids(m.outgoing(&e.id, RelationKind::Serving), |r| &r.target);
                list(&mut out, "serves", serves);
                let realized = self.ids(m.incoming(&e.id, RelationKind::Realization), |r| &r.source);
                list(&mut out, "realized_by", realized);
            }
            ElementKind::SystemComponent => {
                for r in m.outgoing(&e.id, RelationKind::Realization) {
                    if self.nest.get(r.target.as_str()) == Some(&e.id.as_str()) {
                        if let Some(f) = m.element(&r.target) {
                            self.statement(&mut out, f, depth);
                        }
                    }
                }
            }
            _ => {}
        }
        if matches!(e.kind, ElementKind::SystemComponent | ElementKind::ComponentFunction) {
            let uses = self.ids(m.outgoing(&e.id, RelationKind::Access), |r| &r.target);
            list(&mut out, "uses", uses);
        }
        if e.kind == ElementKind::ObservedEvent {
            let about: Vec<&str> = m
                .relations()
                .iter()
                .filter(|r| r.kind == RelationKind::Association)
                .filter_map(|r| {
                    if r.source == e.id {
                        Some(r.target.as_str())
                    } else if r.target == e.id && !kind_is(&r.source, &[ElementKind::ObservedEvent]) {
                        Some(r.source.as_str())
                    } else {
                        None
                    }
                })
                .collect();
            list(&mut out, "about", about);
        }
        for attr in &e.attrs {
            if let Some(line) = attr_clause(attr) {
                let _ = writeln!(out, "{indent}{line};");
            }
        }
        if e.kind == ElementKind::UserActivity {
            let influences = self.ids(m.outgoing(&e.id, RelationKind::Influence), |r| &r.target);
            list(&mut out, "influences", influences);
        }
        out
    }
}

fn with_desc(head: String, description: &str) -> String {
    if description.is_empty() {
        head
    } else {
        format!("{head} {}", quote(description))
    }
}

fn attr_clause(attr: &Attr) -> Option<String> {
    let key = attr.key();
    Some(match attr {
        Attr::Role { .. } => return None,
        Attr::RunsOn { platform } => format!("{key}: {}", platform.as_str()),
        Attr::YieldsUserValue(a) | Attr::YieldsQualityValue(a) | Attr::YieldsBusinessValue(a) => {
            with_desc(format!("{key}: {}", a.leaf), &a.description)
        }
        Attr::ImpliesCost(a) => with_desc(format!("{key}: {}", cost_short_name(a.leaf)), &a.description),
        Attr::Hinders {
            principle,
            severity,
            description,
        } => with_desc(format!("{key}: {principle} severity: {severity}"), description),
        Attr::Category { .. } | Attr::Severity { .. } | Attr::Rule { .. } => return None,
    })
}
