//! Graphviz DOT rendering with evaluation items grouped by branch.

use std::fmt::Write as _;

use super::{ensure_valid, selection, ExportOptions};
use crate::diagnostic::Diagnostic;
use crate::model::{AlignmentModel, Element, ElementKind, RelationKind};

/// Cluster name and label for motivation elements.
fn cluster(kind: ElementKind) -> Option<(&'static str, &'static str)> {
    match kind {
        ElementKind::UserValue | ElementKind::QualityValue | ElementKind::BusinessValue => {
            Some(("cluster_value", "value"))
        }
        ElementKind::RiskItem => Some(("cluster_risk", "risk")),
        ElementKind::CostItem => Some(("cluster_cost", "cost")),
        ElementKind::Principle => Some(("cluster_principle", "principle")),
        _ => None,
    }
}

const CLUSTERS: [&str; 4] = [
    "cluster_value",
    "cluster_risk",
    "cluster_cost",
    "cluster_principle",
];

fn shape(kind: ElementKind) -> &'static str {
    match kind {
        ElementKind::User | ElementKind::Operator => "ellipse",
        ElementKind::UserActivity | ElementKind::OperatorActivity => "box",
        ElementKind::DialogueService => "box",
        ElementKind::SystemComponent | ElementKind::ComponentFunction => "component",
        ElementKind::DataModel => "note",
        ElementKind::ObservedEvent => "octagon",
        ElementKind::RiskItem => "diamond",
        ElementKind::Principle => "hexagon",
        _ => "oval",
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out
}

fn node(out: &mut String, indent: &str, e: &Element) {
    let _ = writeln!(
        out,
        "{indent}\"{}\" [label=\"{}\\n{}\", shape={}];",
        escape(&e.id),
        e.kind.as_str(),
        escape(&e.name),
        shape(e.kind)
    );
}

pub fn to_dot(model: &AlignmentModel, options: &ExportOptions) -> Result<String, Diagnostic> {
    ensure_valid(model)?;
    let (elements, relations) = selection(model, options);

    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", model.system_slug());
    let _ = writeln!(out, "  label=\"{}\";", escape(model.system_name()));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [fontsize=10];\n");
    out.push_str("  edge [fontsize=8];\n");

    for e in elements.iter().filter(|e| cluster(e.kind).is_none()) {
        node(&mut out, "  ", e);
    }
    for name in CLUSTERS {
        let members: Vec<&&Element> = elements
            .iter()
            .filter(|e| cluster(e.kind).map(|(n, _)| n) == Some(name))
            .collect();
        if members.is_empty() {
            continue;
        }
        let label = name.trim_start_matches("cluster_");
        let _ = writeln!(out, "  subgraph {name} {{");
        let _ = writeln!(out, "    label=\"{label}\";");
        for e in members {
            node(&mut out, "    ", e);
        }
        out.push_str("  }\n");
    }

    for r in relations {
        let style = if r.kind == RelationKind::Association {
            ", dir=none"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"{style}];",
            escape(&r.source),
            escape(&r.target),
            r.kind.as_str()
        );
    }
    out.push_str("}\n");
    Ok(out)
}
