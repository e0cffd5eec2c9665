//! ArchiMate 3.x Open Exchange Format (model, elements, relationships and
//! property definitions; no views).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{ensure_valid, selection, ExportOptions};
use crate::diagnostic::Diagnostic;
use crate::model::{AlignmentModel, Element, ElementKind, RelationKind};

const NAMESPACE: &str = "http://www.opengroup.org/xsd/archimate/3.0/";
const SCHEMA_LOCATION: &str =
    "http://www.opengroup.org/xsd/archimate/3.0/ http://www.opengroup.org/xsd/archimate/3.1/archimate3_Model.xsd";

/// ArchiMate element type for an element kind.
pub fn archimate_type(kind: ElementKind) -> &'static str {
    match kind {
        ElementKind::User | ElementKind::Operator => "BusinessActor",
        ElementKind::UserActivity | ElementKind::OperatorActivity => "BusinessProcess",
        ElementKind::DialogueService => "BusinessService",
        ElementKind::SystemComponent => "ApplicationComponent",
        ElementKind::ComponentFunction => "ApplicationFunction",
        ElementKind::DataModel => "DataObject",
        ElementKind::ObservedEvent | ElementKind::RiskItem => "Assessment",
        ElementKind::UserValue
        | ElementKind::QualityValue
        | ElementKind::BusinessValue
        | ElementKind::CostItem => "Value",
        ElementKind::Principle => "Principle",
    }
}

/// Refinement recorded as a `role` property where the ArchiMate type alone
/// is ambiguous.
fn role_property(kind: ElementKind) -> Option<&'static str> {
    match kind {
        ElementKind::RiskItem => Some("risk"),
        ElementKind::CostItem => Some("cost"),
        ElementKind::ObservedEvent => Some("observed_event"),
        ElementKind::UserValue => Some("user_value"),
        ElementKind::QualityValue => Some("quality_value"),
        ElementKind::BusinessValue => Some("business_value"),
        _ => None,
    }
}

/// Property keys in emission order; `role` is shared by actor roles and
/// kind refinements.
const PROPERTY_KEYS: [&str; 11] = [
    "kind",
    "role",
    "runs_on",
    "yields_user_value",
    "yields_quality_value",
    "yields_business_value",
    "implies_cost",
    "hinders",
    "category",
    "severity",
    "rule",
];

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c if (c as u32) < 0x20 => out.push('\u{fffd}'),
            c => out.push(c),
        }
    }
    out
}

fn properties(e: &Element) -> Vec<(&'static str, String)> {
    let mut props = vec![("kind", e.kind.as_str().to_string())];
    if let Some(role) = role_property(e.kind) {
        props.push(("role", role.to_string()));
    }
    for attr in &e.attrs {
        props.push((attr.key().as_str(), attr.value_text()));
    }
    props.sort_by_key(|(k, _)| property_rank(k));
    props
}

fn property_rank(key: &str) -> usize {
    PROPERTY_KEYS
        .iter()
        .position(|k| *k == key)
        .unwrap_or(PROPERTY_KEYS.len())
}

pub fn to_open_exchange(model: &AlignmentModel, options: &ExportOptions) -> Result<String, Diagnostic> {
    ensure_valid(model)?;
    let (elements, relations) = selection(model, options);

    let mut ids: HashMap<&str, String> = HashMap::new();
    let make_id = |key: &str| {
        if options.deterministic_ids {
            format!("id-{key}")
        } else {
            format!("id-{}", uuid::Uuid::new_v4())
        }
    };
    let model_id = make_id(&format!("model-{}", model.system_slug()));
    for e in &elements {
        ids.insert(e.id.as_str(), make_id(&e.id));
    }
    for r in &relations {
        ids.insert(r.id.as_str(), make_id(&r.id));
    }

    let element_props: Vec<Vec<(&str, String)>> = elements.iter().map(|e| properties(e)).collect();
    let mut used_keys: Vec<&str> = element_props.iter().flatten().map(|(k, _)| *k).collect();
    used_keys.sort_by_key(|k| property_rank(k));
    used_keys.dedup();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<model xmlns=\"{NAMESPACE}\" xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" xsi:schemaLocation=\"{SCHEMA_LOCATION}\" identifier=\"{}\">",
        escape(&model_id)
    );
    let _ = writeln!(out, "  <name xml:lang=\"en\">{}</name>", escape(model.system_name()));

    if elements.is_empty() {
        out.push_str("  <elements/>\n");
    } else {
        out.push_str("  <elements>\n");
        for (e, props) in elements.iter().zip(&element_props) {
            let _ = writeln!(
                out,
                "    <element identifier=\"{}\" xsi:type=\"{}\">",
                escape(&ids[e.id.as_str()]),
                archimate_type(e.kind)
            );
            let _ = writeln!(out, "      <name xml:lang=\"en\">{}</name>", escape(&e.name));
            if let Some(d) = &e.description {
                let _ = writeln!(
                    out,
                    "      <documentation xml:lang=\"en\">{}</documentation>",
                    escape(d)
                );
            }
            out.push_str("      <properties>\n");
            for (key, value) in props {
                let _ = writeln!(out, "        <property propertyDefinitionRef=\"propid-{key}\">");
                let _ = writeln!(out, "          <value xml:lang=\"en\">{}</value>", escape(value));
                out.push_str("        </property>\n");
            }
            out.push_str("      </properties>\n");
            out.push_str("    </element>\n");
        }
        out.push_str("  </elements>\n");
    }

    if !relations.is_empty() {
        out.push_str("  <relationships>\n");
        for r in &relations {
            let extra = match r.kind {
                RelationKind::Association => " isDirected=\"false\"",
                RelationKind::Access => " accessType=\"Read\"",
                RelationKind::Influence
                    if model.element(&r.target).map(|e| e.kind) == Some(ElementKind::Principle) =>
                {
                    " modifier=\"-\""
                }
                _ => "",
            };
            let _ = writeln!(
                out,
                "    <relationship identifier=\"{}\" source=\"{}\" target=\"{}\" xsi:type=\"{}\"{extra}/>",
                escape(&ids[r.id.as_str()]),
                escape(&ids[r.source.as_str()]),
                escape(&ids[r.target.as_str()]),
                r.kind.as_str()
            );
        }
        out.push_str("  </relationships>\n");
    }

    if !used_keys.is_empty() {
        out.push_str("  <propertyDefinitions>\n");
        for key in used_keys {
            let _ = writeln!(
                out,
                "    <propertyDefinition identifier=\"propid-{key}\" type=\"string\">"
            );
            let _ = writeln!(out, "      <name xml:lang=\"en\">{key}</name>");
            out.push_str("    </propertyDefinition>\n");
        }
        out.push_str("  </propertyDefinitions>\n");
    }
    out.push_str("</model>\n");
    Ok(out)
}
