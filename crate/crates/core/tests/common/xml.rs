//! Structural checker for Open Exchange documents.

use std::collections::HashSet;

#[derive(Debug, Default)]
pub struct XmlSummary {
    pub elements: usize,
    pub relationships: usize,
    pub element_types: Vec<(String, String)>,
}

/// Asserts well-formedness, identifier uniqueness and reference closure.
pub fn check_closure(xml: &str) -> XmlSummary {
    let doc = roxmltree::Document::parse(xml).expect("well-formed XML");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "model");

    let mut ids = HashSet::new();
    for node in doc.descendants().filter(|n| n.is_element()) {
        if let Some(id) = node.attribute("identifier") {
            assert!(ids.insert(id.to_string()), "duplicate identifier {id}");
        }
    }

    let xsi = "http://www.w3.org/2001/XMLSchema-instance";
    let mut summary = XmlSummary::default();
    let mut element_ids = HashSet::new();
    for node in doc.descendants().filter(|n| n.has_tag_name("element")) {
        let id = node.attribute("identifier").expect("element identifier");
        let ty = node.attribute((xsi, "type")).expect("element type");
        element_ids.insert(id.to_string());
        summary.element_types.push((id.to_string(), ty.to_string()));
        summary.elements += 1;
    }
    for node in doc.descendants().filter(|n| n.has_tag_name("relationship")) {
        for end in ["source", "target"] {
            let r = node.attribute(end).expect("relationship end");
            assert!(element_ids.contains(r), "{end} {r} does not resolve");
        }
        summary.relationships += 1;
    }
    let definitions: HashSet<&str> = doc
        .descendants()
        .filter(|n| n.has_tag_name("propertyDefinition"))
        .filter_map(|n| n.attribute("identifier"))
        .collect();
    for node in doc.descendants().filter(|n| n.has_tag_name("property")) {
        let r = node.attribute("propertyDefinitionRef").expect("property ref");
        assert!(definitions.contains(r), "property definition {r} missing");
    }
    summary
}
