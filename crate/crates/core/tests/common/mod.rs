#![allow(dead_code)]

pub mod generate;
pub mod oracle;
pub mod xml;

use std::path::{Path, PathBuf};

use dsalign::derive::EvaluationItem;
use dsalign::diagnostic::has_errors;
use dsalign::model::AlignmentModel;
use dsalign::validate;

pub const FIXTURES: [&str; 5] = [
    "faq_chatbot",
    "speech_assistant",
    "job_interview",
    "status_interview",
    "conv_recommender",
];

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(stem: &str) -> PathBuf {
    fixtures_dir().join(format!("{stem}.dsa"))
}

pub fn golden_dir() -> PathBuf {
    fixtures_dir().join("golden")
}

pub fn fixture_text(stem: &str) -> String {
    std::fs::read_to_string(fixture_path(stem)).expect("fixture readable")
}

/// Parses text that is expected to be error-free.
pub fn parse_ok(text: &str) -> AlignmentModel {
    let result = dsalign::parse(text, Path::new("test.dsa"));
    assert!(
        result.model.is_some(),
        "unexpected diagnostics: {:#?}\n--- text ---\n{text}",
        result.diagnostics
    );
    result.model.unwrap()
}

pub fn load_fixture(stem: &str) -> AlignmentModel {
    let model = parse_ok(&fixture_text(stem));
    let findings = validate(&model);
    assert!(!has_errors(&findings), "{stem}: {findings:#?}");
    model
}

/// Codes of the errors among `parse` and `validate` findings for `text`.
pub fn codes_for(text: &str) -> Vec<String> {
    let result = dsalign::parse(text, Path::new("test.dsa"));
    let mut all = result.diagnostics.clone();
    if let Some(model) = &result.model {
        all.extend(validate(model));
    }
    all.into_iter().map(|d| d.code).collect()
}

/// Rule, leaf, sources, severity and description of an item.
pub type ItemKey = (String, String, Vec<String>, Option<String>, String);

/// Items without their positional ids, sorted.
pub fn item_multiset(items: &[EvaluationItem]) -> Vec<ItemKey> {
    let mut out: Vec<_> = items
        .iter()
        .map(|i| {
            (
                i.rule.to_string(),
                i.category.name().to_string(),
                i.sources.clone(),
                i.severity.map(|s| s.to_string()),
                i.description.clone(),
            )
        })
        .collect();
    out.sort();
    out
}
