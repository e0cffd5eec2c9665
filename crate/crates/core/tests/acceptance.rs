//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::generate::{inert_statement, reassemble, statements};
use common::xml::check_closure;
use dsalign::derive::{attach, derive_all, EvaluationItemSet};
use dsalign::diagnostic::has_errors;
use dsalign::export::{to_open_exchange, ExportFormat, ExportOptions};
use dsalign::model::{ElementKind, Rule};
use dsalign::{format, validate};

fn dsalign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsalign"))
        .args(args)
        .env("DSALIGN_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn fixture(stem: &str) -> String {
    common::fixture_path(stem).display().to_string()
}

fn find<'a>(
    set: &'a EvaluationItemSet,
    rule: Rule,
    leaf: &str,
    source: &str,
) -> &'a dsalign::EvaluationItem {
    set.items
        .iter()
        .find(|i| i.rule == rule && i.category.name() == leaf && i.sources.iter().any(|s| s == source))
        .unwrap_or_else(|| panic!("no {rule} item for {leaf} at {source}"))
}

fn faq_golden_derivation() {
    let golden = std::fs::read_to_string(common::golden_dir().join("faq_chatbot.items.json")).unwrap();
    let started = Instant::now();
    let out = dsalign(&["derive", &fixture("faq_chatbot"), "--items", "-"]);
    let elapsed = started.elapsed();
    assert_eq!(out.status.code(), Some(0));
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);

    let set = EvaluationItemSet::from_json(&golden).unwrap();
    let derived = derive_all(&common::load_fixture("faq_chatbot")).unwrap();
    assert_eq!(derived, set);

    for component in ["web_server", "dialogue_manager", "faq_search"] {
        let costs: Vec<&str> = set
            .items
            .iter()
            .filter(|i| i.category.name() == "human_resources" && i.sources == [component])
            .map(|i| i.description.as_str())
            .collect();
        assert!(costs.iter().any(|d| d.starts_with("develop")), "{component}");
        assert!(costs.iter().any(|d| d.starts_with("operate")), "{component}");
    }
    let faq_set = find(&set, Rule::Cost, "information_resources", "needs_faq_set");
    assert!(faq_set.description.contains("Need for a FAQ set"));
    find(&set, Rule::Cost, "information_resources", "needs_scenario");
    let privacy = find(&set, Rule::Risk, "privacy", "pii_in_utterances");
    assert!(privacy.description.contains("poses a risk to privacy protection"));
    let responsibility = find(&set, Rule::Risk, "responsibility", "needs_faq_set");
    assert!(responsibility.description.contains("unclear responsibility for the content"));
    assert_eq!(responsibility.severity.map(|s| s.to_string()).as_deref(), Some("low"));
    let reduction = find(&set, Rule::Business, "cost_reduction", "provide_information");
    assert!(reduction.description.contains("reduces labor costs"));
    let revenue = find(&set, Rule::Business, "new_revenue", "obtain_requests");
    assert!(revenue.description.contains("new revenue opportunities"));
    let functional = find(&set, Rule::User, "functional", "obtain_information");
    assert!(functional.description.contains("provides functional value"));
    let must_be = find(&set, Rule::Quality, "must_be", "obtain_information");
    assert!(must_be.description.contains("provides essential value"));
}

fn corpus_health() {
    for stem in common::FIXTURES {
        let model = common::load_fixture(stem);
        derive_all(&model).unwrap();
    }
    let files: Vec<String> = common::FIXTURES.iter().map(|s| fixture(s)).collect();
    let mut args = vec!["report", "--matrix"];
    args.extend(files.iter().map(String::as_str));
    let out = dsalign(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let common_section = text
        .split("## Common to all systems")
        .nth(1)
        .and_then(|s| s.split("## By category").next())
        .unwrap();
    assert!(common_section.contains("`cost/human_resources`"), "{common_section}");

    let interview = derive_all(&common::load_fixture("job_interview")).unwrap();
    let harm = find(&interview, Rule::Risk, "non_maleficence", "llm_generation");
    assert!(harm.description.contains("cannot be pre-checked"));
    assert_eq!(harm.severity.map(|s| s.to_string()).as_deref(), Some("low"));

    let status = derive_all(&common::load_fixture("status_interview")).unwrap();
    assert!(status
        .items
        .iter()
        .any(|i| i.category.name() == "emotional" && i.description.contains("dialogues enjoyable for the users")));
}

fn round_trip() {
    for stem in common::FIXTURES {
        let first = common::load_fixture(stem);
        let second = common::parse_ok(&format(&first).unwrap());
        assert_eq!(first, second, "{stem}");
        let out = dsalign(&["fmt", "--check", &fixture(stem)]);
        assert_eq!(out.status.code(), Some(0), "{stem}");
    }
}

fn pipeline_outputs() -> Vec<Vec<u8>> {
    let mut outputs = Vec::new();
    for stem in common::FIXTURES {
        let path = fixture(stem);
        for args in [
            vec!["derive", path.as_str(), "--items", "-"],
            vec!["export", path.as_str()],
            vec!["export", path.as_str(), "--format", "dot"],
            vec!["report", path.as_str()],
        ] {
            let out = dsalign(&args);
            assert_eq!(out.status.code(), Some(0), "{args:?}");
            outputs.push(out.stdout);
            outputs.push(out.stderr);
        }
    }
    let files: Vec<String> = common::FIXTURES.iter().map(|s| fixture(s)).collect();
    for format in ["markdown", "csv"] {
        let mut args = vec!["report", "--matrix", "--format", format];
        args.extend(files.iter().map(String::as_str));
        outputs.push(dsalign(&args).stdout);
    }
    outputs
}

fn determinism() {
    assert_eq!(pipeline_outputs(), pipeline_outputs());
}

fn monotonicity() {
    let mut rng = StdRng::seed_from_u64(20_240_501);
    for case in 0..256 {
        let stem = common::FIXTURES[rng.random_range(0..common::FIXTURES.len())];
        let model = common::load_fixture(stem);
        let before = derive_all(&model).unwrap();
        let data: Vec<String> = model
            .elements_of_kind(ElementKind::DataModel)
            .iter()
            .map(|e| e.id.clone())
            .collect();
        let (header, mut parts) = statements(&common::fixture_text(stem));
        let at = rng.random_range(0..=parts.len());
        parts.insert(at, inert_statement(rng.random(), &data));
        let grown = common::parse_ok(&reassemble(&header, &parts));
        assert_eq!(grown.elements().len(), model.elements().len() + 1, "case {case}");
        let after = derive_all(&grown).unwrap();
        assert_eq!(
            common::item_multiset(&before.items),
            common::item_multiset(&after.items),
            "case {case} on {stem}"
        );
    }
}

/// One rule violation each, with the single code it must produce.
fn mutations(faq: &str) -> Vec<(&'static str, String, bool)> {
    let add = |statement: &str| faq.replacen("\n}\n", &format!("\n\n  {statement}\n}}\n"), 1);
    let replace = |from: &str, to: &str| {
        assert!(faq.contains(from), "{from}");
        faq.replacen(from, to, 1)
    };
    vec![
        ("E010", add("component orphan \"Orphan component\""), false),
        ("E011", add("event loose \"Unanchored event\" {\n    implies_cost: human;\n  }"), false),
        ("W101", add("event idle \"Idle event\" {\n    about: faq_set;\n  }"), true),
        ("W102", add("operator_activity idle_op \"Idle activity\" {\n    by: faq_owner;\n  }"), true),
        ("W103", add("user_activity browse \"Browse\" {\n    by: info_seeker;\n  }"), true),
        ("W104", add("data unused \"Unused data\""), true),
        ("E002", replace("about: scenario;", "about: scenario;\n    runs_on: server;"), false),
        ("E004", replace("by: info_seeker;", "by: faq_owner;"), false),
        ("E004", replace("obtain_requests;\n    realized_by", "obtain_requests, faq_set;\n    realized_by"), false),
        ("E120", replace("functional \"", "funktional \""), false),
    ]
}

fn validator_seeding() {
    let faq = common::fixture_text("faq_chatbot");
    let dir = tempfile::tempdir().unwrap();
    let cases = mutations(&faq);
    assert_eq!(cases.len(), 10);
    for (i, (code, text, strict)) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("mutant_{i}.dsa"));
        std::fs::write(&path, &text).unwrap();
        let path = path.display().to_string();
        let mut args = vec!["check"];
        if strict {
            args.push("--strict");
        }
        args.push(&path);
        let out = dsalign(&args);
        assert_eq!(out.status.code(), Some(1), "mutant {i} ({code})");
        let stderr = String::from_utf8(out.stderr).unwrap();
        let codes: BTreeSet<&str> = stderr
            .lines()
            .filter_map(|l| {
                let words: Vec<&str> = l.split_whitespace().collect();
                words
                    .windows(2)
                    .find(|w| w[0] == "error" || w[0] == "warning")
                    .map(|w| w[1].trim_end_matches(':'))
            })
            .collect();
        assert_eq!(codes, BTreeSet::from([code]), "mutant {i}:\n{stderr}");
    }
}

fn export_closure() {
    for stem in common::FIXTURES {
        let model = common::load_fixture(stem);
        let attached = attach(&model, &derive_all(&model).unwrap()).unwrap();
        let xml = to_open_exchange(&attached, &ExportOptions::new(ExportFormat::OpenExchange)).unwrap();
        let summary = check_closure(&xml);
        assert_eq!(summary.elements, attached.elements().len(), "{stem}");
        assert_eq!(summary.relationships, attached.relations().len(), "{stem}");
    }
}

fn attach_soundness() {
    for stem in common::FIXTURES {
        let model = common::load_fixture(stem);
        let attached = attach(&model, &derive_all(&model).unwrap()).unwrap();
        let findings = validate(&attached);
        assert!(!has_errors(&findings), "{stem}: {findings:#?}");
    }
}

fn main() {
    let criteria: [(&str, fn()); 8] = [
        ("FAQ golden derivation", faq_golden_derivation),
        ("Corpus health", corpus_health),
        ("Round-trip property", round_trip),
        ("Determinism", determinism),
        ("Monotonicity property", monotonicity),
        ("Validator seeding", validator_seeding),
        ("Export closure", export_closure),
        ("Attach soundness", attach_soundness),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(()) => println!("PASS {name}"),
            Err(payload) => {
                failed += 1;
                let reason = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {name}: {}", reason.lines().next().unwrap_or(""));
                for line in reason.lines().skip(1) {
                    println!("    {line}");
                }
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
