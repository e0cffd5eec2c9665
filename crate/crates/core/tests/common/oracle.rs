//! Reference implementation of the five derivation rules, written
//! directly from the rule statements and kept deliberately naive.

use dsalign::model::{AlignmentModel, Attr, ElementKind, Platform};

/// `(rule, leaf, source, severity)` in rule order, then element order.
pub type Expected = (String, String, String, Option<String>);

pub fn expected_items(model: &AlignmentModel) -> Vec<Expected> {
    let mut out = Vec::new();
    let row = |rule: &str, leaf: &str, source: &str, severity: Option<String>| {
        (rule.to_string(), leaf.to_string(), source.to_string(), severity)
    };

    // R1: two staff items per component, one IT item for hosted
    // components, one item per implied cost; all in element order.
    for e in model.elements() {
        if e.kind == ElementKind::SystemComponent {
            out.push(row("R1_cost", "human_resources", &e.id, None));
            out.push(row("R1_cost", "human_resources", &e.id, None));
            let hosted = e.attrs.iter().any(|a| {
                matches!(
                    a,
                    Attr::RunsOn {
                        platform: Platform::Server | Platform::ExternalApi
                    }
                )
            });
            if hosted {
                out.push(row("R1_cost", "it_resources", &e.id, None));
            }
        }
        if e.kind == ElementKind::ObservedEvent {
            for a in &e.attrs {
                if let Attr::ImpliesCost(annotation) = a {
                    out.push(row("R1_cost", annotation.leaf.name(), &e.id, None));
                }
            }
        }
    }
    for e in model.elements() {
        for a in &e.attrs {
            if let Attr::Hinders {
                principle,
                severity,
                ..
            } = a
            {
                out.push(row("R2_risk", principle.name(), &e.id, Some(severity.to_string())));
            }
        }
    }
    for e in model.elements() {
        for a in &e.attrs {
            if let Attr::YieldsBusinessValue(v) = a {
                out.push(row("R3_business", v.leaf.name(), &e.id, None));
            }
        }
    }
    for e in model.elements() {
        for a in &e.attrs {
            if let Attr::YieldsUserValue(v) = a {
                out.push(row("R4_user", v.leaf.name(), &e.id, None));
            }
        }
    }
    for e in model.elements() {
        for a in &e.attrs {
            if let Attr::YieldsQualityValue(v) = a {
                out.push(row("R5_quality", v.leaf.name(), &e.id, None));
            }
        }
    }
    out
}

pub fn actual_items(set: &dsalign::EvaluationItemSet) -> Vec<Expected> {
    set.items
        .iter()
        .map(|i| {
            (
                i.rule.to_string(),
                i.category.name().to_string(),
                i.sources.join(","),
                i.severity.map(|s| s.to_string()),
            )
        })
        .collect()
}

/// Edit distance by the textbook recurrence, no memoization shortcuts
/// beyond a full table.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in table[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let substitution = table[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            table[i][j] = substitution
                .min(table[i - 1][j] + 1)
                .min(table[i][j - 1] + 1);
        }
    }
    table[a.len()][b.len()]
}
