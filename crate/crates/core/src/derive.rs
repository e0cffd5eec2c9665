//! Derivation of evaluation items (values, risks, costs) from a validated
//! alignment model, and attachment of the items back into the graph.
//!
//! Five rules run in a fixed order:
//!
//! * R1 costs: every component costs development/testing and
//!   operation/maintenance staff; components on a server or behind an
//!   external API also cost IT resources; every `implies_cost` entry of an
//!   observed event adds one item in its leaf.
//! * R2 risks: every `hinders` entry of an observed event is a risk in the
//!   hindered principle, carrying the entry's severity.
//! * R3 business values: every `yields_business_value` entry of an operator
//!   activity.
//! * R4 user values: every `yields_user_value` entry of a user activity.
//!   Declared `influences:` links become value-to-value influence edges on
//!   attach.
//! * R5 quality values: every `yields_quality_value` entry of a user activity.
//!
//! Judgements about which values an activity yields live in the model as
//! attributes; derivation propagates them and never guesses.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{codes, has_errors, Diagnostic};
use crate::model::{
    AlignmentModel, Attr, AttrKey, Element, ElementKind, FrozenModel, Platform, RelationKind,
    RiskLevel, Rule,
};
use crate::taxonomy::Leaf;
use crate::validate::validate;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvaluationItem {
    pub id: String,
    pub category: Leaf,
    pub description: String,
    pub sources: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<RiskLevel>,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationItemSet {
    pub system_name: String,
    pub items: Vec<EvaluationItem>,
    #[serde(default)]
    pub warnings: Vec<Diagnostic>,
}

impl EvaluationItemSet {
    pub fn count(&self, rule: Rule) -> usize {
        self.items.iter().filter(|i| i.rule == rule).count()
    }

    /// `15 items (9 cost, 2 risk, 2 business, 1 user, 1 quality)`
    pub fn summary(&self) -> String {
        let parts: Vec<String> = Rule::ALL
            .iter()
            .map(|r| format!("{} {}", self.count(*r), r.short()))
            .collect();
        let noun = if self.items.len() == 1 { "item" } else { "items" };
        format!("{} {noun} ({})", self.items.len(), parts.join(", "))
    }

    /// Deterministic JSON: keys sorted, two-space indent, LF, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("itemsets always serialize");
        let mut text = serde_json::to_string_pretty(&value).expect("values always serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn rule_prefix(rule: Rule) -> String {
    format!("item_{}", rule.as_str().to_ascii_lowercase())
}

struct Collector {
    rule: Rule,
    items: Vec<EvaluationItem>,
}

impl Collector {
    fn new(rule: Rule) -> Self {
        Collector {
            rule,
            items: Vec::new(),
        }
    }

    fn push(&mut self, category: Leaf, description: String, source: &Element, severity: Option<RiskLevel>) {
        debug_assert!(self.rule.admits(category));
        let id = format!("{}_{}", rule_prefix(self.rule), self.items.len() + 1);
        self.items.push(EvaluationItem {
            id,
            category,
            description,
            sources: vec![source.id.clone()],
            severity,
            rule: self.rule,
        });
    }
}

fn labelled(element: &Element, description: &str) -> String {
    if description.is_empty() {
        element.name.clone()
    } else {
        format!("{}: {description}", element.name)
    }
}

/// R1. One pass over elements in insertion order.
pub fn derive_costs(model: &AlignmentModel) -> Vec<EvaluationItem> {
    let mut out = Collector::new(Rule::Cost);
    for e in model.elements() {
        match e.kind {
            ElementKind::SystemComponent => {
                out.push(Leaf::HumanResources, format!("develop and test {}", e.name), e, None);
                out.push(Leaf::HumanResources, format!("operate and maintain {}", e.name), e, None);
                match e.runs_on() {
                    Some(Platform::Server) => {
                        out.push(Leaf::ItResources, format!("server usage fees for {}", e.name), e, None)
                    }
                    Some(Platform::ExternalApi) => out.push(
                        Leaf::ItResources,
                        format!("external API service usage fees for {}", e.name),
                        e,
                        None,
                    ),
                    _ => {}
                }
            }
            ElementKind::ObservedEvent => {
                for attr in e.attrs_with_key(AttrKey::ImpliesCost) {
                    if let Attr::ImpliesCost(a) = attr {
                        out.push(a.leaf, labelled(e, &a.description), e, None);
                    }
                }
            }
            _ => {}
        }
    }
    out.items
}

/// R2.
pub fn derive_risks(model: &AlignmentModel) -> Vec<EvaluationItem> {
    let mut out = Collector::new(Rule::Risk);
    for e in model.elements_of_kind(ElementKind::ObservedEvent) {
        for attr in &e.attrs {
            if let Attr::Hinders {
                principle,
                severity,
                description,
            } = attr
            {
                out.push(*principle, labelled(e, description), e, Some(*severity));
            }
        }
    }
    out.items
}

fn from_annotations(model: &AlignmentModel, rule: Rule, kind: ElementKind) -> Vec<EvaluationItem> {
    let mut out = Collector::new(rule);
    for e in model.elements_of_kind(kind) {
        for attr in &e.attrs {
            let annotation = match (rule, attr) {
                (Rule::Business, Attr::YieldsBusinessValue(a))
                | (Rule::User, Attr::YieldsUserValue(a))
                | (Rule::Quality, Attr::YieldsQualityValue(a)) => a,
                _ => continue,
            };
            out.push(annotation.leaf, labelled(e, &annotation.description), e, None);
        }
    }
    out.items
}

/// R3.
pub fn derive_business_values(model: &AlignmentModel) -> Vec<EvaluationItem> {
    from_annotations(model, Rule::Business, ElementKind::OperatorActivity)
}

/// R4.
pub fn derive_user_values(model: &AlignmentModel) -> Vec<EvaluationItem> {
    from_annotations(model, Rule::User, ElementKind::UserActivity)
}

/// R5.
pub fn derive_quality_values(model: &AlignmentModel) -> Vec<EvaluationItem> {
    from_annotations(model, Rule::Quality, ElementKind::UserActivity)
}

/// W110 for every `influences:` target that yields no business value.
pub fn influence_warnings(model: &AlignmentModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for activity in model.elements_of_kind(ElementKind::UserActivity) {
        for r in model.outgoing(&activity.id, RelationKind::Influence) {
            let yields = model.element(&r.target).is_some_and(|t| {
                t.kind == ElementKind::OperatorActivity && t.has_attr(AttrKey::YieldsBusinessValue)
            });
            if !yields {
                out.push(
                    Diagnostic::warning(
                        codes::INFLUENCE_WITHOUT_BUSINESS_VALUE,
                        format!(
                            "user activity `{}` influences `{}`, which yields no business value",
                            activity.id, r.target
                        ),
                    )
                    .with_subject(&activity.id),
                );
            }
        }
    }
    out
}

/// Runs R1..R5 in order. Refuses models with validation errors (E200).
pub fn derive_all(model: &AlignmentModel) -> Result<EvaluationItemSet, Diagnostic> {
    let findings = validate(model);
    if has_errors(&findings) {
        let n = findings.iter().filter(|d| d.is_error()).count();
        return Err(Diagnostic::error(
            codes::INVALID_MODEL_FOR_DERIVATION,
            format!(
                "cannot derive evaluation items for `{}`: model has {n} validation error(s)",
                model.system_name()
            ),
        ));
    }
    let mut items = derive_costs(model);
    items.extend(derive_risks(model));
    items.extend(derive_business_values(model));
    items.extend(derive_user_values(model));
    items.extend(derive_quality_values(model));
    let mut warnings = findings;
    warnings.extend(influence_warnings(model));
    Ok(EvaluationItemSet {
        system_name: model.system_name().to_string(),
        items,
        warnings,
    })
}

/// Element kinds an item of `rule` may cite as its source.
pub fn source_kinds(rule: Rule) -> &'static [ElementKind] {
    match rule {
        Rule::Cost => &[ElementKind::SystemComponent, ElementKind::ObservedEvent],
        Rule::Risk => &[ElementKind::ObservedEvent],
        Rule::Business => &[ElementKind::OperatorActivity],
        Rule::User | Rule::Quality => &[ElementKind::UserActivity],
    }
}

pub fn principle_id(leaf: Leaf) -> String {
    format!("principle_{}", leaf.name())
}

fn mismatch(message: String) -> Diagnostic {
    Diagnostic::error(codes::ITEMSET_MISMATCH, message)
}

/// Materializes `itemset` into a copy of `model`: one element per item,
/// one Principle element per hindered principle, and edges from every item
/// to its sources (E201 if the itemset does not belong to this model or was
/// already attached).
pub fn attach(model: &AlignmentModel, itemset: &EvaluationItemSet) -> Result<FrozenModel, Diagnostic> {
    if itemset.system_name != model.system_name() {
        return Err(mismatch(format!(
            "itemset for `{}` cannot be attached to `{}`",
            itemset.system_name,
            model.system_name()
        )));
    }
    for item in &itemset.items {
        if model.contains(&item.id) {
            return Err(mismatch(format!(
                "item `{}` is already materialized in the model",
                item.id
            ))
            .with_subject(&item.id));
        }
        if !item.rule.admits(item.category) || item.sources.is_empty() {
            return Err(mismatch(format!("item `{}` is malformed", item.id)).with_subject(&item.id));
        }
        for source in &item.sources {
            let ok = model
                .element(source)
                .is_some_and(|e| source_kinds(item.rule).contains(&e.kind));
            if !ok {
                return Err(mismatch(format!(
                    "item `{}` cites `{source}`, which is not a {} source in this model",
                    item.id, item.rule
                ))
                .with_subject(&item.id));
            }
        }
    }

    let mut m = model.clone();
    let wrap = |d: Diagnostic| mismatch(d.message).with_subject(d.subject.unwrap_or_default());

    for item in &itemset.items {
        let mut element = Element::new(item.rule.element_kind(), &item.id, &item.description)
            .with_attr(Attr::Category { leaf: item.category })
            .with_attr(Attr::Rule { rule: item.rule });
        if let Some(level) = item.severity.filter(|_| item.rule == Rule::Risk) {
            element = element.with_attr(Attr::Severity { level });
        }
        m.add(element).map_err(wrap)?;
    }

    let mut principles: Vec<Leaf> = Vec::new();
    for item in itemset.items.iter().filter(|i| i.rule == Rule::Risk) {
        if !principles.contains(&item.category) {
            principles.push(item.category);
        }
    }
    for leaf in principles {
        let id = principle_id(leaf);
        if !m.contains(&id) {
            let element = Element::new(ElementKind::Principle, &id, leaf.title())
                .with_attr(Attr::Category { leaf });
            m.add(element).map_err(wrap)?;
        }
    }

    let mut seen = HashSet::new();
    let mut link = |m: &mut AlignmentModel, kind: RelationKind, s: &str, t: &str| -> Result<(), Diagnostic> {
        if seen.insert((kind, s.to_string(), t.to_string())) {
            m.add_relation(kind, s, t).map_err(wrap)?;
        }
        Ok(())
    };
    for item in &itemset.items {
        for source in &item.sources {
            let source_kind = model.element(source).map(|e| e.kind);
            match (item.rule, source_kind) {
                (Rule::Cost, Some(ElementKind::ObservedEvent)) => {
                    link(&mut m, RelationKind::Influence, source, &item.id)?
                }
                (Rule::Risk, _) => {
                    let principle = principle_id(item.category);
                    link(&mut m, RelationKind::Association, &item.id, source)?;
                    link(&mut m, RelationKind::Influence, source, &principle)?;
                    link(&mut m, RelationKind::Association, &item.id, &principle)?;
                }
                _ => link(&mut m, RelationKind::Association, &item.id, source)?,
            }
        }
    }
    for user_item in itemset.items.iter().filter(|i| i.rule == Rule::User) {
        for activity in &user_item.sources {
            for r in model.outgoing(activity, RelationKind::Influence) {
                let targets = itemset
                    .items
                    .iter()
                    .filter(|i| i.rule == Rule::Business && i.sources.contains(&r.target));
                for business_item in targets {
                    link(&mut m, RelationKind::Influence, &user_item.id, &business_item.id)?;
                }
            }
        }
    }
    Ok(m.freeze())
}
