//! The alignment-model metamodel and the typed graph that instantiates it.

mod connections;
mod kinds;

use std::ops::Deref;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::diagnostic::{codes, Diagnostic};
use crate::taxonomy::{Branch, Leaf};

pub use connections::{check as check_connection, permitted_pairs, Connection};
pub use kinds::{
    Annotation, Attr, AttrKey, ElementKind, Platform, RelationKind, RiskLevel, Rule,
};

/// Words of the model language that can never be used as identifiers.
pub const RESERVED_WORDS: &[&str] = &[
    "system",
    "actor",
    "user",
    "operator",
    "user_activity",
    "operator_activity",
    "service",
    "component",
    "function",
    "data",
    "event",
    "by",
    "serves",
    "realized_by",
    "uses",
    "about",
    "influences",
    "description",
    "role",
    "runs_on",
    "yields_user_value",
    "yields_quality_value",
    "yields_business_value",
    "implies_cost",
    "hinders",
    "severity",
];

/// `[a-z][a-z0-9_]*` and not a reserved word.
pub fn is_valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    let head_ok = matches!(chars.next(), Some('a'..='z'));
    head_ok
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && !RESERVED_WORDS.contains(&id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub id: String,
    pub kind: ElementKind,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub attrs: Vec<Attr>,
}

impl Element {
    pub fn new(kind: ElementKind, id: impl Into<String>, name: impl Into<String>) -> Self {
        Element {
            id: id.into(),
            kind,
            name: name.into(),
            description: None,
            attrs: Vec::new(),
        }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn with_attr(mut self, attr: Attr) -> Self {
        self.attrs.push(attr);
        self
    }

    pub fn attrs_with_key(&self, key: AttrKey) -> impl Iterator<Item = &Attr> {
        self.attrs.iter().filter(move |a| a.key() == key)
    }

    pub fn has_attr(&self, key: AttrKey) -> bool {
        self.attrs_with_key(key).next().is_some()
    }

    pub fn runs_on(&self) -> Option<Platform> {
        self.attrs.iter().find_map(|a| match a {
            Attr::RunsOn { platform } => Some(*platform),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub id: String,
    pub kind: RelationKind,
    pub source: String,
    pub target: String,
}

impl Relation {
    pub fn touches(&self, id: &str) -> bool {
        self.source == id || self.target == id
    }

    /// The endpoint opposite `id`, if `id` is an endpoint.
    pub fn other(&self, id: &str) -> Option<&str> {
        if self.source == id {
            Some(&self.target)
        } else if self.target == id {
            Some(&self.source)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
    Any,
}

/// One dialogue system and its business context as a typed property graph.
///
/// Elements and relations keep insertion order, which is also the
/// canonical serialization order.
#[derive(Debug, Clone)]
pub struct AlignmentModel {
    system_name: String,
    elements: IndexMap<String, Element>,
    relations: Vec<Relation>,
    next_relation: usize,
}

impl PartialEq for AlignmentModel {
    fn eq(&self, other: &Self) -> bool {
        self.system_name == other.system_name
            && self.elements.len() == other.elements.len()
            && self.elements.values().eq(other.elements.values())
            && self.relations == other.relations
    }
}

impl Eq for AlignmentModel {}

impl AlignmentModel {
    pub fn new(system_name: impl Into<String>) -> Result<Self, Diagnostic> {
        let system_name = system_name.into();
        if system_name.trim().is_empty() {
            return Err(Diagnostic::error(
                codes::EMPTY_NAME,
                "system name must not be empty",
            ));
        }
        Ok(AlignmentModel {
            system_name,
            elements: IndexMap::new(),
            relations: Vec::new(),
            next_relation: 1,
        })
    }

    pub fn system_name(&self) -> &str {
        &self.system_name
    }

    /// Lowercase slug of the system name, used as graph and model id.
    pub fn system_slug(&self) -> String {
        slugify(&self.system_name)
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &Element> + Clone {
        self.elements.values()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn element(&self, id: &str) -> Option<&Element> {
        self.elements.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.elements.contains_key(id)
    }

    /// Position of an element in insertion order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.elements.get_index_of(id)
    }

    pub fn add_element(
        &mut self,
        kind: ElementKind,
        id: &str,
        name: &str,
        attrs: Vec<Attr>,
    ) -> Result<String, Diagnostic> {
        let mut element = Element::new(kind, id, name);
        element.attrs = attrs;
        self.add(element)
    }

    /// Appends a fully built element. Attributes are stored in canonical key
    /// order; entries sharing a key keep their relative order.
    pub fn add(&mut self, mut element: Element) -> Result<String, Diagnostic> {
        check_element(&element)?;
        if self.elements.contains_key(&element.id) {
            return Err(Diagnostic::error(
                codes::DUPLICATE_ID,
                format!("duplicate element id `{}`", element.id),
            )
            .with_subject(&element.id));
        }
        if matches!(element.kind, ElementKind::User | ElementKind::Operator) {
            if let Some(existing) = self.elements.values().find(|e| e.kind == element.kind) {
                return Err(Diagnostic::error(
                    codes::SECOND_ACTOR,
                    format!(
                        "model already has a {} element `{}`; model further roles as `role` attributes",
                        element.kind, existing.id
                    ),
                )
                .with_subject(&element.id));
            }
        }
        element.attrs.sort_by_key(Attr::key);
        let id = element.id.clone();
        self.elements.insert(id.clone(), element);
        Ok(id)
    }

    pub fn add_relation(
        &mut self,
        kind: RelationKind,
        source: &str,
        target: &str,
    ) -> Result<String, Diagnostic> {
        let source_kind = self.kind_of(source)?;
        let target_kind = self.kind_of(target)?;
        if check_connection(source_kind, kind, target_kind) == Connection::Forbidden {
            return Err(forbidden_relation(source, source_kind, kind, target, target_kind));
        }
        let id = format!("rel-{}", self.next_relation);
        self.next_relation += 1;
        self.relations.push(Relation {
            id: id.clone(),
            kind,
            source: source.to_string(),
            target: target.to_string(),
        });
        Ok(id)
    }

    fn kind_of(&self, id: &str) -> Result<ElementKind, Diagnostic> {
        self.elements.get(id).map(|e| e.kind).ok_or_else(|| {
            Diagnostic::error(
                codes::UNKNOWN_REFERENCE,
                format!("unknown element `{id}`"),
            )
            .with_subject(id)
        })
    }

    pub fn elements_of_kind(&self, kind: ElementKind) -> Vec<&Element> {
        self.elements.values().filter(|e| e.kind == kind).collect()
    }

    /// Adjacent elements in relation insertion order, without repeats.
    /// Undirected relations match every direction.
    pub fn neighbors(
        &self,
        id: &str,
        kind: Option<RelationKind>,
        direction: Direction,
    ) -> Result<Vec<&Element>, Diagnostic> {
        self.kind_of(id)?;
        let mut out: Vec<&Element> = Vec::new();
        for rel in &self.relations {
            if kind.is_some_and(|k| k != rel.kind) {
                continue;
            }
            let other = match direction {
                _ if !rel.kind.is_directed() => rel.other(id),
                Direction::Out => (rel.source == id).then_some(rel.target.as_str()),
                Direction::In => (rel.target == id).then_some(rel.source.as_str()),
                Direction::Any => rel.other(id),
            };
            if let Some(element) = other.and_then(|o| self.elements.get(o)) {
                if !out.iter().any(|e| e.id == element.id) {
                    out.push(element);
                }
            }
        }
        Ok(out)
    }

    /// Relations of `kind` leaving `id`, in insertion order.
    pub fn outgoing(&self, id: &str, kind: RelationKind) -> impl Iterator<Item = &Relation> {
        let id = id.to_string();
        self.relations
            .iter()
            .filter(move |r| r.kind == kind && r.source == id)
    }

    /// Relations of `kind` entering `id`, in insertion order.
    pub fn incoming(&self, id: &str, kind: RelationKind) -> impl Iterator<Item = &Relation> {
        let id = id.to_string();
        self.relations
            .iter()
            .filter(move |r| r.kind == kind && r.target == id)
    }

    pub fn freeze(self) -> FrozenModel {
        FrozenModel(Arc::new(self))
    }
}

/// A model that can no longer be mutated. Cheap to clone and safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenModel(Arc<AlignmentModel>);

impl Deref for FrozenModel {
    type Target = AlignmentModel;

    fn deref(&self) -> &AlignmentModel {
        &self.0
    }
}

impl FrozenModel {
    /// A mutable copy of the frozen model.
    pub fn thaw(&self) -> AlignmentModel {
        (*self.0).clone()
    }
}

pub(crate) fn forbidden_relation(
    source: &str,
    source_kind: ElementKind,
    kind: RelationKind,
    target: &str,
    target_kind: ElementKind,
) -> Diagnostic {
    Diagnostic::error(
        codes::FORBIDDEN_RELATION,
        format!(
            "{kind} from {source_kind} `{source}` to {target_kind} `{target}` is not a permitted connection"
        ),
    )
    .with_subject(source)
}

/// Checks of a single element that do not depend on the rest of the model.
pub(crate) fn check_element(element: &Element) -> Result<(), Diagnostic> {
    if !is_valid_id(&element.id) {
        return Err(Diagnostic::error(
            codes::INVALID_ID,
            format!(
                "invalid id `{}`: ids match [a-z][a-z0-9_]* and are not reserved words",
                element.id
            ),
        )
        .with_subject(&element.id));
    }
    if element.name.trim().is_empty() {
        return Err(Diagnostic::error(
            codes::EMPTY_NAME,
            format!("element `{}` has an empty name", element.id),
        )
        .with_subject(&element.id));
    }
    for attr in &element.attrs {
        check_attr(element, attr)?;
    }
    Ok(())
}

pub(crate) fn check_attr(element: &Element, attr: &Attr) -> Result<(), Diagnostic> {
    let key = attr.key();
    if !element.kind.allowed_attrs().contains(&key) {
        return Err(Diagnostic::error(
            codes::ATTR_NOT_ALLOWED,
            format!("attribute `{key}` is not allowed on {} elements", element.kind),
        )
        .with_subject(&element.id));
    }
    if let (Some(leaf), Some(domain)) = (attr.leaf(), key.leaf_domain()) {
        let in_domain = match element.kind {
            ElementKind::Principle => leaf.branch() == Branch::Risk,
            kind if key == AttrKey::Category => derived_rule(kind).is_some_and(|r| r.admits(leaf)),
            _ => domain.contains(&leaf),
        };
        if !in_domain {
            return Err(out_of_branch(element, key, leaf));
        }
    }
    Ok(())
}

fn out_of_branch(element: &Element, key: AttrKey, leaf: Leaf) -> Diagnostic {
    Diagnostic::error(
        codes::ATTR_OUT_OF_BRANCH,
        format!(
            "`{key}` on {} `{}` cannot take leaf `{}` ({})",
            element.kind,
            element.id,
            leaf,
            leaf.path()
        ),
    )
    .with_subject(&element.id)
}

fn derived_rule(kind: ElementKind) -> Option<Rule> {
    Rule::ALL.into_iter().find(|r| r.element_kind() == kind)
}

pub fn slugify(name: &str) -> String {
    let mut slug = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c.to_ascii_lowercase());
        } else if !slug.ends_with('_') && !slug.is_empty() {
            slug.push('_');
        }
    }
    while slug.ends_with('_') {
        slug.pop();
    }
    if slug.is_empty() {
        slug.push_str("system");
    } else if slug.starts_with(|c: char| c.is_ascii_digit()) {
        slug.insert_str(0, "system_");
    }
    slug
}
