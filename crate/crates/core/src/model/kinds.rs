use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::taxonomy::Leaf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementKind {
    User,
    Operator,
    UserActivity,
    OperatorActivity,
    DialogueService,
    SystemComponent,
    ComponentFunction,
    DataModel,
    ObservedEvent,
    UserValue,
    QualityValue,
    BusinessValue,
    CostItem,
    RiskItem,
    Principle,
}

impl ElementKind {
    pub const ALL: [ElementKind; 15] = [
        ElementKind::User,
        ElementKind::Operator,
        ElementKind::UserActivity,
        ElementKind::OperatorActivity,
        ElementKind::DialogueService,
        ElementKind::SystemComponent,
        ElementKind::ComponentFunction,
        ElementKind::DataModel,
        ElementKind::ObservedEvent,
        ElementKind::UserValue,
        ElementKind::QualityValue,
        ElementKind::BusinessValue,
        ElementKind::CostItem,
        ElementKind::RiskItem,
        ElementKind::Principle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::User => "User",
            ElementKind::Operator => "Operator",
            ElementKind::UserActivity => "UserActivity",
            ElementKind::OperatorActivity => "OperatorActivity",
            ElementKind::DialogueService => "DialogueService",
            ElementKind::SystemComponent => "SystemComponent",
            ElementKind::ComponentFunction => "ComponentFunction",
            ElementKind::DataModel => "DataModel",
            ElementKind::ObservedEvent => "ObservedEvent",
            ElementKind::UserValue => "UserValue",
            ElementKind::QualityValue => "QualityValue",
            ElementKind::BusinessValue => "BusinessValue",
            ElementKind::CostItem => "CostItem",
            ElementKind::RiskItem => "RiskItem",
            ElementKind::Principle => "Principle",
        }
    }

    /// Kinds that hold derived results rather than system description.
    pub fn is_motivation(self) -> bool {
        matches!(
            self,
            ElementKind::UserValue
                | ElementKind::QualityValue
                | ElementKind::BusinessValue
                | ElementKind::CostItem
                | ElementKind::RiskItem
                | ElementKind::Principle
        )
    }

    pub fn allowed_attrs(self) -> &'static [AttrKey] {
        use AttrKey::*;
        match self {
            ElementKind::User | ElementKind::Operator => &[Role],
            ElementKind::UserActivity => &[YieldsUserValue, YieldsQualityValue],
            ElementKind::OperatorActivity => &[YieldsBusinessValue],
            ElementKind::SystemComponent => &[RunsOn],
            ElementKind::ObservedEvent => &[ImpliesCost, Hinders],
            ElementKind::DialogueService | ElementKind::ComponentFunction | ElementKind::DataModel => &[],
            ElementKind::RiskItem => &[Category, Severity, Rule],
            ElementKind::UserValue
            | ElementKind::QualityValue
            | ElementKind::BusinessValue
            | ElementKind::CostItem => &[Category, Rule],
            ElementKind::Principle => &[Category],
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown element kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    Serving,
    Realization,
    Assignment,
    Association,
    Influence,
    Aggregation,
    Access,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::Serving,
        RelationKind::Realization,
        RelationKind::Assignment,
        RelationKind::Association,
        RelationKind::Influence,
        RelationKind::Aggregation,
        RelationKind::Access,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::Serving => "Serving",
            RelationKind::Realization => "Realization",
            RelationKind::Assignment => "Assignment",
            RelationKind::Association => "Association",
            RelationKind::Influence => "Influence",
            RelationKind::Aggregation => "Aggregation",
            RelationKind::Access => "Access",
        }
    }

    pub fn is_directed(self) -> bool {
        self != RelationKind::Association
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown relation kind `{s}`"))
    }
}

/// Where a system component executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Platform {
    Server,
    Device,
    ExternalApi,
    Browser,
}

impl Platform {
    pub const ALL: [Platform; 4] = [
        Platform::Server,
        Platform::Device,
        Platform::ExternalApi,
        Platform::Browser,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Platform::Server => "server",
            Platform::Device => "device",
            Platform::ExternalApi => "external_api",
            Platform::Browser => "browser",
        }
    }
}

impl FromStr for Platform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Platform::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown platform `{s}`"))
    }
}

/// Qualitative risk level. Only the ordering is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RiskLevel {
    Low,
    #[default]
    Medium,
    High,
}

impl RiskLevel {
    pub const ALL: [RiskLevel; 3] = [RiskLevel::Low, RiskLevel::Medium, RiskLevel::High];

    pub fn as_str(self) -> &'static str {
        match self {
            RiskLevel::Low => "low",
            RiskLevel::Medium => "medium",
            RiskLevel::High => "high",
        }
    }
}

impl fmt::Display for RiskLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RiskLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RiskLevel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown severity `{s}`"))
    }
}

/// The derivation rule that produced an evaluation item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "R1_cost")]
    Cost,
    #[serde(rename = "R2_risk")]
    Risk,
    #[serde(rename = "R3_business")]
    Business,
    #[serde(rename = "R4_user")]
    User,
    #[serde(rename = "R5_quality")]
    Quality,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Cost, Rule::Risk, Rule::Business, Rule::User, Rule::Quality];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Cost => "R1_cost",
            Rule::Risk => "R2_risk",
            Rule::Business => "R3_business",
            Rule::User => "R4_user",
            Rule::Quality => "R5_quality",
        }
    }

    /// Short name used in summaries and element ids.
    pub fn short(self) -> &'static str {
        match self {
            Rule::Cost => "cost",
            Rule::Risk => "risk",
            Rule::Business => "business",
            Rule::User => "user",
            Rule::Quality => "quality",
        }
    }

    pub fn admits(self, leaf: Leaf) -> bool {
        match self {
            Rule::Cost => Leaf::costs().any(|l| l == leaf),
            Rule::Risk => Leaf::principles().any(|l| l == leaf),
            Rule::Business => Leaf::business_values().any(|l| l == leaf),
            Rule::User => Leaf::user_values().any(|l| l == leaf),
            Rule::Quality => Leaf::quality_values().any(|l| l == leaf),
        }
    }

    /// Element kind an item of this rule becomes when attached to the graph.
    pub fn element_kind(self) -> ElementKind {
        match self {
            Rule::Cost => ElementKind::CostItem,
            Rule::Risk => ElementKind::RiskItem,
            Rule::Business => ElementKind::BusinessValue,
            Rule::User => ElementKind::UserValue,
            Rule::Quality => ElementKind::QualityValue,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Attribute keys. Declaration order is the canonical attribute order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttrKey {
    Role,
    RunsOn,
    YieldsUserValue,
    YieldsQualityValue,
    YieldsBusinessValue,
    ImpliesCost,
    Hinders,
    Category,
    Severity,
    Rule,
}

impl AttrKey {
    pub const ALL: [AttrKey; 10] = [
        AttrKey::Role,
        AttrKey::RunsOn,
        AttrKey::YieldsUserValue,
        AttrKey::YieldsQualityValue,
        AttrKey::YieldsBusinessValue,
        AttrKey::ImpliesCost,
        AttrKey::Hinders,
        AttrKey::Category,
        AttrKey::Severity,
        AttrKey::Rule,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttrKey::Role => "role",
            AttrKey::RunsOn => "runs_on",
            AttrKey::YieldsUserValue => "yields_user_value",
            AttrKey::YieldsQualityValue => "yields_quality_value",
            AttrKey::YieldsBusinessValue => "yields_business_value",
            AttrKey::ImpliesCost => "implies_cost",
            AttrKey::Hinders => "hinders",
            AttrKey::Category => "category",
            AttrKey::Severity => "severity",
            AttrKey::Rule => "rule",
        }
    }

    /// Leaves admitted by keys whose value is a taxonomy leaf.
    pub fn leaf_domain(self) -> Option<Vec<Leaf>> {
        match self {
            AttrKey::YieldsUserValue => Some(Leaf::user_values().collect()),
            AttrKey::YieldsQualityValue => Some(Leaf::quality_values().collect()),
            AttrKey::YieldsBusinessValue => Some(Leaf::business_values().collect()),
            AttrKey::ImpliesCost => Some(Leaf::costs().collect()),
            AttrKey::Hinders => Some(Leaf::principles().collect()),
            AttrKey::Category => Some(Leaf::ALL.to_vec()),
            _ => None,
        }
    }
}

impl fmt::Display for AttrKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttrKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttrKey::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown attribute `{s}`"))
    }
}

/// An analyst judgement: a taxonomy leaf plus free-text justification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annotation {
    pub leaf: Leaf,
    pub description: String,
}

impl Annotation {
    pub fn new(leaf: Leaf, description: impl Into<String>) -> Self {
        Annotation {
            leaf,
            description: description.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "key", rename_all = "snake_case")]
pub enum Attr {
    Role { text: String },
    RunsOn { platform: Platform },
    YieldsUserValue(Annotation),
    YieldsQualityValue(Annotation),
    YieldsBusinessValue(Annotation),
    ImpliesCost(Annotation),
    Hinders {
        principle: Leaf,
        severity: RiskLevel,
        description: String,
    },
    Category { leaf: Leaf },
    Severity { level: RiskLevel },
    Rule { rule: Rule },
}

impl Attr {
    pub fn key(&self) -> AttrKey {
        match self {
            Attr::Role { .. } => AttrKey::Role,
            Attr::RunsOn { .. } => AttrKey::RunsOn,
            Attr::YieldsUserValue(_) => AttrKey::YieldsUserValue,
            Attr::YieldsQualityValue(_) => AttrKey::YieldsQualityValue,
            Attr::YieldsBusinessValue(_) => AttrKey::YieldsBusinessValue,
            Attr::ImpliesCost(_) => AttrKey::ImpliesCost,
            Attr::Hinders { .. } => AttrKey::Hinders,
            Attr::Category { .. } => AttrKey::Category,
            Attr::Severity { .. } => AttrKey::Severity,
            Attr::Rule { .. } => AttrKey::Rule,
        }
    }

    pub fn leaf(&self) -> Option<Leaf> {
        match self {
            Attr::YieldsUserValue(a)
            | Attr::YieldsQualityValue(a)
            | Attr::YieldsBusinessValue(a)
            | Attr::ImpliesCost(a) => Some(a.leaf),
            Attr::Hinders { principle, .. } => Some(*principle),
            Attr::Category { leaf } => Some(*leaf),
            _ => None,
        }
    }

    /// Plain-text rendering of the value, used for export properties.
    pub fn value_text(&self) -> String {
        match self {
            Attr::Role { text } => text.clone(),
            Attr::RunsOn { platform } => platform.as_str().to_string(),
            Attr::YieldsUserValue(a)
            | Attr::YieldsQualityValue(a)
            | Attr::YieldsBusinessValue(a)
            | Attr::ImpliesCost(a) => join_desc(a.leaf.name(), &a.description),
            Attr::Hinders {
                principle,
                severity,
                description,
            } => join_desc(&format!("{principle} ({severity})"), description),
            Attr::Category { leaf } => leaf.path(),
            Attr::Severity { level } => level.as_str().to_string(),
            Attr::Rule { rule } => rule.as_str().to_string(),
        }
    }
}

fn join_desc(head: &str, description: &str) -> String {
    if description.is_empty() {
        head.to_string()
    } else {
        format!("{head}: {description}")
    }
}
