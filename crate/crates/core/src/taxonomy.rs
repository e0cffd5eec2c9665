//! The fixed tree of evaluation-item categories.
//!
//! ```text
//! value ── user ──── functional, emotional, self_expressive, social
//!       ├─ quality ─ must_be, attractive
//!       └─ business  revenue_increase, cost_reduction, new_revenue
//! risk ──────────── transparency, justice_fairness, non_maleficence,
//!                   responsibility, privacy, beneficence, freedom_autonomy
//! cost ──────────── human_resources, information_resources, it_resources
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Value,
    Risk,
    Cost,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Value => "value",
            Branch::Risk => "risk",
            Branch::Cost => "cost",
        }
    }
}

/// Sub-branches of the value branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueGroup {
    User,
    Quality,
    Business,
}

impl ValueGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueGroup::User => "user",
            ValueGroup::Quality => "quality",
            ValueGroup::Business => "business",
        }
    }
}

/// A leaf of the taxonomy. Declaration order is the fixed row order used in
/// reports: value branch, risk branch, cost branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leaf {
    Functional,
    Emotional,
    SelfExpressive,
    Social,
    MustBe,
    Attractive,
    RevenueIncrease,
    CostReduction,
    NewRevenue,
    Transparency,
    JusticeFairness,
    NonMaleficence,
    Responsibility,
    Privacy,
    Beneficence,
    FreedomAutonomy,
    HumanResources,
    InformationResources,
    ItResources,
}

impl Leaf {
    pub const ALL: [Leaf; 19] = [
        Leaf::Functional,
        Leaf::Emotional,
        Leaf::SelfExpressive,
        Leaf::Social,
        Leaf::MustBe,
        Leaf::Attractive,
        Leaf::RevenueIncrease,
        Leaf::CostReduction,
        Leaf::NewRevenue,
        Leaf::Transparency,
        Leaf::JusticeFairness,
        Leaf::NonMaleficence,
        Leaf::Responsibility,
        Leaf::Privacy,
        Leaf::Beneficence,
        Leaf::FreedomAutonomy,
        Leaf::HumanResources,
        Leaf::InformationResources,
        Leaf::ItResources,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Leaf::Functional => "functional",
            Leaf::Emotional => "emotional",
            Leaf::SelfExpressive => "self_expressive",
            Leaf::Social => "social",
            Leaf::MustBe => "must_be",
            Leaf::Attractive => "attractive",
            Leaf::RevenueIncrease => "revenue_increase",
            Leaf::CostReduction => "cost_reduction",
            Leaf::NewRevenue => "new_revenue",
            Leaf::Transparency => "transparency",
            Leaf::JusticeFairness => "justice_fairness",
            Leaf::NonMaleficence => "non_maleficence",
            Leaf::Responsibility => "responsibility",
            Leaf::Privacy => "privacy",
            Leaf::Beneficence => "beneficence",
            Leaf::FreedomAutonomy => "freedom_autonomy",
            Leaf::HumanResources => "human_resources",
            Leaf::InformationResources => "information_resources",
            Leaf::ItResources => "it_resources",
        }
    }

    /// Human-readable heading.
    pub fn title(self) -> &'static str {
        match self {
            Leaf::Functional => "Functional value",
            Leaf::Emotional => "Emotional value",
            Leaf::SelfExpressive => "Self-expressive value",
            Leaf::Social => "Social value",
            Leaf::MustBe => "Must-be value",
            Leaf::Attractive => "Attractive value",
            Leaf::RevenueIncrease => "Revenue increase",
            Leaf::CostReduction => "Cost reduction",
            Leaf::NewRevenue => "New revenue",
            Leaf::Transparency => "Transparency",
            Leaf::JusticeFairness => "Justice and fairness",
            Leaf::NonMaleficence => "Non-maleficence",
            Leaf::Responsibility => "Responsibility",
            Leaf::Privacy => "Privacy",
            Leaf::Beneficence => "Beneficence",
            Leaf::FreedomAutonomy => "Freedom and autonomy",
            Leaf::HumanResources => "Cost for human resources",
            Leaf::InformationResources => "Cost for information resources",
            Leaf::ItResources => "Cost for IT resources",
        }
    }

    pub fn branch(self) -> Branch {
        use Leaf::*;
        match self {
            Functional | Emotional | SelfExpressive | Social | MustBe | Attractive
            | RevenueIncrease | CostReduction | NewRevenue => Branch::Value,
            Transparency | JusticeFairness | NonMaleficence | Responsibility | Privacy
            | Beneficence | FreedomAutonomy => Branch::Risk,
            HumanResources | InformationResources | ItResources => Branch::Cost,
        }
    }

    pub fn value_group(self) -> Option<ValueGroup> {
        use Leaf::*;
        match self {
            Functional | Emotional | SelfExpressive | Social => Some(ValueGroup::User),
            MustBe | Attractive => Some(ValueGroup::Quality),
            RevenueIncrease | CostReduction | NewRevenue => Some(ValueGroup::Business),
            _ => None,
        }
    }

    /// Slash-separated path from the root, e.g. `value/user/functional`.
    pub fn path(self) -> String {
        match self.value_group() {
            Some(group) => format!("value/{}/{}", group.as_str(), self.name()),
            None => format!("{}/{}", self.branch().as_str(), self.name()),
        }
    }

    pub fn user_values() -> impl Iterator<Item = Leaf> {
        Self::in_group(ValueGroup::User)
    }

    pub fn quality_values() -> impl Iterator<Item = Leaf> {
        Self::in_group(ValueGroup::Quality)
    }

    pub fn business_values() -> impl Iterator<Item = Leaf> {
        Self::in_group(ValueGroup::Business)
    }

    pub fn principles() -> impl Iterator<Item = Leaf> {
        Self::ALL.into_iter().filter(|l| l.branch() == Branch::Risk)
    }

    pub fn costs() -> impl Iterator<Item = Leaf> {
        Self::ALL.into_iter().filter(|l| l.branch() == Branch::Cost)
    }

    fn in_group(group: ValueGroup) -> impl Iterator<Item = Leaf> {
        Self::ALL
            .into_iter()
            .filter(move |l| l.value_group() == Some(group))
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown taxonomy leaf `{0}`")]
pub struct UnknownLeaf(pub String);

impl FromStr for Leaf {
    type Err = UnknownLeaf;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Leaf::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLeaf(s.to_string()))
    }
}

impl Serialize for Leaf {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Leaf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Closest candidate within edit distance 2, ties broken by candidate order.
pub fn suggest<'a>(word: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(word, c), c))
        .filter(|(d, _)| *d <= 2)
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_counts() {
        assert_eq!(Leaf::ALL.len(), 19);
        assert_eq!(Leaf::user_values().count(), 4);
        assert_eq!(Leaf::quality_values().count(), 2);
        assert_eq!(Leaf::business_values().count(), 3);
        assert_eq!(Leaf::principles().count(), 7);
        assert_eq!(Leaf::costs().count(), 3);
        let values = Leaf::ALL
            .iter()
            .filter(|l| l.branch() == Branch::Value)
            .count();
        assert_eq!(values, 9);
    }

    #[test]
    fn row_order_is_value_risk_cost() {
        let branches: Vec<Branch> = Leaf::ALL.iter().map(|l| l.branch()).collect();
        let mut sorted = branches.clone();
        sorted.sort();
        assert_eq!(branches, sorted);
        let mut all = Leaf::ALL.to_vec();
        all.sort();
        assert_eq!(all, Leaf::ALL.to_vec());
    }

    #[test]
    fn names_round_trip() {
        for leaf in Leaf::ALL {
            assert_eq!(leaf.name().parse::<Leaf>().unwrap(), leaf);
        }
        assert!("essential".parse::<Leaf>().is_err());
    }

    #[test]
    fn paths() {
        assert_eq!(Leaf::Functional.path(), "value/user/functional");
        assert_eq!(Leaf::MustBe.path(), "value/quality/must_be");
        assert_eq!(Leaf::Privacy.path(), "risk/privacy");
        assert_eq!(Leaf::ItResources.path(), "cost/it_resources");
    }

    #[test]
    fn suggestion_within_two_edits() {
        assert_eq!(
            suggest("funktional", Leaf::ALL.map(Leaf::name)),
            Some("functional")
        );
        assert_eq!(suggest("privasy", Leaf::ALL.map(Leaf::name)), Some("privacy"));
        assert_eq!(suggest("zzzzzz", Leaf::ALL.map(Leaf::name)), None);
    }
}
