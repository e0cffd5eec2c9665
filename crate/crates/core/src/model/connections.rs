//! Permitted connections between element kinds.

use super::kinds::{ElementKind, RelationKind};
use ElementKind::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connection {
    Permitted,
    /// Accepted as a general relationship with warning W105.
    Fallback,
    Forbidden,
}

const ASSIGNMENT: &[(ElementKind, ElementKind)] =
    &[(User, UserActivity), (Operator, OperatorActivity)];

const SERVING: &[(ElementKind, ElementKind)] = &[
    (DialogueService, UserActivity),
    (DialogueService, OperatorActivity),
    (SystemComponent, DialogueService),
];

const REALIZATION: &[(ElementKind, ElementKind)] = &[
    (ComponentFunction, DialogueService),
    (SystemComponent, ComponentFunction),
];

const ACCESS: &[(ElementKind, ElementKind)] =
    &[(SystemComponent, DataModel), (ComponentFunction, DataModel)];

const INFLUENCE: &[(ElementKind, ElementKind)] = &[
    (UserValue, BusinessValue),
    (QualityValue, BusinessValue),
    (ObservedEvent, Principle),
    (ObservedEvent, CostItem),
    (UserActivity, OperatorActivity),
];

/// Unordered pairs; checked in both orientations.
const ASSOCIATION: &[(ElementKind, ElementKind)] = &[
    (ObservedEvent, SystemComponent),
    (ObservedEvent, ComponentFunction),
    (ObservedEvent, DataModel),
    (CostItem, SystemComponent),
    (RiskItem, ObservedEvent),
    (RiskItem, Principle),
    (BusinessValue, OperatorActivity),
    (UserValue, UserActivity),
    (QualityValue, UserActivity),
];

pub fn permitted_pairs(kind: RelationKind) -> &'static [(ElementKind, ElementKind)] {
    match kind {
        RelationKind::Assignment => ASSIGNMENT,
        RelationKind::Serving => SERVING,
        RelationKind::Realization => REALIZATION,
        RelationKind::Access => ACCESS,
        RelationKind::Influence => INFLUENCE,
        RelationKind::Association => ASSOCIATION,
        RelationKind::Aggregation => &[],
    }
}

pub fn check(source: ElementKind, kind: RelationKind, target: ElementKind) -> Connection {
    let pairs = permitted_pairs(kind);
    let listed = pairs.contains(&(source, target))
        || (!kind.is_directed() && pairs.contains(&(target, source)));
    match (listed, kind) {
        (true, _) => Connection::Permitted,
        (false, RelationKind::Association) => Connection::Fallback,
        (false, _) => Connection::Forbidden,
    }
}
