//! Structural validation of alignment models.
//!
//! | rule | code | severity |
//! |------|------|----------|
//! | V1 every component realizes a function | E010 | error |
//! | V2 every event is associated with a component, function or data | E011 | error |
//! | V3 every event implies a cost or hinders a principle | W101 | warning |
//! | V4 every operator activity yields business value | W102 | warning |
//! | V5 every user activity is served by a dialogue service | W103 | warning |
//! | V6 every data/model is accessed by a component | W104 | warning |
//! | V7 attributes follow the per-kind allowlist | E002, E005, E007 | error |
//! | V8 relations follow the permitted-connections table | E003, E004 (W105 fallback) | error |

use crate::diagnostic::{codes, Diagnostic};
use crate::model::{
    check_connection, check_element, forbidden_relation, AlignmentModel, AttrKey, Connection,
    ElementKind, RelationKind,
};

/// Every finding for `model`; an empty list means the model is well formed.
pub fn validate(model: &AlignmentModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    components_realize_functions(model, &mut out);
    events_are_anchored(model, &mut out);
    events_have_consequences(model, &mut out);
    operator_activities_yield_value(model, &mut out);
    user_activities_are_served(model, &mut out);
    data_is_accessed(model, &mut out);
    attrs_follow_allowlist(model, &mut out);
    relations_are_typed(model, &mut out);
    actors_are_unique(model, &mut out);
    out
}

fn has_neighbor_of_kind(
    model: &AlignmentModel,
    relation: RelationKind,
    id: &str,
    outgoing: bool,
    kinds: &[ElementKind],
) -> bool {
    model.relations().iter().any(|r| {
        if r.kind != relation {
            return false;
        }
        let other = if !relation.is_directed() {
            r.other(id)
        } else if outgoing {
            (r.source == id).then_some(r.target.as_str())
        } else {
            (r.target == id).then_some(r.source.as_str())
        };
        other
            .and_then(|o| model.element(o))
            .is_some_and(|e| kinds.contains(&e.kind))
    })
}

fn components_realize_functions(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for c in model.elements_of_kind(ElementKind::SystemComponent) {
        if !has_neighbor_of_kind(
            model,
            RelationKind::Realization,
            &c.id,
            true,
            &[ElementKind::ComponentFunction],
        ) {
            out.push(
                Diagnostic::error(
                    codes::COMPONENT_WITHOUT_FUNCTION,
                    format!("component `{}` realizes no function", c.id),
                )
                .with_subject(&c.id),
            );
        }
    }
}

fn events_are_anchored(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    let anchors = [
        ElementKind::SystemComponent,
        ElementKind::ComponentFunction,
        ElementKind::DataModel,
    ];
    for e in model.elements_of_kind(ElementKind::ObservedEvent) {
        if !has_neighbor_of_kind(model, RelationKind::Association, &e.id, true, &anchors) {
            out.push(
                Diagnostic::error(
                    codes::EVENT_NOT_ANCHORED,
                    format!(
                        "event `{}` is not about any component, function or data/model",
                        e.id
                    ),
                )
                .with_subject(&e.id),
            );
        }
    }
}

fn events_have_consequences(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for e in model.elements_of_kind(ElementKind::ObservedEvent) {
        if !e.has_attr(AttrKey::ImpliesCost) && !e.has_attr(AttrKey::Hinders) {
            out.push(
                Diagnostic::warning(
                    codes::DANGLING_EVENT,
                    format!("dangling event `{}`: neither implies_cost nor hinders", e.id),
                )
                .with_subject(&e.id),
            );
        }
    }
}

fn operator_activities_yield_value(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for a in model.elements_of_kind(ElementKind::OperatorActivity) {
        if !a.has_attr(AttrKey::YieldsBusinessValue) {
            out.push(
                Diagnostic::warning(
                    codes::ACTIVITY_WITHOUT_BUSINESS_VALUE,
                    format!("operator activity `{}` yields no business value", a.id),
                )
                .with_subject(&a.id),
            );
        }
    }
}

fn user_activities_are_served(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for a in model.elements_of_kind(ElementKind::UserActivity) {
        if !has_neighbor_of_kind(
            model,
            RelationKind::Serving,
            &a.id,
            false,
            &[ElementKind::DialogueService],
        ) {
            out.push(
                Diagnostic::warning(
                    codes::UNSERVED_USER_ACTIVITY,
                    format!("user activity `{}` is not served by any dialogue service", a.id),
                )
                .with_subject(&a.id),
            );
        }
    }
}

fn data_is_accessed(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for d in model.elements_of_kind(ElementKind::DataModel) {
        if !has_neighbor_of_kind(
            model,
            RelationKind::Access,
            &d.id,
            false,
            &[ElementKind::SystemComponent],
        ) {
            out.push(
                Diagnostic::warning(
                    codes::UNACCESSED_DATA,
                    format!("data/model `{}` is not accessed by any component", d.id),
                )
                .with_subject(&d.id),
            );
        }
    }
}

fn attrs_follow_allowlist(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for e in model.elements() {
        if let Err(d) = check_element(e) {
            out.push(d);
        }
    }
}

fn relations_are_typed(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for r in model.relations() {
        let (Some(source), Some(target)) = (model.element(&r.source), model.element(&r.target))
        else {
            let missing = if model.contains(&r.source) { &r.target } else { &r.source };
            out.push(
                Diagnostic::error(
                    codes::UNKNOWN_REFERENCE,
                    format!("relation `{}` refers to unknown element `{missing}`", r.id),
                )
                .with_subject(&r.id),
            );
            continue;
        };
        match check_connection(source.kind, r.kind, target.kind) {
            Connection::Permitted => {}
            Connection::Fallback => out.push(
                Diagnostic::warning(
                    codes::FALLBACK_ASSOCIATION,
                    format!(
                        "general association between {} `{}` and {} `{}`",
                        source.kind, source.id, target.kind, target.id
                    ),
                )
                .with_subject(&source.id),
            ),
            Connection::Forbidden => out.push(forbidden_relation(
                &source.id,
                source.kind,
                r.kind,
                &target.id,
                target.kind,
            )),
        }
    }
}

fn actors_are_unique(model: &AlignmentModel, out: &mut Vec<Diagnostic>) {
    for kind in [ElementKind::User, ElementKind::Operator] {
        for extra in model.elements_of_kind(kind).iter().skip(1) {
            out.push(
                Diagnostic::error(
                    codes::SECOND_ACTOR,
                    format!("second {kind} element `{}`", extra.id),
                )
                .with_subject(&extra.id),
            );
        }
    }
}
