//! Business-dialogue-system alignment models.
//!
//! A model is written in the `.dsa` language ([`dsl`]), checked by
//! [`validate`], mined for evaluation items by [`derive`] and serialized by
//! [`export`] and [`report`].

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod derive;
pub mod diagnostic;
pub mod dsl;
pub mod export;
pub mod model;
pub mod report;
pub mod taxonomy;
pub mod validate;

pub use derive::{attach, derive_all, EvaluationItem, EvaluationItemSet};
pub use diagnostic::{Diagnostic, Severity, SourceSpan};
pub use dsl::{format, load_file, parse, ParseResult};
pub use export::{export, to_dot, to_open_exchange, ExportFormat, ExportOptions};
pub use model::{AlignmentModel, Element, ElementKind, FrozenModel, Relation, RelationKind};
pub use report::{item_table, matrix, Matrix, ReportFormat};
pub use taxonomy::Leaf;
pub use validate::validate;
