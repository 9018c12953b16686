//! Elicitation planning over the seven English interrogatives.
//!
//! The crate models who/what/which/where/how/why/when as a precedence graph
//! and a stakeholder × interrogative pattern matrix, and builds on them:
//!
//! - [`ordering`]: order validation, unblocked sets, canonical ordering.
//! - [`linter`]: question classification and questionnaire linting.
//! - [`session`]: live interview state with question scheduling.
//! - [`storage`]: JSON documents, session event logs, questionnaire exports.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod error;
pub mod graph;
pub mod interrogative;
pub mod linter;
pub mod matrix;
pub mod ordering;
pub mod session;
pub mod storage;

pub use error::{ModelError, SessionError, StorageError, Unclassifiable};
pub use graph::{default_graph, DependencyRule, PrecedenceGraph};
pub use interrogative::{Category, Interrogative, InterrogativeSet};
pub use linter::{
    classify, lint_document, parse_questionnaire, Classification, LintFinding, QuestionnaireDoc,
    RuleCode,
};
pub use matrix::{
    default_matrix, validate_matrix, Concern, PatternMatrix, StakeholderGroup, ValidationFinding,
};
pub use ordering::{
    canonical_order, enumerate_valid_orders, is_valid_order, unblocked, OrderViolation,
};
pub use session::{
    Answer, CoverageReport, LinkMatrix, Mode, QuestionInstance, ScopeEntry, Session, Status,
    Verdict,
};
pub use storage::{EventLog, ExportFormat, SessionEvent, SessionJournal};

/// The default matrix document shipped with the crate.
pub const DEFAULT_MATRIX_DOCUMENT: &str = include_str!("../data/default.matrix.w6h.json");
/// The default precedence graph document shipped with the crate.
pub const DEFAULT_GRAPH_DOCUMENT: &str = include_str!("../data/default.graph.w6h.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}
