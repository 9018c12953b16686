use thiserror::Error;

use crate::interrogative::Interrogative;

/// Errors from building or editing graphs and matrices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown interrogative `{0}`")]
    UnknownInterrogative(String),
    #[error("duplicate concern id `{0}`")]
    DuplicateId(String),
    #[error("unknown stakeholder group `{0}`")]
    UnknownGroup(String),
    #[error("invalid concern `{id}`: {reason}")]
    InvalidConcern { id: String, reason: String },
    #[error("invalid rule for `{target}`: {reason}")]
    InvalidRule {
        target: Interrogative,
        reason: String,
    },
    #[error("precedence graph admits no valid ordering")]
    Unsatisfiable,
}

impl ModelError {
    /// The variant name, for machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::UnknownInterrogative(_) => "UnknownInterrogative",
            ModelError::DuplicateId(_) => "DuplicateId",
            ModelError::UnknownGroup(_) => "UnknownGroup",
            ModelError::InvalidConcern { .. } => "InvalidConcern",
            ModelError::InvalidRule { .. } => "InvalidRule",
            ModelError::Unsatisfiable => "Unsatisfiable",
        }
    }
}

/// Raised when a question contains no interrogative word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no interrogative word in `{0}`")]
pub struct Unclassifiable(pub String);

/// Errors from session operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown stakeholder group `{0}`")]
    UnknownGroup(String),
    #[error("concern `{concern}` draws candidates from `{source_concern}`, which is not in scope for group `{group}`")]
    DanglingCandidateRef {
        concern: String,
        source_concern: String,
        group: String,
    },
    #[error("concern `{0}` misuses the gatekeeper or candidate flags")]
    InvalidConcern(String),
    #[error("unknown question instance `{0}`")]
    UnknownInstance(String),
    #[error("question instance `{0}` is not pending")]
    NotPending(String),
    #[error("question instance `{0}` is blocked by unanswered prerequisites")]
    Blocked(String),
    #[error("items {items:?} are not all among the candidates {candidates:?}")]
    SubsetViolation {
        items: Vec<String>,
        candidates: Vec<String>,
    },
    #[error("verdict given on `{0}`, which is not a why question")]
    VerdictOnNonWhy(String),
    #[error("question instance `{0}` is not a why question")]
    NotWhy(String),
    #[error("question instance `{0}` has not been answered")]
    NotAnswered(String),
    #[error("answer to `{0}` carries no verdict")]
    MissingVerdict(String),
    #[error("verdict does not match the one recorded on `{0}`")]
    VerdictMismatch(String),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownGroup(_) => "UnknownGroup",
            SessionError::DanglingCandidateRef { .. } => "DanglingCandidateRef",
            SessionError::InvalidConcern(_) => "InvalidConcern",
            SessionError::UnknownInstance(_) => "UnknownInstance",
            SessionError::NotPending(_) => "NotPending",
            SessionError::Blocked(_) => "Blocked",
            SessionError::SubsetViolation { .. } => "SubsetViolation",
            SessionError::VerdictOnNonWhy(_) => "VerdictOnNonWhy",
            SessionError::NotWhy(_) => "NotWhy",
            SessionError::NotAnswered(_) => "NotAnswered",
            SessionError::MissingVerdict(_) => "MissingVerdict",
            SessionError::VerdictMismatch(_) => "VerdictMismatch",
        }
    }
}

/// Errors from reading and writing documents and event logs.
#[derive(Debug, Error)]
pub enum StorageError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version `{0}`")]
    UnsupportedVersion(String),
    #[error("event sequence gap: expected {expected}, found {found}")]
    SeqGap { expected: u64, found: u64 },
    #[error("corrupt event at seq {seq}: {reason}")]
    CorruptEvent { seq: u64, reason: String },
    #[error("event log has no created event")]
    MissingCreated,
    #[error("unknown stakeholder group `{0}`")]
    UnknownGroup(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl StorageError {
    pub fn code(&self) -> &'static str {
        match self {
            StorageError::Parse { .. } => "ParseError",
            StorageError::UnsupportedVersion(_) => "UnsupportedVersion",
            StorageError::SeqGap { .. } => "SeqGap",
            StorageError::CorruptEvent { .. } => "CorruptEvent",
            StorageError::MissingCreated => "MissingCreated",
            StorageError::UnknownGroup(_) => "UnknownGroup",
            StorageError::Io(_) => "Io",
        }
    }

    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        StorageError::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
