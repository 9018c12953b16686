//! Concerns arranged by stakeholder group and interrogative.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::interrogative::Interrogative;
use crate::Severity;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StakeholderGroup {
    pub id: String,
    pub display_name: String,
}

impl StakeholderGroup {
    pub fn new(id: impl Into<String>, display_name: impl Into<String>) -> Self {
        StakeholderGroup {
            id: id.into(),
            display_name: display_name.into(),
        }
    }
}

/// A topic in one or more matrix cells, answered by asking its interrogative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Concern {
    pub id: String,
    pub text: String,
    pub interrogative: Interrogative,
    pub groups: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub tags: BTreeSet<String>,
    /// Marks the early why question that decides whether a requirement is
    /// worth elaborating.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub gatekeeper: bool,
    /// A who/what concern whose answer lists the choices for this which.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates_from: Option<String>,
}

impl Concern {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        interrogative: Interrogative,
        groups: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Concern {
            id: id.into(),
            text: text.into(),
            interrogative,
            groups: groups.into_iter().map(Into::into).collect(),
            question: None,
            tags: BTreeSet::new(),
            gatekeeper: false,
            candidates_from: None,
        }
    }

    pub fn with_question(mut self, question: impl Into<String>) -> Self {
        self.question = Some(question.into());
        self
    }

    pub fn with_tags(mut self, tags: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.tags.extend(tags.into_iter().map(Into::into));
        self
    }

    pub fn gatekeeper(mut self) -> Self {
        self.gatekeeper = true;
        self
    }

    pub fn with_candidates_from(mut self, concern_id: impl Into<String>) -> Self {
        self.candidates_from = Some(concern_id.into());
        self
    }

    /// Text shown when the concern is asked: the explicit question if one
    /// was given, otherwise a labeled prompt.
    pub fn prompt(&self) -> String {
        match &self.question {
            Some(q) => q.clone(),
            None => format!("{}? — {}", self.interrogative.title(), self.text),
        }
    }

    /// Checks the invariants that do not depend on the rest of the matrix.
    pub fn check_fields(&self) -> Result<(), ModelError> {
        let invalid = |reason: &str| ModelError::InvalidConcern {
            id: self.id.clone(),
            reason: reason.to_string(),
        };
        if !is_identifier(&self.id) {
            return Err(invalid("id must be lowercase kebab-case"));
        }
        if self.text.trim().is_empty() {
            return Err(invalid("text is empty"));
        }
        if self.groups.is_empty() {
            return Err(invalid("no stakeholder groups"));
        }
        if self.gatekeeper && self.interrogative != Interrogative::Why {
            return Err(invalid("only why concerns can be gatekeepers"));
        }
        if self.candidates_from.is_some() && self.interrogative != Interrogative::Which {
            return Err(invalid("only which concerns draw candidates"));
        }
        Ok(())
    }
}

/// Lowercase kebab-case: `[a-z0-9]+(-[a-z0-9]+)*`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.split('-').all(|part| {
            !part.is_empty()
                && part
                    .bytes()
                    .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatrix {
    pub name: String,
    pub version: String,
    pub groups: Vec<StakeholderGroup>,
    pub concerns: Vec<Concern>,
}

impl PatternMatrix {
    pub fn new(
        name: impl Into<String>,
        version: impl Into<String>,
        groups: Vec<StakeholderGroup>,
    ) -> Self {
        PatternMatrix {
            name: name.into(),
            version: version.into(),
            groups,
            concerns: Vec::new(),
        }
    }

    pub fn group(&self, id: &str) -> Option<&StakeholderGroup> {
        self.groups.iter().find(|g| g.id == id)
    }

    /// Finds a group by id or display name, ignoring case.
    pub fn resolve_group(&self, label: &str) -> Option<&StakeholderGroup> {
        let label = label.trim();
        self.groups.iter().find(|g| {
            g.id.eq_ignore_ascii_case(label) || g.display_name.eq_ignore_ascii_case(label)
        })
    }

    pub fn concern(&self, id: &str) -> Option<&Concern> {
        self.concerns.iter().find(|c| c.id == id)
    }

    /// Concerns of `group` asked with `interrogative`, in matrix order.
    pub fn cell(&self, group: &str, interrogative: Interrogative) -> Vec<&Concern> {
        self.concerns
            .iter()
            .filter(|c| c.interrogative == interrogative && c.groups.contains(group))
            .collect()
    }

    /// Inserts a concern into every cell it belongs to.
    pub fn add_concern(&self, concern: Concern) -> Result<PatternMatrix, ModelError> {
        if self.concern(&concern.id).is_some() {
            return Err(ModelError::DuplicateId(concern.id));
        }
        concern.check_fields()?;
        if let Some(g) = concern.groups.iter().find(|g| self.group(g).is_none()) {
            return Err(ModelError::UnknownGroup(g.clone()));
        }
        if let Some(source) = &concern.candidates_from {
            match self.concern(source) {
                Some(c) if matches!(c.interrogative, Interrogative::Who | Interrogative::What) => {}
                Some(_) => {
                    return Err(ModelError::InvalidConcern {
                        id: concern.id,
                        reason: format!("candidate source `{source}` is not a who/what concern"),
                    })
                }
                None => {
                    return Err(ModelError::InvalidConcern {
                        id: concern.id,
                        reason: format!("candidate source `{source}` does not exist"),
                    })
                }
            }
        }
        let mut next = self.clone();
        next.concerns.push(concern);
        Ok(next)
    }
}

/// The built-in four-group matrix.
pub fn default_matrix() -> PatternMatrix {
    crate::storage::load_matrix(crate::DEFAULT_MATRIX_DOCUMENT)
        .expect("embedded default matrix document is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationKind {
    DuplicateConcernId,
    DuplicateGroupId,
    EmptyGroups,
    DanglingGroup,
    DanglingCandidateRef,
    BadCandidateSource,
    GatekeeperOnNonWhy,
    CandidatesOnNonWhich,
    EmptyCell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFinding {
    pub kind: ValidationKind,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for ValidationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.severity, self.message)
    }
}

/// Reports structural problems in a matrix. Empty cells are warnings,
/// everything else is an error.
pub fn validate_matrix(matrix: &PatternMatrix) -> Vec<ValidationFinding> {
    let mut findings = Vec::new();
    let mut push = |kind, severity, message: String| {
        findings.push(ValidationFinding {
            kind,
            severity,
            message,
        })
    };

    let mut group_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for g in &matrix.groups {
        *group_counts.entry(&g.id).or_default() += 1;
    }
    for (id, n) in &group_counts {
        if *n > 1 {
            push(
                ValidationKind::DuplicateGroupId,
                Severity::Error,
                format!("group id `{id}` declared {n} times"),
            );
        }
    }

    let mut concern_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &matrix.concerns {
        *concern_counts.entry(&c.id).or_default() += 1;
    }
    for (id, n) in &concern_counts {
        if *n > 1 {
            push(
                ValidationKind::DuplicateConcernId,
                Severity::Error,
                format!("concern id `{id}` used {n} times"),
            );
        }
    }

    for c in &matrix.concerns {
        if c.groups.is_empty() {
            push(
                ValidationKind::EmptyGroups,
                Severity::Error,
                format!("concern `{}` belongs to no group", c.id),
            );
        }
        for g in &c.groups {
            if !group_counts.contains_key(g.as_str()) {
                push(
                    ValidationKind::DanglingGroup,
                    Severity::Error,
                    format!("concern `{}` references undeclared group `{g}`", c.id),
                );
            }
        }
        if c.gatekeeper && c.interrogative != Interrogative::Why {
            push(
                ValidationKind::GatekeeperOnNonWhy,
                Severity::Error,
                format!(
                    "concern `{}` is a gatekeeper but asks {}",
                    c.id, c.interrogative
                ),
            );
        }
        if let Some(source) = &c.candidates_from {
            if c.interrogative != Interrogative::Which {
                push(
                    ValidationKind::CandidatesOnNonWhich,
                    Severity::Error,
                    format!(
                        "concern `{}` draws candidates but asks {}",
                        c.id, c.interrogative
                    ),
                );
            }
            match matrix.concern(source) {
                None => push(
                    ValidationKind::DanglingCandidateRef,
                    Severity::Error,
                    format!(
                        "concern `{}` draws candidates from unknown concern `{source}`",
                        c.id
                    ),
                ),
                Some(s) if !matches!(s.interrogative, Interrogative::Who | Interrogative::What) => {
                    push(
                        ValidationKind::BadCandidateSource,
                        Severity::Error,
                        format!(
                            "concern `{}` draws candidates from `{source}`, a {} concern",
                            c.id, s.interrogative
                        ),
                    )
                }
                Some(_) => {}
            }
        }
    }

    for g in &matrix.groups {
        for i in Interrogative::ALL {
            if matrix.cell(&g.id, i).is_empty() {
                push(
                    ValidationKind::EmptyCell,
                    Severity::Warning,
                    format!("cell ({}, {i}) is empty", g.id),
                );
            }
        }
    }

    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use Interrogative::*;

    fn texts(m: &PatternMatrix, g: &str, i: Interrogative) -> Vec<String> {
        m.cell(g, i).into_iter().map(|c| c.text.clone()).collect()
    }

    #[test]
    fn default_matrix_cells() {
        let m = default_matrix();
        assert_eq!(m.groups.len(), 4);
        assert!(texts(&m, "users", What).contains(&"Maximum Tolerable Down time (MTD)".to_string()));
        assert!(texts(&m, "developers", Which).contains(&"CRUD matrix".to_string()));
        assert!(texts(&m, "legislators", Why)
            .contains(&"Sarbanes Oxley act (SOX) requirements".to_string()));
        assert!(texts(&m, "decision-makers", Why).contains(&"Strategic goals".to_string()));
        for g in &m.groups {
            for i in Interrogative::ALL {
                assert!(!m.cell(&g.id, i).is_empty(), "({}, {i}) empty", g.id);
            }
        }
    }

    #[test]
    fn default_matrix_validates_clean() {
        assert_eq!(validate_matrix(&default_matrix()), vec![]);
    }

    #[test]
    fn duplicate_id_is_one_finding() {
        let mut m = default_matrix();
        let mut c = m.concerns[0].clone();
        c.id = "c1".into();
        m.concerns.push(c.clone());
        m.concerns.push(c);
        let f = validate_matrix(&m);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, ValidationKind::DuplicateConcernId);
    }

    #[test]
    fn dangling_group_is_one_finding() {
        let mut m = default_matrix();
        m.concerns
            .push(Concern::new("c1", "Operators", Who, ["ops"]));
        let f = validate_matrix(&m);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, ValidationKind::DanglingGroup);
    }

    #[test]
    fn flag_misuse_findings() {
        let mut m = PatternMatrix::new("t", "1", vec![StakeholderGroup::new("u", "U")]);
        let mut gk = Concern::new("a", "x", What, ["u"]);
        gk.gatekeeper = true;
        let mut cf = Concern::new("b", "y", How, ["u"]);
        cf.candidates_from = Some("a".into());
        let mut dangling = Concern::new("c", "z", Which, ["u"]);
        dangling.candidates_from = Some("nope".into());
        let mut bad_source = Concern::new("d", "w", Which, ["u"]);
        bad_source.candidates_from = Some("b".into());
        m.concerns = vec![gk, cf, dangling, bad_source];
        let kinds: Vec<_> = validate_matrix(&m)
            .into_iter()
            .filter(|f| f.severity == Severity::Error)
            .map(|f| f.kind)
            .collect();
        assert_eq!(
            kinds,
            vec![
                ValidationKind::GatekeeperOnNonWhy,
                ValidationKind::CandidatesOnNonWhich,
                ValidationKind::DanglingCandidateRef,
                ValidationKind::BadCandidateSource,
            ]
        );
    }

    #[test]
    fn empty_cells_are_warnings() {
        let m = PatternMatrix::new("t", "1", vec![StakeholderGroup::new("u", "U")]);
        let f = validate_matrix(&m);
        assert_eq!(f.len(), 7);
        assert!(f
            .iter()
            .all(|x| x.severity == Severity::Warning && x.kind == ValidationKind::EmptyCell));
    }

    #[test]
    fn add_concern_to_two_groups() {
        let m = default_matrix();
        let c = Concern::new(
            "business-continuity-planning",
            "business continuity planning",
            What,
            ["users", "legislators"],
        );
        let before_u = m.cell("users", What).len();
        let before_l = m.cell("legislators", What).len();
        let next = m.add_concern(c).unwrap();
        assert_eq!(next.cell("users", What).len(), before_u + 1);
        assert_eq!(next.cell("legislators", What).len(), before_l + 1);
        assert_eq!(
            next.cell("developers", What).len(),
            m.cell("developers", What).len()
        );
        assert!(texts(&next, "users", What).contains(&"business continuity planning".to_string()));
        assert!(
            texts(&next, "legislators", What).contains(&"business continuity planning".to_string())
        );
    }

    #[test]
    fn add_concern_errors() {
        let m = default_matrix();
        let existing = m.concerns[0].id.clone();
        assert_eq!(
            m.add_concern(Concern::new(existing.clone(), "x", Who, ["users"])),
            Err(ModelError::DuplicateId(existing))
        );
        assert_eq!(
            m.add_concern(Concern::new("fresh", "x", Who, ["ops"])),
            Err(ModelError::UnknownGroup("ops".into()))
        );
        assert!(matches!(
            m.add_concern(Concern::new("fresh", "x", Who, Vec::<String>::new())),
            Err(ModelError::InvalidConcern { .. })
        ));
        assert!(matches!(
            m.add_concern(Concern::new("Not Kebab", "x", Who, ["users"])),
            Err(ModelError::InvalidConcern { .. })
        ));
        assert!(matches!(
            m.add_concern(
                Concern::new("fresh", "x", Which, ["users"])
                    .with_candidates_from("users-why-strategic")
            ),
            Err(ModelError::InvalidConcern { .. })
        ));
    }

    #[test]
    fn prompts() {
        let c = Concern::new("a", "Data owners", What, ["users"]);
        assert_eq!(c.prompt(), "What? — Data owners");
        assert_eq!(
            c.with_question("Who owns the data?").prompt(),
            "Who owns the data?"
        );
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("decision-makers"));
        assert!(is_identifier("c1"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("-a"));
        assert!(!is_identifier("a--b"));
        assert!(!is_identifier("Users"));
    }
}
