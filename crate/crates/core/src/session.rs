//! Live elicitation sessions.
//!
//! A session instantiates one question per in-scope concern and group, and
//! releases questions as their interrogative prerequisites are answered.
//! An interrogative counts as satisfied once at least one of its questions
//! is answered and none remain pending; skipped and gated-out questions do
//! not block.
//!
//! In triage mode a gatekeeper *why* only needs one answered *who* and one
//! answered *what*. While any gatekeeper is still pending, only *who*,
//! *what* and gatekeeper questions are released, so the requirement is
//! judged before detailed elicitation starts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::SessionError;
use crate::graph::PrecedenceGraph;
use crate::interrogative::{Interrogative, InterrogativeSet};
use crate::matrix::PatternMatrix;

/// Tag that marks a which concern as feeding the link matrix.
pub const LINK_TAG: &str = "link";
/// Prefix of the tag naming the function column a which concern links to.
pub const FUNCTION_TAG_PREFIX: &str = "function:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Full,
    Triage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pending,
    Answered,
    Skipped,
    GatedOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proceed,
    NotNeeded,
}

/// One group of the session scope, optionally narrowed to concerns with a tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScopeEntry {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
}

impl ScopeEntry {
    pub fn group(group: impl Into<String>) -> Self {
        ScopeEntry {
            group: group.into(),
            tag: None,
        }
    }

    pub fn tagged(group: impl Into<String>, tag: impl Into<String>) -> Self {
        ScopeEntry {
            group: group.into(),
            tag: Some(tag.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRef {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionInstance {
    pub id: String,
    pub concern_id: String,
    pub group: String,
    pub interrogative: Interrogative,
    pub prompt: String,
    pub status: Status,
    #[serde(default)]
    pub gatekeeper: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates_from: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub tags: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub instance_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub timestamp: String,
}

impl Answer {
    pub fn new(
        instance_id: impl Into<String>,
        text: impl Into<String>,
        timestamp: impl Into<String>,
    ) -> Self {
        Answer {
            instance_id: instance_id.into(),
            text: text.into(),
            items: None,
            verdict: None,
            timestamp: timestamp.into(),
        }
    }

    pub fn with_items(mut self, items: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.items = Some(items.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = Some(verdict);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub matrix_ref: MatrixRef,
    pub graph: PrecedenceGraph,
    pub scope: Vec<ScopeEntry>,
    pub mode: Mode,
    pub instances: Vec<QuestionInstance>,
    pub answers: Vec<Answer>,
    pub created: String,
}

impl Session {
    /// Instantiates the in-scope concerns. Instances are numbered `q1`,
    /// `q2`, ... in matrix group order, then matrix concern order.
    pub fn create(
        id: impl Into<String>,
        matrix: &PatternMatrix,
        graph: &PrecedenceGraph,
        scope: &[ScopeEntry],
        mode: Mode,
        created: impl Into<String>,
    ) -> Result<Session, SessionError> {
        if let Some(e) = scope.iter().find(|e| matrix.group(&e.group).is_none()) {
            return Err(SessionError::UnknownGroup(e.group.clone()));
        }

        let mut instances: Vec<QuestionInstance> = Vec::new();
        let mut normalized = Vec::new();
        for group in &matrix.groups {
            let entries: Vec<&ScopeEntry> = scope.iter().filter(|e| e.group == group.id).collect();
            if entries.is_empty() {
                continue;
            }
            let mut tags: Vec<&ScopeEntry> = entries.clone();
            tags.sort();
            tags.dedup();
            normalized.extend(tags.into_iter().cloned());

            let in_scope = |tags: &BTreeSet<String>| {
                entries
                    .iter()
                    .any(|e| e.tag.as_ref().is_none_or(|t| tags.contains(t)))
            };
            for concern in matrix
                .concerns
                .iter()
                .filter(|c| c.groups.contains(&group.id) && in_scope(&c.tags))
            {
                if concern.gatekeeper && concern.interrogative != Interrogative::Why {
                    return Err(SessionError::InvalidConcern(concern.id.clone()));
                }
                instances.push(QuestionInstance {
                    id: format!("q{}", instances.len() + 1),
                    concern_id: concern.id.clone(),
                    group: group.id.clone(),
                    interrogative: concern.interrogative,
                    prompt: concern.prompt(),
                    status: Status::Pending,
                    gatekeeper: concern.gatekeeper,
                    // Resolved to an instance id below.
                    candidates_from: concern.candidates_from.clone(),
                    tags: concern.tags.clone(),
                });
            }
        }

        for idx in 0..instances.len() {
            let Some(source_concern) = instances[idx].candidates_from.clone() else {
                continue;
            };
            let inst = &instances[idx];
            if inst.interrogative != Interrogative::Which {
                return Err(SessionError::InvalidConcern(inst.concern_id.clone()));
            }
            let source = instances
                .iter()
                .find(|s| s.group == inst.group && s.concern_id == source_concern)
                .ok_or_else(|| SessionError::DanglingCandidateRef {
                    concern: inst.concern_id.clone(),
                    source_concern: source_concern.clone(),
                    group: inst.group.clone(),
                })?;
            if !matches!(
                source.interrogative,
                Interrogative::Who | Interrogative::What
            ) {
                return Err(SessionError::InvalidConcern(inst.concern_id.clone()));
            }
            let source_id = source.id.clone();
            instances[idx].candidates_from = Some(source_id);
        }

        Ok(Session {
            id: id.into(),
            matrix_ref: MatrixRef {
                name: matrix.name.clone(),
                version: matrix.version.clone(),
            },
            graph: graph.clone(),
            scope: normalized,
            mode,
            instances,
            answers: Vec::new(),
            created: created.into(),
        })
    }

    pub fn instance(&self, id: &str) -> Option<&QuestionInstance> {
        self.instances.iter().find(|i| i.id == id)
    }

    fn instance_index(&self, id: &str) -> Result<usize, SessionError> {
        self.instances
            .iter()
            .position(|i| i.id == id)
            .ok_or_else(|| SessionError::UnknownInstance(id.to_string()))
    }

    pub fn answer_for(&self, instance_id: &str) -> Option<&Answer> {
        self.answers.iter().find(|a| a.instance_id == instance_id)
    }

    /// Groups in scope, in matrix order.
    pub fn groups(&self) -> Vec<&str> {
        let mut groups: Vec<&str> = Vec::new();
        for e in &self.scope {
            if !groups.contains(&e.group.as_str()) {
                groups.push(&e.group);
            }
        }
        groups
    }

    /// Interrogatives with at least one answered question.
    pub fn answered_interrogatives(&self) -> InterrogativeSet {
        self.instances
            .iter()
            .filter(|i| i.status == Status::Answered)
            .map(|i| i.interrogative)
            .collect()
    }

    /// Interrogatives with at least one answered question and none pending.
    pub fn satisfied_interrogatives(&self) -> InterrogativeSet {
        let pending: InterrogativeSet = self
            .instances
            .iter()
            .filter(|i| i.status == Status::Pending)
            .map(|i| i.interrogative)
            .collect();
        self.answered_interrogatives().difference(pending)
    }

    fn gate_open(&self) -> bool {
        self.mode == Mode::Full
            || !self
                .instances
                .iter()
                .any(|i| i.gatekeeper && i.status == Status::Pending)
    }

    fn is_askable(
        &self,
        inst: &QuestionInstance,
        satisfied: InterrogativeSet,
        answered: InterrogativeSet,
        gate_open: bool,
    ) -> bool {
        if inst.status != Status::Pending {
            return false;
        }
        let triage_gatekeeper = self.mode == Mode::Triage && inst.gatekeeper;
        if !gate_open
            && !triage_gatekeeper
            && !matches!(inst.interrogative, Interrogative::Who | Interrogative::What)
        {
            return false;
        }
        let rule_met = if triage_gatekeeper {
            answered.contains(Interrogative::Who) && answered.contains(Interrogative::What)
        } else {
            self.graph.is_met(inst.interrogative, satisfied)
        };
        rule_met
            && inst.candidates_from.as_deref().is_none_or(|source| {
                self.instance(source)
                    .is_some_and(|s| s.status == Status::Answered)
            })
    }

    /// Pending questions that may be asked now, by rank and then matrix order.
    pub fn next_questions(&self) -> Vec<&QuestionInstance> {
        let satisfied = self.satisfied_interrogatives();
        let answered = self.answered_interrogatives();
        let gate_open = self.gate_open();
        let mut next: Vec<&QuestionInstance> = self
            .instances
            .iter()
            .filter(|i| self.is_askable(i, satisfied, answered, gate_open))
            .collect();
        next.sort_by_key(|i| i.interrogative.rank());
        next
    }

    pub fn pending_count(&self) -> usize {
        self.instances
            .iter()
            .filter(|i| i.status == Status::Pending)
            .count()
    }

    /// Records an answer to a pending, currently askable question.
    pub fn record_answer(&mut self, answer: Answer) -> Result<(), SessionError> {
        let idx = self.instance_index(&answer.instance_id)?;
        let inst = &self.instances[idx];
        if inst.status != Status::Pending {
            return Err(SessionError::NotPending(inst.id.clone()));
        }
        if answer.verdict.is_some() && inst.interrogative != Interrogative::Why {
            return Err(SessionError::VerdictOnNonWhy(inst.id.clone()));
        }
        let askable = self.is_askable(
            inst,
            self.satisfied_interrogatives(),
            self.answered_interrogatives(),
            self.gate_open(),
        );
        if !askable {
            return Err(SessionError::Blocked(inst.id.clone()));
        }
        if let (Some(source), Some(items)) = (&inst.candidates_from, &answer.items) {
            let candidates = self
                .answer_for(source)
                .and_then(|a| a.items.clone())
                .unwrap_or_default();
            if !items.iter().all(|item| candidates.contains(item)) {
                return Err(SessionError::SubsetViolation {
                    items: items.clone(),
                    candidates,
                });
            }
        }
        self.instances[idx].status = Status::Answered;
        self.answers.push(answer);
        Ok(())
    }

    pub fn skip(&mut self, instance_id: &str) -> Result<(), SessionError> {
        let idx = self.instance_index(instance_id)?;
        if self.instances[idx].status != Status::Pending {
            return Err(SessionError::NotPending(instance_id.to_string()));
        }
        self.instances[idx].status = Status::Skipped;
        Ok(())
    }

    /// Acts on the verdict recorded for an answered why question. A
    /// `not_needed` verdict gates out every pending question tagged
    /// `affected_tag`; gating is one-way. Returns the gated instance ids.
    pub fn apply_verdict(
        &mut self,
        why_instance_id: &str,
        verdict: Verdict,
        affected_tag: &str,
    ) -> Result<Vec<String>, SessionError> {
        let idx = self.instance_index(why_instance_id)?;
        let inst = &self.instances[idx];
        if inst.interrogative != Interrogative::Why {
            return Err(SessionError::NotWhy(inst.id.clone()));
        }
        if inst.status != Status::Answered {
            return Err(SessionError::NotAnswered(inst.id.clone()));
        }
        let recorded = self
            .answer_for(why_instance_id)
            .and_then(|a| a.verdict)
            .ok_or_else(|| SessionError::MissingVerdict(why_instance_id.to_string()))?;
        if recorded != verdict {
            return Err(SessionError::VerdictMismatch(why_instance_id.to_string()));
        }
        let mut gated = Vec::new();
        if verdict == Verdict::NotNeeded {
            for inst in &mut self.instances {
                if inst.status == Status::Pending && inst.tags.contains(affected_tag) {
                    inst.status = Status::GatedOut;
                    gated.push(inst.id.clone());
                }
            }
        }
        Ok(gated)
    }

    pub fn coverage(&self) -> CoverageReport {
        let mut cells = Vec::new();
        for group in self.groups() {
            for interrogative in Interrogative::ALL {
                let mut cell = CoverageCell {
                    group: group.to_string(),
                    interrogative,
                    total: 0,
                    pending: 0,
                    answered: 0,
                    skipped: 0,
                    gated_out: 0,
                };
                for inst in self
                    .instances
                    .iter()
                    .filter(|i| i.group == group && i.interrogative == interrogative)
                {
                    cell.total += 1;
                    match inst.status {
                        Status::Pending => cell.pending += 1,
                        Status::Answered => cell.answered += 1,
                        Status::Skipped => cell.skipped += 1,
                        Status::GatedOut => cell.gated_out += 1,
                    }
                }
                cells.push(cell);
            }
        }
        CoverageReport { cells }
    }

    /// Data-entity × function cross reference from answered which questions
    /// tagged `link` and `function:<name>`.
    pub fn link_matrix(&self) -> LinkMatrix {
        let mut matrix = LinkMatrix::default();
        for inst in &self.instances {
            if inst.status != Status::Answered
                || inst.interrogative != Interrogative::Which
                || !inst.tags.contains(LINK_TAG)
            {
                continue;
            }
            let Some(items) = self.answer_for(&inst.id).and_then(|a| a.items.as_ref()) else {
                continue;
            };
            for function in inst
                .tags
                .iter()
                .filter_map(|t| t.strip_prefix(FUNCTION_TAG_PREFIX))
            {
                for item in items {
                    matrix.link(item, function);
                }
            }
        }
        matrix
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageCell {
    pub group: String,
    pub interrogative: Interrogative,
    pub total: usize,
    pub pending: usize,
    pub answered: usize,
    pub skipped: usize,
    pub gated_out: usize,
}

/// Per (group, interrogative) status tallies, groups in matrix order and
/// interrogatives in rank order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub cells: Vec<CoverageCell>,
}

impl CoverageReport {
    pub fn cell(&self, group: &str, interrogative: Interrogative) -> Option<&CoverageCell> {
        self.cells
            .iter()
            .find(|c| c.group == group && c.interrogative == interrogative)
    }

    pub fn total_answered(&self) -> usize {
        self.cells.iter().map(|c| c.answered).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub links: BTreeSet<(String, String)>,
}

impl LinkMatrix {
    pub fn link(&mut self, row: &str, column: &str) {
        if !self.rows.iter().any(|r| r == row) {
            self.rows.push(row.to_string());
        }
        if !self.columns.iter().any(|c| c == column) {
            self.columns.push(column.to_string());
        }
        self.links.insert((row.to_string(), column.to_string()));
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}
