//! Documents and persistence.
//!
//! Matrices and graphs are stored as pretty-printed JSON (`.w6h.json`) with
//! a `format_version` of `"1"`. Sessions are stored as append-only JSON
//! lines (`.w6hlog.jsonl`), one [`SessionEvent`] per line, and rebuilt by
//! [`EventLog::replay`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{SessionError, StorageError};
use crate::graph::{DependencyRule, PrecedenceGraph};
use crate::interrogative::Interrogative;
use crate::linter::LintFinding;
use crate::matrix::{Concern, PatternMatrix, StakeholderGroup};
use crate::session::{Answer, Session, Verdict};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub format_version: String,
    pub name: String,
    pub version: String,
    pub groups: Vec<StakeholderGroup>,
    pub concerns: Vec<Concern>,
}

impl From<&PatternMatrix> for MatrixDocument {
    fn from(m: &PatternMatrix) -> Self {
        MatrixDocument {
            format_version: FORMAT_VERSION.into(),
            name: m.name.clone(),
            version: m.version.clone(),
            groups: m.groups.clone(),
            concerns: m.concerns.clone(),
        }
    }
}

impl From<MatrixDocument> for PatternMatrix {
    fn from(d: MatrixDocument) -> Self {
        PatternMatrix {
            name: d.name,
            version: d.version,
            groups: d.groups,
            concerns: d.concerns,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: String,
    pub version: String,
    pub rules: Vec<DependencyRule>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<String>,
}

fn check_version(text: &str) -> Result<(), StorageError> {
    let probe: VersionProbe = serde_json::from_str(text).map_err(StorageError::from_json)?;
    match probe.format_version.as_deref() {
        Some(FORMAT_VERSION) => Ok(()),
        Some(other) => Err(StorageError::UnsupportedVersion(other.to_string())),
        None => Err(StorageError::Parse {
            line: 1,
            column: 1,
            message: "missing field `format_version`".into(),
        }),
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("document types always serialize");
    text.push('\n');
    text
}

pub fn save_matrix(matrix: &PatternMatrix) -> String {
    to_pretty(&MatrixDocument::from(matrix))
}

pub fn load_matrix(text: &str) -> Result<PatternMatrix, StorageError> {
    check_version(text)?;
    let doc: MatrixDocument = serde_json::from_str(text).map_err(StorageError::from_json)?;
    Ok(doc.into())
}

pub fn save_graph(graph: &PrecedenceGraph) -> String {
    to_pretty(&GraphDocument {
        format_version: FORMAT_VERSION.into(),
        version: graph.version.clone(),
        rules: graph.rules().cloned().collect(),
    })
}

pub fn load_graph(text: &str) -> Result<PrecedenceGraph, StorageError> {
    check_version(text)?;
    let doc: GraphDocument = serde_json::from_str(text).map_err(StorageError::from_json)?;
    PrecedenceGraph::new(doc.version, doc.rules).map_err(|e| StorageError::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

/// Lint findings as a JSON list of `{code, line, severity, message}`.
pub fn findings_to_json(findings: &[LintFinding]) -> String {
    to_pretty(&findings)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum EventBody {
    Created(Box<Session>),
    Answered(Answer),
    Skipped {
        instance_id: String,
    },
    Gated {
        instance_id: String,
        verdict: Verdict,
        tag: String,
        gated: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionEvent {
    pub seq: u64,
    pub timestamp: String,
    #[serde(flatten)]
    pub body: EventBody,
}

impl SessionEvent {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("events always serialize")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<SessionEvent>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[SessionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn next_seq(&self) -> u64 {
        self.events.len() as u64 + 1
    }

    /// Appends an event whose seq must directly follow the last one.
    pub fn append(&mut self, event: SessionEvent) -> Result<(), StorageError> {
        let expected = self.next_seq();
        if event.seq != expected {
            return Err(StorageError::SeqGap {
                expected,
                found: event.seq,
            });
        }
        self.events.push(event);
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }

    /// Parses JSON lines. Blank lines are ignored.
    pub fn from_jsonl(text: &str) -> Result<EventLog, StorageError> {
        let mut log = EventLog::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let event: SessionEvent =
                serde_json::from_str(line).map_err(|e| StorageError::CorruptEvent {
                    seq: log.next_seq(),
                    reason: e.to_string(),
                })?;
            log.append(event)?;
        }
        Ok(log)
    }

    /// Folds the events through the session operations.
    pub fn replay(&self) -> Result<Session, StorageError> {
        let mut events = self.events.iter();
        let mut session = match events.next().map(|e| &e.body) {
            Some(EventBody::Created(s)) => (**s).clone(),
            _ => return Err(StorageError::MissingCreated),
        };
        for event in events {
            apply_event(&mut session, &event.body).map_err(|reason| {
                StorageError::CorruptEvent {
                    seq: event.seq,
                    reason,
                }
            })?;
        }
        Ok(session)
    }
}

fn apply_event(session: &mut Session, body: &EventBody) -> Result<(), String> {
    match body {
        EventBody::Created(_) => Err("second created event".into()),
        EventBody::Answered(answer) => session
            .record_answer(answer.clone())
            .map_err(|e| e.to_string()),
        EventBody::Skipped { instance_id } => session.skip(instance_id).map_err(|e| e.to_string()),
        EventBody::Gated {
            instance_id,
            verdict,
            tag,
            gated,
        } => {
            let actual = session
                .apply_verdict(instance_id, *verdict, tag)
                .map_err(|e| e.to_string())?;
            if &actual != gated {
                return Err(format!(
                    "gated set {actual:?} differs from recorded {gated:?}"
                ));
            }
            Ok(())
        }
    }
}

/// A session paired with the log that reproduces it. Every successful
/// mutation appends exactly one event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionJournal {
    session: Session,
    log: EventLog,
}

impl SessionJournal {
    pub fn start(session: Session) -> Self {
        let timestamp = session.created.clone();
        let mut log = EventLog::new();
        log.events.push(SessionEvent {
            seq: 1,
            timestamp,
            body: EventBody::Created(Box::new(session.clone())),
        });
        SessionJournal { session, log }
    }

    pub fn from_log(log: EventLog) -> Result<Self, StorageError> {
        let session = log.replay()?;
        Ok(SessionJournal { session, log })
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    fn push(&mut self, timestamp: String, body: EventBody) -> &SessionEvent {
        let seq = self.log.next_seq();
        self.log.events.push(SessionEvent {
            seq,
            timestamp,
            body,
        });
        self.log.events.last().expect("just pushed")
    }

    pub fn answer(&mut self, answer: Answer) -> Result<&SessionEvent, SessionError> {
        self.session.record_answer(answer.clone())?;
        let timestamp = answer.timestamp.clone();
        Ok(self.push(timestamp, EventBody::Answered(answer)))
    }

    pub fn skip(
        &mut self,
        instance_id: &str,
        timestamp: impl Into<String>,
    ) -> Result<&SessionEvent, SessionError> {
        self.session.skip(instance_id)?;
        Ok(self.push(
            timestamp.into(),
            EventBody::Skipped {
                instance_id: instance_id.to_string(),
            },
        ))
    }

    pub fn gate(
        &mut self,
        instance_id: &str,
        verdict: Verdict,
        tag: &str,
        timestamp: impl Into<String>,
    ) -> Result<&SessionEvent, SessionError> {
        let gated = self.session.apply_verdict(instance_id, verdict, tag)?;
        Ok(self.push(
            timestamp.into(),
            EventBody::Gated {
                instance_id: instance_id.to_string(),
                verdict,
                tag: tag.to_string(),
                gated,
            },
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExportFormat {
    #[default]
    Markdown,
    Csv,
}

/// Renders one group's questionnaire with questions under interrogative
/// headings in rank order. `group` may be an id or a display name.
pub fn export_questionnaire(
    matrix: &PatternMatrix,
    group: &str,
    format: ExportFormat,
) -> Result<String, StorageError> {
    let group = matrix
        .resolve_group(group)
        .ok_or_else(|| StorageError::UnknownGroup(group.to_string()))?;
    match format {
        ExportFormat::Markdown => Ok(export_markdown(matrix, group)),
        ExportFormat::Csv => export_csv(matrix, group),
    }
}

fn export_markdown(matrix: &PatternMatrix, group: &StakeholderGroup) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## {}", group.display_name);
    for i in Interrogative::ALL {
        let cell = matrix.cell(&group.id, i);
        if cell.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n### {}", i.title());
        for concern in cell {
            let _ = writeln!(out, "- {}", concern.prompt());
        }
    }
    out
}

fn export_csv(matrix: &PatternMatrix, group: &StakeholderGroup) -> Result<String, StorageError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let to_io = |e: csv::Error| StorageError::Io(std::io::Error::other(e));
    writer
        .write_record(["group", "interrogative", "rank", "concern_id", "prompt"])
        .map_err(to_io)?;
    for i in Interrogative::ALL {
        for concern in matrix.cell(&group.id, i) {
            writer
                .write_record([
                    group.id.as_str(),
                    i.as_str(),
                    &i.rank().to_string(),
                    &concern.id,
                    &concern.prompt(),
                ])
                .map_err(to_io)?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| StorageError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 strings"))
}
