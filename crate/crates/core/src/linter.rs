//! Question classification and questionnaire linting.
//!
//! Rule codes:
//!
//! | code   | severity | meaning                                              |
//! |--------|----------|------------------------------------------------------|
//! | W6H001 | error    | question asked before its interrogative prerequisites |
//! | W6H002 | warning  | section asks no *which* question                      |
//! | W6H003 | error    | question contains no interrogative word               |
//! | W6H004 | warning  | matrix cell for the section's group left uncovered    |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Unclassifiable;
use crate::graph::PrecedenceGraph;
use crate::interrogative::{Interrogative, InterrogativeSet};
use crate::matrix::PatternMatrix;
use crate::ordering::is_valid_order;
use crate::Severity;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub primary: Interrogative,
    /// Later distinct interrogatives, in order of appearance.
    pub embedded: Vec<Interrogative>,
    pub raw: String,
}

fn interrogative_token(token: &str) -> Option<Interrogative> {
    match token.to_ascii_lowercase().as_str() {
        "who" | "whom" | "whose" => Some(Interrogative::Who),
        "what" => Some(Interrogative::What),
        "which" => Some(Interrogative::Which),
        "where" => Some(Interrogative::Where),
        "how" => Some(Interrogative::How),
        "why" => Some(Interrogative::Why),
        "when" => Some(Interrogative::When),
        _ => None,
    }
}

/// Classifies a question by its first interrogative word.
pub fn classify(question: &str) -> Result<Classification, Unclassifiable> {
    let mut found = question
        .split(|c: char| !c.is_alphanumeric())
        .filter_map(interrogative_token);
    let primary = found
        .next()
        .ok_or_else(|| Unclassifiable(question.to_string()))?;
    let mut embedded = Vec::new();
    for i in found {
        if i != primary && !embedded.contains(&i) {
            embedded.push(i);
        }
    }
    Ok(Classification {
        primary,
        embedded,
        raw: question.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    /// 1-based line number in the source text.
    pub line: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub label: Option<String>,
    pub questions: Vec<Question>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionnaireDoc {
    pub sections: Vec<Section>,
}

impl QuestionnaireDoc {
    pub fn question_count(&self) -> usize {
        self.sections.iter().map(|s| s.questions.len()).sum()
    }
}

fn question_body(line: &str) -> Option<&str> {
    if let Some(rest) = line.strip_prefix("- ") {
        return Some(rest);
    }
    let digits = line.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 {
        return line[digits..].strip_prefix(". ");
    }
    None
}

/// Reads a markdown-ish questionnaire. `## ` opens a section; `- ` and
/// `N. ` lines are questions; everything else is ignored.
pub fn parse_questionnaire(text: &str) -> QuestionnaireDoc {
    let mut sections = vec![Section {
        label: None,
        questions: Vec::new(),
    }];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_start();
        if let Some(label) = line.strip_prefix("## ") {
            sections.push(Section {
                label: Some(label.trim().to_string()),
                questions: Vec::new(),
            });
        } else if let Some(body) = question_body(line) {
            let body = body.trim();
            if !body.is_empty() {
                sections
                    .last_mut()
                    .expect("at least the implicit section exists")
                    .questions
                    .push(Question {
                        line: idx + 1,
                        text: body.to_string(),
                    });
            }
        }
    }
    if sections[0].questions.is_empty() {
        sections.remove(0);
    }
    QuestionnaireDoc { sections }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleCode {
    W6H001,
    W6H002,
    W6H003,
    W6H004,
}

impl RuleCode {
    pub fn severity(self) -> Severity {
        match self {
            RuleCode::W6H001 | RuleCode::W6H003 => Severity::Error,
            RuleCode::W6H002 | RuleCode::W6H004 => Severity::Warning,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            RuleCode::W6H001 => "order-violation",
            RuleCode::W6H002 => "missing-which",
            RuleCode::W6H003 => "unclassifiable",
            RuleCode::W6H004 => "empty-cell-coverage",
        }
    }
}

impl fmt::Display for RuleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub code: RuleCode,
    pub line: usize,
    pub severity: Severity,
    pub message: String,
}

impl LintFinding {
    fn new(code: RuleCode, line: usize, message: String) -> Self {
        LintFinding {
            code,
            line,
            severity: code.severity(),
            message,
        }
    }
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} line {}: {}", self.code, self.line, self.message)
    }
}

/// Lints every section of `doc` independently.
pub fn lint_document(
    doc: &QuestionnaireDoc,
    graph: &PrecedenceGraph,
    matrix: Option<&PatternMatrix>,
) -> Vec<LintFinding> {
    let mut findings = Vec::new();
    for section in &doc.sections {
        lint_section(section, graph, matrix, &mut findings);
    }
    findings
}

fn lint_section(
    section: &Section,
    graph: &PrecedenceGraph,
    matrix: Option<&PatternMatrix>,
    out: &mut Vec<LintFinding>,
) {
    let Some(first) = section.questions.first() else {
        return;
    };

    let mut classified = Vec::new();
    for q in &section.questions {
        match classify(&q.text) {
            Ok(c) => classified.push((q.line, c.primary)),
            Err(_) => out.push(LintFinding::new(
                RuleCode::W6H003,
                q.line,
                format!("no interrogative word in \"{}\"", q.text),
            )),
        }
    }

    let sequence: Vec<Interrogative> = classified.iter().map(|(_, i)| *i).collect();
    for v in is_valid_order(graph, &sequence) {
        out.push(LintFinding::new(
            RuleCode::W6H001,
            classified[v.position].0,
            format!(
                "{} question asked too early: {}",
                v.interrogative,
                v.describe_unmet()
            ),
        ));
    }

    let asked: InterrogativeSet = sequence.iter().copied().collect();
    let label = section.label.as_deref().unwrap_or("(untitled)");
    if !asked.contains(Interrogative::Which) {
        out.push(LintFinding::new(
            RuleCode::W6H002,
            first.line,
            format!("section \"{label}\" asks no which question; selection and prioritization are not captured"),
        ));
    }

    let group = matrix
        .zip(section.label.as_deref())
        .and_then(|(m, l)| m.resolve_group(l).map(|g| (m, g)));
    if let Some((m, group)) = group {
        for i in Interrogative::ALL {
            let cell = m.cell(&group.id, i);
            if !cell.is_empty() && !asked.contains(i) {
                out.push(LintFinding::new(
                    RuleCode::W6H004,
                    first.line,
                    format!(
                        "no {i} question for {}; the matrix lists {} concern(s) there",
                        group.display_name,
                        cell.len()
                    ),
                ));
            }
        }
    }
}

/// Highest severity among the findings, if any.
pub fn max_severity(findings: &[LintFinding]) -> Option<Severity> {
    findings.iter().map(|f| f.severity).max()
}
