use std::path::Path;

use w6h_core::storage::{SessionEvent, SessionJournal};
use w6h_core::{Answer, Mode, ScopeEntry, Session, SessionError, Verdict};

use crate::failure::Failure;
use crate::{io, ModeArg, SessionCommand, StartArgs, VerdictArg};

const LOG_SUFFIX: &str = ".w6hlog.jsonl";

fn verdict(v: VerdictArg) -> Verdict {
    match v {
        VerdictArg::Proceed => Verdict::Proceed,
        VerdictArg::NotNeeded => Verdict::NotNeeded,
    }
}

pub fn run(cmd: SessionCommand) -> Result<u8, Failure> {
    match cmd {
        SessionCommand::Start(args) => start(args),
        SessionCommand::Next { log, json } => {
            let journal = io::open_journal(&log.log)?;
            print_next(journal.session(), json);
            Ok(0)
        }
        SessionCommand::Answer {
            log,
            instance,
            text,
            items,
            verdict: v,
        } => {
            let mut answer = Answer::new(instance, text, io::now());
            if !items.is_empty() {
                answer = answer.with_items(items);
            }
            if let Some(v) = v {
                answer = answer.with_verdict(verdict(v));
            }
            mutate(&log.log, |j| j.answer(answer).cloned())
        }
        SessionCommand::Skip { log, instance } => {
            mutate(&log.log, |j| j.skip(&instance, io::now()).cloned())
        }
        SessionCommand::Gate {
            log,
            instance,
            verdict: v,
            tag,
        } => mutate(&log.log, |j| {
            j.gate(&instance, verdict(v), &tag, io::now()).cloned()
        }),
        SessionCommand::Report { log, json } => {
            let journal = io::open_journal(&log.log)?;
            let report = journal.session().coverage();
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
                return Ok(0);
            }
            println!(
                "{:<20} {:<6} {:>5} {:>8} {:>7} {:>7} {:>9}",
                "group", "ask", "total", "answered", "pending", "skipped", "gated_out"
            );
            for c in &report.cells {
                println!(
                    "{:<20} {:<6} {:>5} {:>8} {:>7} {:>7} {:>9}",
                    c.group,
                    c.interrogative.as_str(),
                    c.total,
                    c.answered,
                    c.pending,
                    c.skipped,
                    c.gated_out
                );
            }
            Ok(0)
        }
        SessionCommand::Links { log, json } => {
            let journal = io::open_journal(&log.log)?;
            let links = journal.session().link_matrix();
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&links).expect("links serialize")
                );
                return Ok(0);
            }
            if links.is_empty() {
                println!("no links recorded");
                return Ok(0);
            }
            let width = links.rows.iter().map(String::len).max().unwrap_or(0);
            print!("{:width$}", "");
            for col in &links.columns {
                print!("  {col}");
            }
            println!();
            for row in &links.rows {
                print!("{row:width$}");
                for col in &links.columns {
                    let mark = if links.links.contains(&(row.clone(), col.clone())) {
                        "x"
                    } else {
                        "."
                    };
                    print!("  {mark:^w$}", w = col.len());
                }
                println!();
            }
            Ok(0)
        }
    }
}

fn start(args: StartArgs) -> Result<u8, Failure> {
    let path = &args.log.log;
    if path.exists() && !args.force {
        return Err(Failure::usage(format!(
            "{} already exists; pass --force to replace it",
            path.display()
        )));
    }
    let matrix = io::load_matrix(args.source.matrix.as_deref())?;
    let graph = io::load_graph(args.graph.graph.as_deref())?;
    let mut scope = Vec::new();
    for label in &args.groups {
        let group = matrix
            .resolve_group(label)
            .ok_or_else(|| Failure::usage(format!("unknown stakeholder group `{label}`")))?;
        scope.push(ScopeEntry {
            group: group.id.clone(),
            tag: args.tag.clone(),
        });
    }
    let mode = match args.mode {
        ModeArg::Full => Mode::Full,
        ModeArg::Triage => Mode::Triage,
    };
    let id = args.id.unwrap_or_else(|| default_id(path));
    let session = Session::create(id, &matrix, &graph, &scope, mode, io::now())?;
    let journal = SessionJournal::start(session);
    io::write(path, &journal.log().to_jsonl())?;
    let s = journal.session();
    println!(
        "started {} with {} questions in {}",
        s.id,
        s.instances.len(),
        path.display()
    );
    Ok(0)
}

fn default_id(path: &Path) -> String {
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("session");
    name.strip_suffix(LOG_SUFFIX)
        .or_else(|| name.split('.').next())
        .filter(|n| !n.is_empty())
        .unwrap_or("session")
        .to_string()
}

/// Loads the log, applies one operation and appends its event.
fn mutate(
    path: &Path,
    op: impl FnOnce(&mut SessionJournal) -> Result<SessionEvent, SessionError>,
) -> Result<u8, Failure> {
    let mut journal = io::open_journal(path)?;
    let event = op(&mut journal)?;
    io::append_event(path, &event)?;
    println!("recorded {} (event {})", describe(&event), event.seq);
    print_next(journal.session(), false);
    Ok(0)
}

fn describe(event: &SessionEvent) -> String {
    let v = serde_json::to_value(event).expect("events serialize");
    let kind = v["kind"].as_str().unwrap_or("event");
    match v["payload"]["instance_id"].as_str() {
        Some(id) => format!("{kind} {id}"),
        None => kind.to_string(),
    }
}

fn print_next(session: &Session, json: bool) {
    let next = session.next_questions();
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&next).expect("instances serialize")
        );
        return;
    }
    if next.is_empty() {
        println!("nothing to ask now ({} pending)", session.pending_count());
        return;
    }
    for inst in next {
        let badge = if inst.gatekeeper { " [gatekeeper]" } else { "" };
        let source = inst
            .candidates_from
            .as_deref()
            .map(|s| format!(" [choose from {s}]"))
            .unwrap_or_default();
        println!(
            "{:<5} {:<5} {:<16} {}{badge}{source}",
            inst.id,
            inst.interrogative.as_str(),
            inst.group,
            inst.prompt
        );
    }
    let waiting = session.pending_count() - session.next_questions().len();
    if waiting > 0 {
        println!("({waiting} more pending behind prerequisites)");
    }
}
