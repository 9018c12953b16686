use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use w6h_core::storage::{self, EventLog, SessionEvent, SessionJournal};
use w6h_core::{default_graph, default_matrix, PatternMatrix, PrecedenceGraph};

use crate::failure::Failure;

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: Option<&Path>) -> Result<PatternMatrix, Failure> {
    match path {
        None => Ok(default_matrix()),
        Some(p) => storage::load_matrix(&read(p)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
    }
}

pub fn load_graph(path: Option<&Path>) -> Result<PrecedenceGraph, Failure> {
    match path {
        None => Ok(default_graph()),
        Some(p) => storage::load_graph(&read(p)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
    }
}

pub fn open_journal(path: &Path) -> Result<SessionJournal, Failure> {
    let log = EventLog::from_jsonl(&read(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    SessionJournal::from_log(log).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn append_event(path: &Path, event: &SessionEvent) -> Result<(), Failure> {
    let append = || -> std::io::Result<()> {
        let mut file = OpenOptions::new().append(true).open(path)?;
        writeln!(file, "{}", event.to_line())?;
        file.sync_data()
    };
    append().map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Event timestamp: `W6H_NOW` when set, so runs can be reproduced.
pub fn now() -> String {
    std::env::var("W6H_NOW")
        .unwrap_or_else(|_| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}
