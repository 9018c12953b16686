use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use w6h_core::storage::{self, EventLog, SessionEvent, SessionJournal};
use w6h_core::{PatternMatrix, PrecedenceGraph, Session, SessionError, StorageError};

use crate::error::ApiError;

/// Source of event timestamps.
pub type Clock = Arc<dyn Fn() -> String + Send + Sync>;

const MATRIX_FILE: &str = "matrix.w6h.json";
const SESSIONS_DIR: &str = "sessions";
const LOG_EXTENSION: &str = ".w6hlog.jsonl";

pub fn system_clock() -> Clock {
    Arc::new(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

pub struct ServerConfig {
    pub matrix: PatternMatrix,
    pub graph: PrecedenceGraph,
    /// When set, the matrix and session logs are persisted here and
    /// reloaded on startup.
    pub data_dir: Option<PathBuf>,
    /// Directory of built UI assets served at `/`.
    pub assets: Option<PathBuf>,
    pub clock: Clock,
}

impl ServerConfig {
    pub fn new(matrix: PatternMatrix, graph: PrecedenceGraph) -> Self {
        ServerConfig {
            matrix,
            graph,
            data_dir: None,
            assets: None,
            clock: system_clock(),
        }
    }
}

type SessionHandle = Arc<Mutex<SessionJournal>>;

/// Shared server state. Cheap to clone.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    matrix: RwLock<PatternMatrix>,
    matrix_writer: Mutex<()>,
    graph: PrecedenceGraph,
    sessions: RwLock<BTreeMap<String, SessionHandle>>,
    counter: AtomicU64,
    data_dir: Option<PathBuf>,
    assets: Option<PathBuf>,
    clock: Clock,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // State is only replaced after a mutation fully succeeds, so a poisoned
    // lock still guards consistent data.
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl AppState {
    pub fn new(config: ServerConfig) -> Result<Self, StorageError> {
        let mut matrix = config.matrix;
        let mut sessions = BTreeMap::new();
        if let Some(dir) = &config.data_dir {
            fs::create_dir_all(dir.join(SESSIONS_DIR))?;
            let path = dir.join(MATRIX_FILE);
            if path.exists() {
                matrix = storage::load_matrix(&fs::read_to_string(&path)?)?;
            } else {
                write_atomic(&path, &storage::save_matrix(&matrix))?;
            }
            for entry in fs::read_dir(dir.join(SESSIONS_DIR))? {
                let path = entry?.path();
                let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
                    continue;
                };
                if !name.ends_with(LOG_EXTENSION) {
                    continue;
                }
                let log = EventLog::from_jsonl(&fs::read_to_string(&path)?)?;
                let journal = SessionJournal::from_log(log)?;
                sessions.insert(journal.session().id.clone(), Arc::new(Mutex::new(journal)));
            }
        }
        Ok(AppState {
            inner: Arc::new(Inner {
                matrix: RwLock::new(matrix),
                matrix_writer: Mutex::new(()),
                graph: config.graph,
                counter: AtomicU64::new(sessions.len() as u64),
                sessions: RwLock::new(sessions),
                data_dir: config.data_dir,
                assets: config.assets,
                clock: config.clock,
            }),
        })
    }

    pub fn now(&self) -> String {
        (self.inner.clock)()
    }

    pub fn graph(&self) -> &PrecedenceGraph {
        &self.inner.graph
    }

    pub fn assets(&self) -> Option<&Path> {
        self.inner.assets.as_deref()
    }

    pub fn matrix(&self) -> PatternMatrix {
        self.inner
            .matrix
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .clone()
    }

    /// Applies `edit` to the current matrix and persists the result. Writers
    /// are serialized; readers see either the old or the new matrix.
    pub fn update_matrix<E>(
        &self,
        edit: impl FnOnce(&PatternMatrix) -> Result<PatternMatrix, E>,
    ) -> Result<PatternMatrix, ApiError>
    where
        ApiError: From<E>,
    {
        let _writer = lock(&self.inner.matrix_writer);
        let next = edit(&self.matrix())?;
        if let Some(dir) = &self.inner.data_dir {
            write_atomic(&dir.join(MATRIX_FILE), &storage::save_matrix(&next))?;
        }
        *self.inner.matrix.write().unwrap_or_else(|e| e.into_inner()) = next.clone();
        Ok(next)
    }

    fn fresh_id(&self) -> String {
        let sessions = self
            .inner
            .sessions
            .read()
            .unwrap_or_else(|e| e.into_inner());
        loop {
            let n = self.inner.counter.fetch_add(1, Ordering::Relaxed) + 1;
            let id = format!("s{n:04}");
            if !sessions.contains_key(&id) {
                return id;
            }
        }
    }

    /// Creates a session with a fresh id and records its created event.
    pub fn create_session(
        &self,
        build: impl FnOnce(String, &PatternMatrix) -> Result<Session, SessionError>,
    ) -> Result<Session, ApiError> {
        let session = build(self.fresh_id(), &self.matrix())?;
        let journal = SessionJournal::start(session.clone());
        if let Some(path) = self.log_path(&session.id) {
            write_atomic(&path, &journal.log().to_jsonl())?;
        }
        self.inner
            .sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(session.id.clone(), Arc::new(Mutex::new(journal)));
        Ok(session)
    }

    fn handle(&self, id: &str) -> Result<SessionHandle, ApiError> {
        self.inner
            .sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    pub fn session_ids(&self) -> Vec<String> {
        self.inner
            .sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .keys()
            .cloned()
            .collect()
    }

    /// Runs `f` against a consistent snapshot of one session's journal.
    pub fn read_session<R>(
        &self,
        id: &str,
        f: impl FnOnce(&SessionJournal) -> R,
    ) -> Result<R, ApiError> {
        let handle = self.handle(id)?;
        let guard = lock(&handle);
        Ok(f(&guard))
    }

    /// Applies one mutation inside the session's exclusive region. The
    /// event is persisted before the new state becomes visible; on any
    /// failure the session is left untouched.
    pub fn mutate_session<R>(
        &self,
        id: &str,
        op: impl FnOnce(&mut SessionJournal) -> Result<SessionEvent, SessionError>,
        view: impl FnOnce(&SessionEvent, &SessionJournal) -> R,
    ) -> Result<R, ApiError> {
        let handle = self.handle(id)?;
        let mut guard = lock(&handle);
        let mut draft = guard.clone();
        let event = op(&mut draft)?;
        if let Some(path) = self.log_path(id) {
            let mut file = OpenOptions::new().append(true).create(true).open(path)?;
            writeln!(file, "{}", event.to_line())?;
            file.sync_data()?;
        }
        *guard = draft;
        Ok(view(&event, &guard))
    }

    fn log_path(&self, id: &str) -> Option<PathBuf> {
        let dir = self.inner.data_dir.as_ref()?;
        Some(dir.join(SESSIONS_DIR).join(format!("{id}{LOG_EXTENSION}")))
    }
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(tmp, path)
}
