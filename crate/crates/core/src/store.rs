//! Session registry with one JSON document per session on disk.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use crate::error::{Error, Result};
use crate::evo::GaParams;
use crate::intent::AgentPolicy;
use crate::session::{PersistedSession, Session};

type Shared = Arc<Mutex<Session>>;

/// Sessions keyed by id. Each session sits behind its own mutex, so one
/// mutation at a time per session while different sessions proceed in parallel.
#[derive(Debug, Default)]
pub struct SessionStore {
    dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Shared>>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a data directory and loads every session in it.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let persisted: PersistedSession = serde_json::from_slice(&fs::read(&path)?)?;
            let session = Session::from_persisted(persisted)?;
            sessions.insert(session.id.clone(), Arc::new(Mutex::new(session)));
        }
        Ok(Self { dir: Some(dir), sessions: RwLock::new(sessions) })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn persist(&self, session: &Session) -> Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, &session.to_persisted())?;
        tmp.flush()?;
        tmp.persist(dir.join(format!("{}.json", session.id))).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn create(&self, params: GaParams, policy: AgentPolicy) -> Result<String> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(id.clone(), params, policy)?;
        self.persist(&session)?;
        self.sessions.write().expect("store lock").insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }

    fn get(&self, id: &str) -> Result<Shared> {
        self.sessions
            .read()
            .expect("store lock")
            .get(id)
            .cloned()
            .ok_or_else(|| Error::NotFound(format!("session {id}")))
    }

    /// Runs a read-only closure on the session.
    pub fn read<T>(&self, id: &str, f: impl FnOnce(&Session) -> T) -> Result<T> {
        let shared = self.get(id)?;
        let guard = shared.lock().expect("session lock");
        Ok(f(&guard))
    }

    /// Mutates a working copy; it replaces the session and is persisted only
    /// when `f` succeeds, so failed operations leave no trace.
    pub fn update<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T> {
        let shared = self.get(id)?;
        let mut guard = shared.lock().expect("session lock");
        let mut draft = guard.clone();
        let out = f(&mut draft)?;
        self.persist(&draft)?;
        *guard = draft;
        Ok(out)
    }
}
