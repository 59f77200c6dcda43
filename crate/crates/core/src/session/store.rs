use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, PoisonError};

use super::{load_session, save_session, SessionDocument, SessionError};

/// Random 128-bit session id, rendered as 32 lowercase hex digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SessionId(String);

impl SessionId {
    pub fn generate() -> Self {
        Self(format!("{:032x}", rand::random::<u128>()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SessionId {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() == 32 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            Ok(Self(s.to_owned()))
        } else {
            Err(StoreError::NotFound(s.to_owned()))
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("no session with id {0}")]
    NotFound(String),
    #[error(transparent)]
    Session(#[from] SessionError),
}

/// A directory holding one `<id>.json` document per session.
///
/// Writes to one id are serialized by an in-process lock and land atomically,
/// so readers only ever see complete documents.
#[derive(Debug)]
pub struct SessionStore {
    root: PathBuf,
    locks: Mutex<HashMap<SessionId, Arc<Mutex<()>>>>,
}

impl SessionStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|source| SessionError::Storage {
            path: root.clone(),
            source,
        })?;
        Ok(Self {
            root,
            locks: Mutex::new(HashMap::new()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path_of(&self, id: &SessionId) -> PathBuf {
        self.root.join(format!("{id}.json"))
    }

    fn lock_for(&self, id: &SessionId) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(PoisonError::into_inner);
        locks.entry(id.clone()).or_default().clone()
    }

    pub fn create(&self, doc: &SessionDocument) -> Result<SessionId, StoreError> {
        let id = SessionId::generate();
        self.save(&id, doc)?;
        Ok(id)
    }

    pub fn load(&self, id: &SessionId) -> Result<SessionDocument, StoreError> {
        load_session(&self.path_of(id)).map_err(|e| match e {
            SessionError::Storage { source, .. } if source.kind() == io::ErrorKind::NotFound => {
                StoreError::NotFound(id.to_string())
            }
            other => StoreError::Session(other),
        })
    }

    pub fn save(&self, id: &SessionId, doc: &SessionDocument) -> Result<(), StoreError> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(PoisonError::into_inner);
        save_session(doc, &self.path_of(id))?;
        Ok(())
    }

    /// Read-modify-write under the session's lock. The document is saved
    /// only if `apply` succeeds.
    pub fn update<T, E>(
        &self,
        id: &SessionId,
        apply: impl FnOnce(&mut SessionDocument) -> Result<T, E>,
    ) -> Result<T, E>
    where
        E: From<StoreError>,
    {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(PoisonError::into_inner);
        let mut doc = self.load(id)?;
        let out = apply(&mut doc)?;
        save_session(&doc, &self.path_of(id)).map_err(StoreError::from)?;
        Ok(out)
    }
}
