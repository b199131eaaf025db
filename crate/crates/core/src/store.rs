//! File-backed document store with optimistic revisions.
//!
//! Layout under the root directory:
//!
//! ```text
//! <root>/<id>.json        committed documents, one per file
//! <root>/.tmp/            in-flight writes, renamed into place on commit
//! <root>/.locks/<id>.lock advisory lock serializing writers of one id
//! ```
//!
//! A write goes to a temp file, is fsynced, then renamed over the primary
//! file, so readers only ever see a complete old or new version. Writers of
//! the same id take an exclusive `flock`, which also serializes writers in
//! different processes.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, SystemTime};

use serde::{Deserialize, Serialize};

use crate::assessment::{AssessmentDocument, Status, DOCUMENT_FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::report::Issue;

const TMP_DIR: &str = ".tmp";
const LOCK_DIR: &str = ".locks";
const STALE_TEMP_AGE: Duration = Duration::from_secs(3600);

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Ids double as file names: ASCII letters, digits, `-`, `_` and `.`,
/// not starting with a dot, at most 128 bytes.
pub fn valid_document_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentListing {
    pub id: String,
    pub threat: String,
    pub status: Status,
    pub revision: u64,
}

/// Simulated crash points for exercising the commit protocol.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WriteFault {
    /// Write only half of the temp file, then give up.
    TornTempFile,
    /// Write and sync the temp file but never rename it.
    BeforeRename,
}

#[derive(Debug)]
pub struct DocumentStore {
    root: PathBuf,
    fault: Mutex<Option<WriteFault>>,
}

impl DocumentStore {
    /// Opens an existing directory, or creates it. Nothing else is written
    /// until the first put, so opening a fixtures directory read-only is fine.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        if !root.exists() {
            fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        } else if !root.is_dir() {
            return Err(Error::io(
                &root,
                io::Error::new(
                    io::ErrorKind::NotADirectory,
                    "store root is not a directory",
                ),
            ));
        }
        let store = DocumentStore {
            root,
            fault: Mutex::new(None),
        };
        store.sweep_stale_temps();
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, id: &str) -> PathBuf {
        self.root.join(format!("{id}.json"))
    }

    #[doc(hidden)]
    pub fn inject_fault(&self, fault: Option<WriteFault>) {
        *self.fault.lock().unwrap() = fault;
    }

    fn check_id(id: &str) -> Result<()> {
        if valid_document_id(id) {
            Ok(())
        } else {
            Err(Error::InvalidDocument(vec![Issue::new(
                "document_id",
                format!("invalid document id `{id}`"),
            )
            .at(id)]))
        }
    }

    fn read_file(path: &Path) -> Result<Option<AssessmentDocument>> {
        match fs::read_to_string(path) {
            Ok(text) => {
                let doc: AssessmentDocument = serde_json::from_str(&text)
                    .map_err(|e| Error::parse(path.display().to_string(), e))?;
                Ok(Some(doc))
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn get(&self, id: &str) -> Result<AssessmentDocument> {
        Self::check_id(id)?;
        Self::read_file(&self.path_for(id))?.ok_or_else(|| Error::NotFound(id.to_string()))
    }

    /// Committed revision of `id`, or `None` if no such document exists.
    pub fn revision(&self, id: &str) -> Result<Option<u64>> {
        Self::check_id(id)?;
        Ok(Self::read_file(&self.path_for(id))?.map(|d| d.revision))
    }

    fn lock(&self, id: &str) -> Result<File> {
        let dir = self.root.join(LOCK_DIR);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let path = dir.join(format!("{id}.lock"));
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        file.lock().map_err(|e| Error::io(&path, e))?;
        Ok(file)
    }

    /// Commits `doc` and returns its new revision.
    ///
    /// With `expected_revision` set, the write only happens if the stored
    /// revision still equals it (`0` meaning "must not exist yet");
    /// otherwise it fails with `version_conflict`. Without it the write is
    /// unconditional.
    pub fn put(&self, doc: &AssessmentDocument, expected_revision: Option<u64>) -> Result<u64> {
        Self::check_id(&doc.id)?;
        if doc.format_version != DOCUMENT_FORMAT_VERSION {
            return Err(Error::InvalidDocument(vec![Issue::new(
                "format_version",
                format!("unsupported document format_version {}", doc.format_version),
            )]));
        }

        let _guard = self.lock(&doc.id)?;
        let path = self.path_for(&doc.id);
        let current = Self::read_file(&path)?.map_or(0, |d| d.revision);
        if let Some(expected) = expected_revision {
            if expected != current {
                return Err(Error::VersionConflict {
                    id: doc.id.clone(),
                    expected,
                    actual: current,
                });
            }
        }

        let mut stored = doc.clone();
        stored.revision = current + 1;
        self.commit(&path, stored.to_json().as_bytes())?;
        Ok(stored.revision)
    }

    fn commit(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        let tmp_dir = self.root.join(TMP_DIR);
        fs::create_dir_all(&tmp_dir).map_err(|e| Error::io(&tmp_dir, e))?;
        let tmp = tmp_dir.join(format!(
            "{}.{}.{}.tmp",
            path.file_stem().and_then(|s| s.to_str()).unwrap_or("doc"),
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let fault = *self.fault.lock().unwrap();

        let mut file = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        if fault == Some(WriteFault::TornTempFile) {
            file.write_all(&bytes[..bytes.len() / 2])
                .map_err(|e| Error::io(&tmp, e))?;
            return Err(Error::io(
                &tmp,
                io::Error::new(io::ErrorKind::Interrupted, "injected fault: torn write"),
            ));
        }
        file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
        file.sync_all().map_err(|e| Error::io(&tmp, e))?;
        drop(file);
        if fault == Some(WriteFault::BeforeRename) {
            return Err(Error::io(
                &tmp,
                io::Error::new(io::ErrorKind::Interrupted, "injected fault: before rename"),
            ));
        }

        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
        // Persist the rename itself; not every platform lets us open a directory.
        if let Ok(dir) = File::open(&self.root) {
            let _ = dir.sync_all();
        }
        Ok(())
    }

    pub fn delete(&self, id: &str, expected_revision: Option<u64>) -> Result<()> {
        Self::check_id(id)?;
        let _guard = self.lock(id)?;
        let path = self.path_for(id);
        let current = Self::read_file(&path)?
            .ok_or_else(|| Error::NotFound(id.to_string()))?
            .revision;
        if let Some(expected) = expected_revision {
            if expected != current {
                return Err(Error::VersionConflict {
                    id: id.to_string(),
                    expected,
                    actual: current,
                });
            }
        }
        fs::remove_file(&path).map_err(|e| Error::io(&path, e))
    }

    fn document_paths(&self) -> Result<Vec<PathBuf>> {
        let entries = fs::read_dir(&self.root).map_err(|e| Error::io(&self.root, e))?;
        let mut paths = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(&self.root, e))?;
            let path = entry.path();
            let name = entry.file_name();
            let name = name.to_string_lossy();
            if name.starts_with('.') || !path.is_file() {
                continue;
            }
            if path.extension().is_some_and(|ext| ext == "json") {
                paths.push(path);
            }
        }
        paths.sort();
        Ok(paths)
    }

    /// All committed documents, sorted by id.
    pub fn load_all(&self) -> Result<Vec<AssessmentDocument>> {
        let mut docs = Vec::new();
        for path in self.document_paths()? {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let doc: AssessmentDocument = serde_json::from_str(&text)
                .map_err(|e| Error::parse(path.display().to_string(), e))?;
            docs.push(doc);
        }
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(docs)
    }

    pub fn list(&self) -> Result<Vec<DocumentListing>> {
        Ok(self
            .load_all()?
            .into_iter()
            .map(|d| DocumentListing {
                id: d.id,
                threat: d.threat,
                status: d.status,
                revision: d.revision,
            })
            .collect())
    }

    /// Document id to (file, committed revision).
    pub fn index(&self) -> Result<BTreeMap<String, (PathBuf, u64)>> {
        Ok(self
            .load_all()?
            .into_iter()
            .map(|d| {
                let path = self.path_for(&d.id);
                (d.id, (path, d.revision))
            })
            .collect())
    }

    fn sweep_stale_temps(&self) {
        let Ok(entries) = fs::read_dir(self.root.join(TMP_DIR)) else {
            return;
        };
        let now = SystemTime::now();
        for entry in entries.flatten() {
            let stale = entry
                .metadata()
                .and_then(|m| m.modified())
                .ok()
                .and_then(|t| now.duration_since(t).ok())
                .is_some_and(|age| age > STALE_TEMP_AGE);
            if stale {
                let _ = fs::remove_file(entry.path());
            }
        }
    }
}
