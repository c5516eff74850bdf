//! Content-addressed store of raw model responses.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use sha2::{Digest, Sha256};

/// Hex SHA-256 of the JSON array `[prompt, model, temperature]`.
pub fn cache_key(prompt: &str, model: &str, temperature: f64) -> String {
    let material = serde_json::to_string(&(prompt, model, temperature)).expect("tuple serializes");
    hex::encode(Sha256::digest(material.as_bytes()))
}

/// Reads may run concurrently; inserts take the write lock.
#[derive(Debug, Default)]
pub struct ResponseCache {
    entries: RwLock<BTreeMap<String, String>>,
    path: Option<PathBuf>,
    hits: AtomicU64,
}

impl ResponseCache {
    /// A cache that lives only in memory.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists, otherwise starts empty; `save` writes back to it.
    pub fn open(path: &Path) -> io::Result<Self> {
        let entries = match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e),
        };
        Ok(Self { entries: RwLock::new(entries), path: Some(path.to_path_buf()), hits: AtomicU64::new(0) })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let found = self.entries.read().unwrap().get(key).cloned();
        if found.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        found
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.read().unwrap().contains_key(key)
    }

    pub fn insert(&self, key: String, response: String) {
        self.entries.write().unwrap().insert(key, response);
    }

    pub fn remove(&self, key: &str) -> Option<String> {
        self.entries.write().unwrap().remove(key)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    /// Writes the entries to the backing file via a sibling temp file. No-op in memory.
    pub fn save(&self) -> io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let text = {
            let entries = self.entries.read().unwrap();
            serde_json::to_string_pretty(&*entries).expect("string map serializes")
        };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text + "\n")?;
        std::fs::rename(tmp, path)
    }
}
