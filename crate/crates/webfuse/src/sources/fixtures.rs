//! Record/replay fixture store for web source payloads.
//!
//! One file per (source, normalized query) key. The first line is a JSON
//! metadata record (source, query, recorded_at); the rest of the file is the
//! raw payload verbatim, UTF-8 encoded. Replay mode never opens a network
//! connection: it only reads these files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::chunking::Source;

use super::SourceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureMode {
    Record,
    Replay,
    Live,
}

impl std::str::FromStr for FixtureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "record" => Ok(FixtureMode::Record),
            "replay" => Ok(FixtureMode::Replay),
            "live" => Ok(FixtureMode::Live),
            other => Err(format!("unknown fixture mode: {other}")),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FixtureMeta {
    source: Source,
    query: String,
    recorded_at: u64,
}

#[derive(Debug, Clone)]
pub struct FixtureStore {
    root: PathBuf,
    pub mode: FixtureMode,
}

impl FixtureStore {
    pub fn new(root: impl Into<PathBuf>, mode: FixtureMode) -> Self {
        Self { root: root.into(), mode }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Fixture keys are case- and spacing-insensitive: lowercase with
    /// internal whitespace collapsed to single spaces.
    pub fn normalize_query(query: &str) -> String {
        query.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
    }

    /// Human-readable key used in error messages and verification reports.
    pub fn key(source: Source, query: &str) -> String {
        format!("{}/{}", source.name(), Self::normalize_query(query))
    }

    pub fn path_for(&self, source: Source, query: &str) -> PathBuf {
        let normalized = Self::normalize_query(query);
        let slug: String = normalized
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
            .take(60)
            .collect();
        let digest = fnv1a64(normalized.as_bytes());
        self.root.join(source.name()).join(format!("{slug}-{digest:016x}.txt"))
    }

    pub fn exists(&self, source: Source, query: &str) -> bool {
        self.path_for(source, query).is_file()
    }

    /// Reads the payload stored under (source, query). A missing file is a
    /// fixture miss naming the source and key.
    pub fn read(&self, source: Source, query: &str) -> Result<String, SourceError> {
        let path = self.path_for(source, query);
        let contents = fs::read_to_string(&path).map_err(|_| SourceError::FixtureMiss {
            origin: source,
            key: Self::key(source, query),
        })?;
        match contents.split_once('\n') {
            Some((_meta, payload)) => Ok(payload.to_string()),
            None => Ok(String::new()),
        }
    }

    /// Writes `payload` under (source, query), creating directories as
    /// needed. Returns the path written.
    pub fn write(&self, source: Source, query: &str, payload: &str) -> Result<PathBuf, SourceError> {
        let path = self.path_for(source, query);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| SourceError::Io(e.to_string()))?;
        }
        let meta = FixtureMeta {
            source,
            query: Self::normalize_query(query),
            recorded_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let header = serde_json::to_string(&meta).expect("metadata serializes");
        fs::write(&path, format!("{header}\n{payload}")).map_err(|e| SourceError::Io(e.to_string()))?;
        Ok(path)
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &byte in bytes {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_lowercases_and_collapses_whitespace() {
        assert_eq!(FixtureStore::normalize_query("  Capital\t OF\n France "), "capital of france");
    }

    #[test]
    fn write_then_read_round_trips_payload() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::new(dir.path(), FixtureMode::Replay);
        store.write(Source::Google, "Capital of France", "line one\nline two").unwrap();
        let payload = store.read(Source::Google, "capital  of france").unwrap();
        assert_eq!(payload, "line one\nline two");
    }

    #[test]
    fn missing_fixture_names_source_and_key() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::new(dir.path(), FixtureMode::Replay);
        let err = store.read(Source::Wikipedia, "No Such Query").unwrap_err();
        match err {
            SourceError::FixtureMiss { origin: source, key } => {
                assert_eq!(source, Source::Wikipedia);
                assert_eq!(key, "wikipedia/no such query");
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn distinct_queries_map_to_distinct_files() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::new(dir.path(), FixtureMode::Record);
        let a = store.path_for(Source::Duckduckgo, "first query");
        let b = store.path_for(Source::Duckduckgo, "second query");
        assert_ne!(a, b);
        // Same normalized key, same file.
        assert_eq!(a, store.path_for(Source::Duckduckgo, "FIRST   Query"));
    }
}
