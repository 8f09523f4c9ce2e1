//! Clients for the three web knowledge sources, with record/replay fixtures.
//!
//! Each client resolves a query to a [`SourceResult`] through one of three
//! modes: `live` (network only), `record` (network, then persist the raw
//! payload as a fixture), or `replay` (fixtures only, zero network activity).
//! Google and DuckDuckGo fixtures store the provider's raw response body and
//! re-run the same parsing/assembly on replay; Wikipedia fixtures store the
//! assembled, uncapped lead text. Failure of one client never alters
//! another's result.

mod duckduckgo;
mod fixtures;
mod google;
mod wikipedia;

pub use duckduckgo::DuckDuckGoClient;
pub use fixtures::{FixtureMode, FixtureStore};
pub use google::GoogleClient;
pub use wikipedia::WikipediaClient;

use std::sync::Arc;
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

use crate::chunking::Source;

/// Env var holding the Serper (Google search) credential.
pub const SERPER_API_KEY_VAR: &str = "SERPER_API_KEY";

#[derive(Debug, Clone, thiserror::Error)]
pub enum SourceError {
    #[error("no fixture recorded for {key} (source {origin})")]
    FixtureMiss { origin: Source, key: String },
    #[error("missing env var {0} required for live mode")]
    MissingApiKey(&'static str),
    #[error("{origin} transport failure: {detail}")]
    Transport { origin: Source, detail: String },
    #[error("{origin} returned HTTP {status}")]
    Http { origin: Source, status: u16 },
    #[error("malformed {origin} response at byte offset {offset}: {detail}")]
    MalformedResponse { origin: Source, offset: usize, detail: String },
    #[error("fixture io error: {0}")]
    Io(String),
}

/// Raw text returned by one web source for one query.
#[derive(Debug, Clone)]
pub struct SourceResult {
    pub source: Source,
    /// Empty only when the source genuinely returned no results.
    pub text: String,
    pub fetched_at: SystemTime,
    pub from_fixture: bool,
}

impl SourceResult {
    fn new(source: Source, text: String, from_fixture: bool) -> Self {
        Self { source, text, fetched_at: SystemTime::now(), from_fixture }
    }
}

/// Per-source client settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SourceConfig {
    pub timeout_ms: u64,
    /// Extra attempts after a transport failure in live/record mode.
    pub retry_count: u32,
    /// Cap on the Wikipedia lead text, in characters.
    pub max_wiki_chars: usize,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self { timeout_ms: 10_000, retry_count: 1, max_wiki_chars: 4_000 }
    }
}

/// A stateless query-to-text client for one web source. Calls to distinct
/// sources may run concurrently; each call is bounded by the configured
/// timeout.
pub trait SourceClient: Send + Sync {
    fn source(&self) -> Source;

    fn fetch(&self, query: &str) -> Result<SourceResult, SourceError>;
}

/// The full set of clients the merged tool and the sequential toolset use.
#[derive(Clone)]
pub struct SourceClients {
    pub duckduckgo: Arc<DuckDuckGoClient>,
    pub google: Arc<GoogleClient>,
    pub wikipedia: Arc<WikipediaClient>,
}

impl SourceClients {
    pub fn new(store: Arc<FixtureStore>, config: SourceConfig) -> Self {
        Self {
            duckduckgo: Arc::new(DuckDuckGoClient::new(store.clone(), config.clone())),
            google: Arc::new(GoogleClient::new(store.clone(), config.clone())),
            wikipedia: Arc::new(WikipediaClient::new(store, config)),
        }
    }

    pub fn get(&self, source: Source) -> Option<Arc<dyn SourceClient>> {
        match source {
            Source::Duckduckgo => Some(self.duckduckgo.clone()),
            Source::Google => Some(self.google.clone()),
            Source::Wikipedia => Some(self.wikipedia.clone()),
            Source::Other => None,
        }
    }
}

/// Converts a serde_json error position (1-based line/column) into a byte
/// offset within `body` for error reporting.
pub(crate) fn json_error_offset(body: &str, err: &serde_json::Error) -> usize {
    let line = err.line().max(1);
    let column = err.column().max(1);
    let mut offset = 0usize;
    for (at, candidate) in body.split_inclusive('\n').enumerate() {
        if at + 1 == line {
            return offset + (column - 1).min(candidate.len());
        }
        offset += candidate.len();
    }
    offset
}

/// Runs `attempt` up to `1 + retry_count` times, retrying only on transport
/// failures.
pub(crate) fn with_retries<T>(
    retry_count: u32,
    mut attempt: impl FnMut() -> Result<T, SourceError>,
) -> Result<T, SourceError> {
    let mut last = None;
    for _ in 0..=retry_count {
        match attempt() {
            Ok(value) => return Ok(value),
            Err(err @ SourceError::Transport { .. }) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.expect("at least one attempt"))
}
