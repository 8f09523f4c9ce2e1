//! The merged web tool: parallel multi-source fetch, split, embed, store,
//! top-k retrieve, concatenate.
//!
//! All configured sources are fetched concurrently, but chunk batches are
//! always inserted in the fixed order duckduckgo, google, wikipedia so that
//! insertion-id tie-breaks (and therefore retrieval output) stay
//! deterministic regardless of network completion order.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::chunking::{split_text, Chunk, Source, SplitterConfig};
use crate::embeddings::Embedder;
use crate::sources::{SourceClients, SourceError};
use crate::vector_store::{Collection, QueryHit};

use super::ToolError;

/// Canonical insertion order for source batches.
pub const SOURCE_INSERTION_ORDER: [Source; 3] = [Source::Duckduckgo, Source::Google, Source::Wikipedia];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MergeConfig {
    /// Top-k retrieval count.
    pub min_chunks: usize,
    pub splitter: SplitterConfig,
    /// Which sources participate; insertion order is fixed regardless.
    pub sources: Vec<Source>,
    /// Separator between retrieved chunks in the merged result text.
    pub join_separator: String,
}

impl Default for MergeConfig {
    fn default() -> Self {
        Self {
            min_chunks: 10,
            splitter: SplitterConfig::default(),
            sources: SOURCE_INSERTION_ORDER.to_vec(),
            join_separator: "\n".to_string(),
        }
    }
}

impl MergeConfig {
    pub fn validate(&self) -> Result<(), ToolError> {
        if self.min_chunks == 0 {
            return Err(ToolError::InvalidConfig("min_chunks must be at least 1".into()));
        }
        if self.sources.is_empty() {
            return Err(ToolError::InvalidConfig("at least one source must be configured".into()));
        }
        if self.sources.contains(&Source::Other) {
            return Err(ToolError::InvalidConfig("'other' is not a fetchable source".into()));
        }
        self.splitter
            .validate()
            .map_err(|e| ToolError::InvalidConfig(e.to_string()))?;
        Ok(())
    }
}

/// What happened to one source during a merged search.
#[derive(Debug, Clone)]
pub enum FetchOutcome {
    /// Fetched and contributed this many chunks.
    Contributed(usize),
    /// Fetched but returned no usable text.
    Empty,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct SourceOutcome {
    pub source: Source,
    pub outcome: FetchOutcome,
}

/// Result of a merged search: the concatenated top chunks plus per-source
/// provenance.
#[derive(Debug, Clone)]
pub struct MergedSearchOutput {
    pub text: String,
    pub hits: Vec<QueryHit>,
    pub outcomes: Vec<SourceOutcome>,
}

/// Fetches all configured sources concurrently, splits each result, stores
/// the chunks in a fresh ephemeral collection (duckduckgo, then google, then
/// wikipedia), retrieves the top `min_chunks` for the original query, and
/// joins the retrieved chunk texts in rank order.
///
/// Partial source failures degrade the merge; only when every source fails
/// or returns nothing does this error, signalling the agent to answer from
/// parametric knowledge.
pub fn merged_search(
    query: &str,
    config: &MergeConfig,
    clients: &SourceClients,
    embedder: Arc<dyn Embedder>,
) -> Result<MergedSearchOutput, ToolError> {
    config.validate()?;
    let active: Vec<Source> = SOURCE_INSERTION_ORDER
        .into_iter()
        .filter(|source| config.sources.contains(source))
        .collect();

    let fetched = fetch_concurrently(query, &active, clients);

    let mut collection = Collection::new("merged", embedder);
    let mut outcomes = Vec::with_capacity(active.len());
    for (source, result) in fetched {
        let outcome = match result {
            Err(err) => FetchOutcome::Failed(err.to_string()),
            Ok(text) => {
                let pieces = split_text(&text, &config.splitter);
                if pieces.is_empty() {
                    FetchOutcome::Empty
                } else {
                    let count = pieces.len();
                    let chunks: Vec<Chunk> = pieces
                        .into_iter()
                        .enumerate()
                        .map(|(index, piece)| Chunk::new(piece, source, index))
                        .collect();
                    let metadata =
                        BTreeMap::from([("source".to_string(), source.name().to_string())]);
                    collection.add(chunks, &metadata)?;
                    FetchOutcome::Contributed(count)
                }
            }
        };
        outcomes.push(SourceOutcome { source, outcome });
    }

    if collection.is_empty() {
        return Err(ToolError::EmptyEvidence);
    }

    let hits = collection.query(query, config.min_chunks)?;
    let text = hits
        .iter()
        .map(|hit| hit.chunk.text.as_str())
        .collect::<Vec<_>>()
        .join(&config.join_separator);
    Ok(MergedSearchOutput { text, hits, outcomes })
}

fn fetch_concurrently(
    query: &str,
    active: &[Source],
    clients: &SourceClients,
) -> Vec<(Source, Result<String, SourceError>)> {
    thread::scope(|scope| {
        let handles: Vec<_> = active
            .iter()
            .map(|&source| {
                let client = clients.get(source).expect("active sources are fetchable");
                scope.spawn(move || (source, client.fetch(query).map(|r| r.text)))
            })
            .collect();
        handles.into_iter().map(|handle| handle.join().expect("fetch thread panicked")).collect()
    })
}
