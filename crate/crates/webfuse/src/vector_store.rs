//! In-memory vector collection with exact top-k cosine retrieval.
//!
//! Collections here hold tens of chunks per question (three sources' worth),
//! so an exact scan is both faster than an ANN index and oracle-checkable.
//! Ties are broken by insertion id to keep benchmark reports reproducible.
//! Collections are ephemeral: one per merged-tool call, discarded afterwards.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::sync::Mutex;

use crate::chunking::Chunk;
use crate::embeddings::{cosine_similarity, EmbedError, Embedder, EmbeddingVector};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("add called with an empty chunk batch")]
    EmptyBatch,
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("dump failed: {0}")]
    Io(#[from] std::io::Error),
}

/// One stored entry: an id that is unique and strictly increasing in
/// insertion order, the chunk, its vector, and verbatim batch metadata.
#[derive(Debug, Clone)]
pub struct Entry {
    pub id: u64,
    pub chunk: Chunk,
    pub vector: EmbeddingVector,
    pub metadata: BTreeMap<String, String>,
}

/// A retrieval result: the stored chunk and its cosine similarity to the
/// query, plus the entry id used for tie-breaking.
#[derive(Debug, Clone)]
pub struct QueryHit {
    pub id: u64,
    pub chunk: Chunk,
    pub similarity: f64,
    pub metadata: BTreeMap<String, String>,
}

pub struct Collection {
    name: String,
    embedder: Arc<dyn Embedder>,
    entries: Vec<Entry>,
    next_id: u64,
    dedup: bool,
    last_query_sims: Mutex<Option<Vec<f64>>>,
}

impl Collection {
    pub fn new(name: impl Into<String>, embedder: Arc<dyn Embedder>) -> Self {
        Self {
            name: name.into(),
            embedder,
            entries: Vec::new(),
            next_id: 0,
            dedup: false,
            last_query_sims: Mutex::new(None),
        }
    }

    /// When enabled, a chunk whose text is already stored is skipped instead
    /// of stored again.
    pub fn with_dedup(mut self, dedup: bool) -> Self {
        self.dedup = dedup;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Embeds and stores a batch of chunks, attaching `metadata` verbatim to
    /// every entry. Returns the assigned ids in insertion order.
    pub fn add(
        &mut self,
        chunks: Vec<Chunk>,
        metadata: &BTreeMap<String, String>,
    ) -> Result<Vec<u64>, StoreError> {
        if chunks.is_empty() {
            return Err(StoreError::EmptyBatch);
        }
        let chunks: Vec<Chunk> = if self.dedup {
            let mut kept: Vec<Chunk> = Vec::new();
            for chunk in chunks {
                let stored = self.entries.iter().any(|e| e.chunk.text == chunk.text);
                let in_batch = kept.iter().any(|c| c.text == chunk.text);
                if !stored && !in_batch {
                    kept.push(chunk);
                }
            }
            if kept.is_empty() {
                return Ok(Vec::new());
            }
            kept
        } else {
            chunks
        };
        let texts: Vec<String> = chunks.iter().map(|c| c.text.clone()).collect();
        let vectors = self.embedder.embed(&texts)?;
        let mut ids = Vec::with_capacity(chunks.len());
        for (chunk, vector) in chunks.into_iter().zip(vectors) {
            let id = self.next_id;
            self.next_id += 1;
            ids.push(id);
            self.entries.push(Entry { id, chunk, vector, metadata: metadata.clone() });
        }
        *self.last_query_sims.lock().expect("lock poisoned") = None;
        Ok(ids)
    }

    /// Exact top-k by cosine similarity of the embedded query against every
    /// entry, sorted by similarity descending, ties broken by smaller id.
    /// Returns `min(k, len)` hits; `k == 0` yields an empty list.
    pub fn query(&self, query_text: &str, k: usize) -> Result<Vec<QueryHit>, StoreError> {
        if k == 0 || self.entries.is_empty() {
            return Ok(Vec::new());
        }
        let query_vector = self.embedder.embed_one(query_text)?;
        let sims: Vec<f64> = self
            .entries
            .iter()
            .map(|entry| cosine_similarity(&entry.vector, &query_vector))
            .collect::<Result<_, _>>()?;
        *self.last_query_sims.lock().expect("lock poisoned") = Some(sims.clone());

        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by(|&a, &b| {
            sims[b]
                .partial_cmp(&sims[a])
                .expect("similarities are finite")
                .then(self.entries[a].id.cmp(&self.entries[b].id))
        });
        Ok(order
            .into_iter()
            .take(k)
            .map(|at| {
                let entry = &self.entries[at];
                QueryHit {
                    id: entry.id,
                    chunk: entry.chunk.clone(),
                    similarity: sims[at],
                    metadata: entry.metadata.clone(),
                }
            })
            .collect())
    }

    /// Debug dump, one JSON record per line: id, source, similarity to the
    /// most recent query (null before any query), chunk text. Inspection
    /// only; no persistence contract.
    pub fn dump(&self, mut writer: impl Write) -> Result<(), StoreError> {
        let sims = self.last_query_sims.lock().expect("lock poisoned").clone();
        for (at, entry) in self.entries.iter().enumerate() {
            let record = serde_json::json!({
                "id": entry.id,
                "source": entry.chunk.source.name(),
                "similarity": sims.as_ref().map(|s| s[at]),
                "text": entry.chunk.text,
            });
            writeln!(writer, "{record}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunking::Source;
    use crate::embeddings::DeterministicEmbedder;

    fn collection(dimension: usize) -> Collection {
        Collection::new("test", Arc::new(DeterministicEmbedder::new(dimension)))
    }

    fn chunk(text: &str, source: Source, index: usize) -> Chunk {
        Chunk::new(text, source, index)
    }

    #[test]
    fn fresh_collection_assigns_sequential_ids() {
        let mut store = collection(16);
        let ids = store
            .add(
                vec![
                    chunk("one fish", Source::Other, 0),
                    chunk("two fish", Source::Other, 1),
                    chunk("red fish", Source::Other, 2),
                ],
                &BTreeMap::new(),
            )
            .unwrap();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn duplicates_are_kept_unless_dedup_is_on() {
        let mut store = collection(16);
        store.add(vec![chunk("same", Source::Other, 0)], &BTreeMap::new()).unwrap();
        store.add(vec![chunk("same", Source::Other, 0)], &BTreeMap::new()).unwrap();
        assert_eq!(store.len(), 2);

        let mut deduped = collection(16).with_dedup(true);
        deduped.add(vec![chunk("same", Source::Other, 0)], &BTreeMap::new()).unwrap();
        let ids = deduped.add(vec![chunk("same", Source::Other, 0)], &BTreeMap::new()).unwrap();
        assert!(ids.is_empty());
        assert_eq!(deduped.len(), 1);
    }

    #[test]
    fn batch_order_is_preserved_across_sources() {
        let mut store = collection(16);
        let dd = store.add(vec![chunk("a", Source::Duckduckgo, 0)], &BTreeMap::new()).unwrap();
        let google = store
            .add(
                vec![chunk("b", Source::Google, 0), chunk("c", Source::Google, 1)],
                &BTreeMap::new(),
            )
            .unwrap();
        let wiki = store.add(vec![chunk("d", Source::Wikipedia, 0)], &BTreeMap::new()).unwrap();
        assert!(dd.iter().max() < google.iter().min());
        assert!(google.iter().max() < wiki.iter().min());
    }

    #[test]
    fn self_retrieval_ranks_first_with_similarity_one() {
        let mut store = collection(64);
        store
            .add(
                vec![
                    chunk("the sky is blue", Source::Wikipedia, 0),
                    chunk("completely unrelated words here", Source::Google, 0),
                ],
                &BTreeMap::new(),
            )
            .unwrap();
        let hits = store.query("the sky is blue", 1).unwrap();
        assert_eq!(hits[0].chunk.text, "the sky is blue");
        assert!((hits[0].similarity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn k_larger_than_store_returns_everything() {
        let mut store = collection(16);
        store
            .add(
                vec![
                    chunk("a b", Source::Other, 0),
                    chunk("c d", Source::Other, 1),
                    chunk("e f", Source::Other, 2),
                ],
                &BTreeMap::new(),
            )
            .unwrap();
        assert_eq!(store.query("a", 10).unwrap().len(), 3);
    }

    #[test]
    fn k_zero_and_empty_store_yield_empty_results() {
        let mut store = collection(16);
        assert!(store.query("anything", 4).unwrap().is_empty());
        store.add(vec![chunk("a", Source::Other, 0)], &BTreeMap::new()).unwrap();
        assert!(store.query("anything", 0).unwrap().is_empty());
    }

    #[test]
    fn empty_batch_is_an_error() {
        let mut store = collection(16);
        assert!(matches!(store.add(vec![], &BTreeMap::new()), Err(StoreError::EmptyBatch)));
    }

    #[test]
    fn metadata_is_attached_verbatim_to_every_entry() {
        let mut store = collection(16);
        let metadata = BTreeMap::from([("source".to_string(), "wikipedia".to_string())]);
        store
            .add(
                vec![chunk("x", Source::Wikipedia, 0), chunk("y", Source::Wikipedia, 1)],
                &metadata,
            )
            .unwrap();
        for entry in store.entries() {
            assert_eq!(entry.metadata, metadata);
        }
    }

    #[test]
    fn similarities_are_non_increasing() {
        let mut store = collection(64);
        let chunks: Vec<Chunk> = ["alpha beta", "alpha", "gamma delta", "alpha beta gamma"]
            .iter()
            .enumerate()
            .map(|(at, text)| chunk(text, Source::Other, at))
            .collect();
        store.add(chunks, &BTreeMap::new()).unwrap();
        let hits = store.query("alpha beta", 4).unwrap();
        for pair in hits.windows(2) {
            assert!(pair[0].similarity >= pair[1].similarity);
        }
    }

    #[test]
    fn ties_break_by_smaller_id() {
        let mut store = collection(16);
        // Identical texts embed identically, forcing an exact tie.
        store
            .add(
                vec![
                    chunk("twin", Source::Other, 0),
                    chunk("twin", Source::Other, 1),
                    chunk("twin", Source::Other, 2),
                ],
                &BTreeMap::new(),
            )
            .unwrap();
        let hits = store.query("twin", 3).unwrap();
        let ids: Vec<u64> = hits.iter().map(|hit| hit.id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn inserting_a_non_top_k_entry_keeps_prior_order() {
        let mut store = collection(64);
        let chunks: Vec<Chunk> = ["alpha beta gamma", "alpha beta", "alpha delta", "alpha"]
            .iter()
            .enumerate()
            .map(|(at, text)| chunk(text, Source::Other, at))
            .collect();
        store.add(chunks, &BTreeMap::new()).unwrap();
        let before: Vec<u64> =
            store.query("alpha beta", 3).unwrap().iter().map(|hit| hit.id).collect();
        // An unrelated entry that cannot reach the top 3.
        store
            .add(vec![chunk("zzz yyy xxx www", Source::Other, 4)], &BTreeMap::new())
            .unwrap();
        let after: Vec<u64> =
            store.query("alpha beta", 3).unwrap().iter().map(|hit| hit.id).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn concurrent_readers_after_ingestion_agree() {
        let mut store = collection(32);
        let chunks: Vec<Chunk> = (0..40)
            .map(|at| chunk(&format!("entry number {at} about topic {}", at % 5), Source::Other, at))
            .collect();
        store.add(chunks, &BTreeMap::new()).unwrap();
        let baseline: Vec<u64> =
            store.query("topic 3", 5).unwrap().iter().map(|hit| hit.id).collect();
        std::thread::scope(|scope| {
            for _ in 0..4 {
                scope.spawn(|| {
                    let ids: Vec<u64> =
                        store.query("topic 3", 5).unwrap().iter().map(|hit| hit.id).collect();
                    assert_eq!(ids, baseline);
                });
            }
        });
    }

    #[test]
    fn dump_writes_one_record_per_entry() {
        let mut store = collection(16);
        store
            .add(
                vec![chunk("a b", Source::Google, 0), chunk("c d", Source::Wikipedia, 0)],
                &BTreeMap::new(),
            )
            .unwrap();
        store.query("a", 1).unwrap();
        let mut buffer = Vec::new();
        store.dump(&mut buffer).unwrap();
        let lines: Vec<&str> = std::str::from_utf8(&buffer).unwrap().lines().collect();
        assert_eq!(lines.len(), 2);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["id"], 0);
        assert_eq!(first["source"], "google");
        assert!(first["similarity"].is_number());
        assert_eq!(first["text"], "a b");
    }
}
