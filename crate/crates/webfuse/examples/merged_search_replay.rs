//! The fused web tool: fetch DuckDuckGo, Google, and Wikipedia in parallel,
//! split everything into chunks, rank the chunks against the query in an
//! ephemeral vector collection, and return the top passages as one string.
//!
//! Runs offline by replaying recorded payloads from the fixtures/ directory
//! shipped with this crate. To talk to the live services instead, record
//! your own fixtures with `webfuse fixtures record` or set the store mode to
//! live.
//!
//! Run with: cargo run --example merged_search_replay

use std::path::Path;
use std::sync::Arc;

use webfuse::embeddings::DeterministicEmbedder;
use webfuse::sources::{FixtureMode, FixtureStore, SourceClients, SourceConfig};
use webfuse::tools::{merged_search, MergeConfig};
use webfuse::SplitterConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let store = Arc::new(FixtureStore::new(fixtures, FixtureMode::Replay));
    let clients = SourceClients::new(store, SourceConfig::default());
    let embedder = Arc::new(DeterministicEmbedder::new(128));
    let config = MergeConfig {
        min_chunks: 5,
        splitter: SplitterConfig::with_sizes(200, 50)?,
        ..MergeConfig::default()
    };

    let query = "how are glacier caves formed?";
    let output = merged_search(query, &config, &clients, embedder)?;

    println!("query: {query}\n");
    println!("source outcomes:");
    for outcome in &output.outcomes {
        println!("  {:<10} {:?}", outcome.source.name(), outcome.outcome);
    }
    println!("\ntop {} ranked chunks:", output.hits.len());
    for (rank, hit) in output.hits.iter().enumerate() {
        println!("  {}. [{}] {:.4}  {}", rank + 1, hit.chunk.source, hit.similarity, hit.chunk.text);
    }
    println!("\nmerged result handed to the agent:\n{}", output.text);
    Ok(())
}
