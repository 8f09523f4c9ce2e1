//! Vector retrieval: embed chunks into an ephemeral collection and pull the
//! top-k most similar ones back out.
//!
//! Uses the deterministic hashed bag-of-words embedder, so the output is
//! identical on every run and no endpoint is needed.
//!
//! Run with: cargo run --example embed_and_query

use std::collections::BTreeMap;
use std::sync::Arc;

use webfuse::chunking::{Chunk, Source};
use webfuse::embeddings::DeterministicEmbedder;
use webfuse::vector_store::Collection;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let embedder = Arc::new(DeterministicEmbedder::new(128));
    let mut collection = Collection::new("demo", embedder);

    let passages = [
        (Source::Wikipedia, "A glacier cave is a cave formed within the ice of a glacier."),
        (Source::Wikipedia, "Glacier caves are often called ice caves, but that term names bedrock caves with year-round ice."),
        (Source::Google, "Meltwater streams flowing under the glacier carve and enlarge glacier caves."),
        (Source::Duckduckgo, "The Perito Moreno Glacier in Patagonia has partly submerged caves."),
        (Source::Google, "Cricket is a bat-and-ball game played between two teams of eleven."),
    ];
    for (at, (source, text)) in passages.iter().enumerate() {
        let metadata = BTreeMap::from([("source".to_string(), source.name().to_string())]);
        collection.add(vec![Chunk::new(*text, *source, at)], &metadata)?;
    }

    let query = "how are glacier caves formed?";
    println!("query: {query}\n");
    for (rank, hit) in collection.query(query, 3)?.iter().enumerate() {
        println!(
            "{}. [{}] similarity {:.4}  {}",
            rank + 1,
            hit.chunk.source,
            hit.similarity,
            hit.chunk.text
        );
    }

    // Line-delimited debug dump of the whole collection.
    println!("\ncollection dump:");
    collection.dump(std::io::stdout())?;
    Ok(())
}
