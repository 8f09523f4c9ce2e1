//! Recursive character splitting: bounded, overlapping chunks that respect
//! paragraph, line, and word boundaries where possible.
//!
//! Run with: cargo run --example split_text

use webfuse::chunking::{split_text, split_text_with_offsets, SplitterConfig};

fn main() {
    let text = "Glacier caves form inside the ice of a glacier, carved out by meltwater.\n\
                Streams flowing through or under the ice enlarge their channels season \
                after season until a person can walk in.\n\n\
                Warm air circulation widens melt channels into galleries. At volcanic \
                glaciers, geothermal heat does the carving instead, producing caves near \
                the bedrock.\n\n\
                Glacier caves are often called ice caves, but that term properly names \
                bedrock caves that hold year-round ice.";

    // Defaults: 400-character chunks with a 100-character overlap.
    let chunks = split_text(text, &SplitterConfig::default());
    println!("default config -> {} chunk(s)", chunks.len());

    // A tighter budget forces several overlapping chunks.
    let config = SplitterConfig::with_sizes(160, 40).expect("valid sizes");
    println!("\nchunk_size=160, chunk_overlap=40:");
    for (at, (offset, chunk)) in split_text_with_offsets(text, &config).iter().enumerate() {
        println!("\n--- chunk {} ({} chars, starts at char {offset}) ---", at + 1, chunk.chars().count());
        println!("{chunk}");
    }
}
