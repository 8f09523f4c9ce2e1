//! Dataset preprocessing: reduce WikiQA candidate-sentence rows to gold
//! question/answer pairs (label-1 sentences only, merged per question).
//!
//! Run with: cargo run --example preprocess_wikiqa

use std::path::Path;

use webfuse::eval::preprocess_wikiqa_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/wikiqa_sample.tsv");
    println!("input: {}", sample.display());
    let pairs = preprocess_wikiqa_file(&sample)?;
    println!("{} pair(s) after preprocessing:\n", pairs.len());
    for pair in &pairs {
        println!("question: {}", pair.question);
        println!("answer:   {}", pair.answer);
    }
    Ok(())
}
