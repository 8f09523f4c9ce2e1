//! Automated answer grading, both paths: the judge-LLM + sentiment pipeline
//! and the deterministic rule fallback.
//!
//! Run with: cargo run --example compare_answers

use std::sync::Arc;

use webfuse::eval::{
    fill_comparison_prompt, Comparator, ScriptedSentiment, SentimentClassifier, SentimentLabel,
};
use webfuse::llm::{LlmClient, ScriptedLlm};

fn main() {
    // Fallback path: gold answer must appear in the produced answer after
    // normalization (lowercase, punctuation stripped, whitespace collapsed).
    let rule = Comparator::rule_only();
    let cases = [
        ("The 2023 winner was Narges Mohammadi.", "Narges Mohammadi"),
        ("I believe Australia took the cup.", "Australia"),
        ("It were ten teams, I think.", "10 teams"),
    ];
    println!("rule fallback:");
    for (produced, gold) in cases {
        let verdict = rule.compare(produced, gold);
        println!("  produced {produced:?} vs gold {gold:?} -> matched={}", verdict.matched);
    }

    // Judge path: the fixed comparison prompt goes to a judge LLM and the
    // judge's reply is classified by a sentiment model; positive = matched.
    println!("\nfilled judge prompt:");
    println!("{}", fill_comparison_prompt("The capital is Paris.", "Paris"));

    let judge: Arc<dyn LlmClient> = Arc::new(ScriptedLlm::new(vec![
        "Yes, the answer is available in the Prompt1 .".to_string(),
    ]));
    let sentiment: Arc<dyn SentimentClassifier> =
        Arc::new(ScriptedSentiment::new(vec![SentimentLabel::Positive]));
    let verdict = Comparator::with_judge(judge, sentiment).compare("The capital is Paris.", "Paris");
    println!(
        "judge path -> matched={} method={} sentiment={} judge_text={:?}",
        verdict.matched,
        verdict.method.name(),
        verdict.sentiment_label.name(),
        verdict.judge_text
    );
}
