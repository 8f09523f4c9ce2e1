//! A complete offline benchmark sweep: three questions through the merged
//! pipeline with replayed fixtures and a scripted model, graded by the
//! fallback comparator, written as the record CSV plus the metrics JSON.
//!
//! Run with: cargo run --example benchmark_replay

use std::sync::Arc;

use webfuse::agent::{AgentConfig, RunLogger};
use webfuse::chunking::Source;
use webfuse::embeddings::DeterministicEmbedder;
use webfuse::eval::{
    run_benchmark, write_record_header, write_record_row, Comparator, EvalMode, QAPair,
    QuestionPipeline,
};
use webfuse::llm::ScriptedLlm;
use webfuse::sources::{FixtureMode, FixtureStore, SourceClients, SourceConfig};
use webfuse::tools::{make_toolset, MergeConfig, ToolMode};
use webfuse::{Embedder, SplitterConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = vec![
        QAPair::new("who got Nobel Prize 2023 in Peace ?", "Narges Mohammadi"),
        QAPair::new("who won 2023 Cricket World Cup?", "Australia"),
        QAPair::new("who is Ryan Michael Blaney's grandfather?", "Lou Blaney"),
    ];

    // Seed a throwaway fixture store so the whole run replays offline.
    let dir = tempfile::tempdir()?;
    let store = Arc::new(FixtureStore::new(dir.path().join("fixtures"), FixtureMode::Replay));
    for pair in &dataset {
        store.write(
            Source::Duckduckgo,
            &pair.question,
            &serde_json::json!({"AbstractText": format!("Coverage of {}", pair.question)}).to_string(),
        )?;
        store.write(
            Source::Google,
            &pair.question,
            &serde_json::json!({"answerBox": {"answer": format!("Reports name {}.", pair.answer)}})
                .to_string(),
        )?;
        store.write(Source::Wikipedia, &pair.question, &format!("Article\nIt was {}.", pair.answer))?;
    }

    // The scripted model: one merged_search call per question, then a final
    // answer (the second one deliberately wrong).
    let mut script = Vec::new();
    for (at, pair) in dataset.iter().enumerate() {
        script.push(format!("Thought: search\nAction: merged_search\nAction Input: {}", pair.question));
        let answer = if at == 1 { "I really could not say.".to_string() } else { pair.answer.clone() };
        script.push(format!("Final Answer: {answer}"));
    }
    let llm = ScriptedLlm::new(script);

    let clients = SourceClients::new(store, SourceConfig::default());
    let embedder: Arc<dyn Embedder> = Arc::new(DeterministicEmbedder::new(64));
    let merge = MergeConfig {
        min_chunks: 5,
        splitter: SplitterConfig::with_sizes(200, 50)?,
        ..MergeConfig::default()
    };
    let tools =
        make_toolset(ToolMode::Merged, &clients, embedder, merge, &Default::default())?;
    let agent_config = AgentConfig::default();
    let logger = RunLogger::null();
    let pipeline = QuestionPipeline {
        llm: &llm,
        tools: Some(&tools),
        agent_config: &agent_config,
        logger: &logger,
    };

    let records_path = dir.path().join("records.csv");
    let mut writer = csv::Writer::from_path(&records_path)?;
    write_record_header(&mut writer)?;
    let (records, report) =
        run_benchmark(&dataset, EvalMode::Merged, &pipeline, &Comparator::rule_only(), |record| {
            write_record_row(&mut writer, record)?;
            Ok(())
        })?;
    writer.flush()?;

    for record in &records {
        println!(
            "[{}] matched={} ({:.3}s) {} -> {}",
            record.mode, record.verdict.matched, record.elapsed_s, record.question,
            record.produced_answer
        );
    }
    println!("\nsummary: {}", report.summary_line());
    println!("\nrecord csv ({}):", records_path.display());
    print!("{}", std::fs::read_to_string(&records_path)?);
    println!("\nmetrics json:\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
