//! Answer comparison, dataset preprocessing, metrics, and the benchmark
//! runner.

mod comparator;
mod metrics;
mod runner;
mod wikiqa;

pub use comparator::{
    fill_comparison_prompt, normalize, CompareMethod, Comparator, MatchVerdict, RemoteSentiment,
    ScriptedSentiment, SentimentClassifier, SentimentLabel, COMPARISON_PROMPT_TEMPLATE,
};
pub use metrics::{compute_metrics, compute_metrics_from_matches, MetricsReport};
pub use runner::{
    answer_question, metrics_from_records, read_records_csv, run_benchmark, write_record_header,
    write_record_row, EvalMode, EvalRecord, QuestionPipeline, RECORD_CSV_HEADER,
};
pub use wikiqa::{
    load_qa_csv, load_qa_csv_reader, preprocess_wikiqa, preprocess_wikiqa_file, write_qa_csv,
    QAPair,
};

use crate::agent::AgentError;
use crate::llm::LlmError;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("empty input")]
    EmptyInput,
    #[error("missing column: {0}")]
    MissingColumn(&'static str),
    #[error("bad header: expected {expected}, found {found}")]
    BadHeader { expected: &'static str, found: String },
    #[error("row at line {line} is missing fields")]
    ShortRow { line: usize },
    #[error("empty field at line {line}")]
    EmptyField { line: usize },
    #[error("non-binary label {found:?} at line {line}")]
    NonBinaryLabel { line: usize, found: String },
    #[error("csv error: {0}")]
    Csv(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("sentiment classifier failure: {0}")]
    Sentiment(String),
    #[error("{0} mode requires a toolset")]
    MissingToolset(EvalMode),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Agent(#[from] AgentError),
}
