//! The benchmark sweep: run every question through one pipeline mode, time
//! it, grade it, and report metrics.
//!
//! Questions run sequentially so per-question wall-clock timing stays
//! meaningful. Per-question pipeline errors are recorded as unmatched with
//! the error text and never abort the sweep. Records stream to the caller as
//! they complete, so an interrupted run can resume from the last completed
//! question.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::agent::{run_agent, AgentConfig, RunLogger};
use crate::llm::LlmClient;
use crate::tools::Toolset;

use super::comparator::{Comparator, MatchVerdict};
use super::metrics::{compute_metrics_from_matches, MetricsReport};
use super::wikiqa::QAPair;
use super::EvalError;

/// The three pipeline modes compared by the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Ask the LLM directly; no tools touched.
    Offline,
    /// Agent with one tool per web source.
    Sequential,
    /// Agent with the fused multi-source tool.
    Merged,
}

impl EvalMode {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::Offline => "offline",
            EvalMode::Sequential => "sequential",
            EvalMode::Merged => "merged",
        }
    }
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "offline" => Ok(EvalMode::Offline),
            "sequential" => Ok(EvalMode::Sequential),
            "merged" => Ok(EvalMode::Merged),
            other => Err(format!("unknown mode: {other} (expected offline|sequential|merged)")),
        }
    }
}

/// Per-question benchmark result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    pub question: String,
    pub gold_answer: String,
    pub produced_answer: String,
    pub verdict: MatchVerdict,
    pub mode: EvalMode,
    pub elapsed_s: f64,
}

/// Everything needed to answer one question in one mode.
pub struct QuestionPipeline<'a> {
    pub llm: &'a dyn LlmClient,
    /// None for offline mode; required for the agent modes.
    pub tools: Option<&'a Toolset>,
    pub agent_config: &'a AgentConfig,
    pub logger: &'a RunLogger,
}

/// Runs one question through `mode`, returning the answer and the number of
/// tool-invocation steps taken.
pub fn answer_question(
    question: &str,
    mode: EvalMode,
    pipeline: &QuestionPipeline<'_>,
) -> Result<(String, usize), EvalError> {
    match mode {
        EvalMode::Offline => {
            let answer = pipeline.llm.complete(question)?;
            Ok((answer, 0))
        }
        EvalMode::Sequential | EvalMode::Merged => {
            let tools = pipeline.tools.ok_or(EvalError::MissingToolset(mode))?;
            let result =
                run_agent(question, tools, pipeline.llm, pipeline.agent_config, pipeline.logger)?;
            Ok((result.answer, result.steps.len()))
        }
    }
}

/// Sweeps `dataset` through `mode`, invoking `on_record` after each completed
/// question (the incremental-write hook), and computes the final report.
pub fn run_benchmark(
    dataset: &[QAPair],
    mode: EvalMode,
    pipeline: &QuestionPipeline<'_>,
    comparator: &Comparator,
    mut on_record: impl FnMut(&EvalRecord) -> Result<(), EvalError>,
) -> Result<(Vec<EvalRecord>, MetricsReport), EvalError> {
    if dataset.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut records = Vec::with_capacity(dataset.len());
    for pair in dataset {
        let started = Instant::now();
        let record = match answer_question(&pair.question, mode, pipeline) {
            Ok((produced, _steps)) => {
                let verdict = comparator.compare(&produced, &pair.answer);
                EvalRecord {
                    question: pair.question.clone(),
                    gold_answer: pair.answer.clone(),
                    produced_answer: produced,
                    verdict,
                    mode,
                    elapsed_s: started.elapsed().as_secs_f64(),
                }
            }
            // Errors grade as unmatched with the error text; the sweep goes on.
            Err(err) => EvalRecord {
                question: pair.question.clone(),
                gold_answer: pair.answer.clone(),
                produced_answer: format!("error: {err}"),
                verdict: MatchVerdict {
                    matched: false,
                    judge_text: String::new(),
                    sentiment_label: super::comparator::SentimentLabel::Neutral,
                    method: super::comparator::CompareMethod::RuleFallback,
                },
                mode,
                elapsed_s: started.elapsed().as_secs_f64(),
            },
        };
        on_record(&record)?;
        records.push(record);
    }
    let report = metrics_from_records(&records)?;
    Ok((records, report))
}

/// Recomputes the metrics report (including mean elapsed time) from records.
pub fn metrics_from_records(records: &[EvalRecord]) -> Result<MetricsReport, EvalError> {
    let matched: Vec<bool> = records.iter().map(|r| r.verdict.matched).collect();
    let mean_elapsed_s =
        records.iter().map(|r| r.elapsed_s).sum::<f64>() / records.len().max(1) as f64;
    compute_metrics_from_matches(&matched, mean_elapsed_s)
}

/// Fixed record CSV column order, kept stable for diffable reports.
pub const RECORD_CSV_HEADER: [&str; 7] =
    ["question", "gold_answer", "produced_answer", "matched", "method", "mode", "elapsed_s"];

pub fn write_record_header<W: std::io::Write>(writer: &mut csv::Writer<W>) -> Result<(), EvalError> {
    writer.write_record(RECORD_CSV_HEADER).map_err(|e| EvalError::Csv(e.to_string()))
}

pub fn write_record_row<W: std::io::Write>(
    writer: &mut csv::Writer<W>,
    record: &EvalRecord,
) -> Result<(), EvalError> {
    writer
        .write_record([
            record.question.as_str(),
            record.gold_answer.as_str(),
            record.produced_answer.as_str(),
            if record.verdict.matched { "true" } else { "false" },
            record.verdict.method.name(),
            record.mode.name(),
            &format!("{:.6}", record.elapsed_s),
        ])
        .map_err(|e| EvalError::Csv(e.to_string()))
}

/// Reads records back from the CSV written by [`write_record_row`]. The
/// judge text and sentiment label are not part of the archival schema, so
/// reconstructed verdicts carry an empty judge text and a neutral label.
pub fn read_records_csv(path: impl AsRef<std::path::Path>) -> Result<Vec<EvalRecord>, EvalError> {
    use super::comparator::{CompareMethod, SentimentLabel};
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| EvalError::Io(format!("{}: {e}", path.as_ref().display())))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers().map_err(|e| EvalError::Csv(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != RECORD_CSV_HEADER {
        return Err(EvalError::BadHeader {
            expected: "question,gold_answer,produced_answer,matched,method,mode,elapsed_s",
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut records = Vec::new();
    for (at, row) in reader.records().enumerate() {
        let row = row.map_err(|e| EvalError::Csv(e.to_string()))?;
        let line = at + 2;
        let field = |col: usize| row.get(col).ok_or(EvalError::ShortRow { line });
        let matched = field(3)? == "true";
        let method = match field(4)? {
            "llm_sentiment" => CompareMethod::LlmSentiment,
            _ => CompareMethod::RuleFallback,
        };
        let mode: EvalMode =
            field(5)?.parse().map_err(|e: String| EvalError::Csv(format!("line {line}: {e}")))?;
        let elapsed_s = field(6)?
            .parse::<f64>()
            .map_err(|e| EvalError::Csv(format!("line {line}: {e}")))?;
        records.push(EvalRecord {
            question: field(0)?.to_string(),
            gold_answer: field(1)?.to_string(),
            produced_answer: field(2)?.to_string(),
            verdict: MatchVerdict {
                matched,
                judge_text: String::new(),
                sentiment_label: SentimentLabel::Neutral,
                method,
            },
            mode,
            elapsed_s,
        });
    }
    Ok(records)
}
