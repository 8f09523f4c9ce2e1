//! Command-line entry point: ask, bench, preprocess, fixtures.
//!
//! Exit code 0 only when the subcommand's postcondition fully held. In
//! replay mode no subcommand performs network activity.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::agent::{run_agent, AgentError, RunLogger};
use crate::chunking::Source;
use crate::config::{AppConfig, ConfigError};
use crate::embeddings::{EmbedError, Embedder};
use crate::eval::{
    load_qa_csv, metrics_from_records, preprocess_wikiqa_file, read_records_csv, run_benchmark,
    write_qa_csv, write_record_header, write_record_row, Comparator, EvalError, EvalMode,
    QuestionPipeline, RemoteSentiment,
};
use crate::llm::{LlmClient, LlmError};
use crate::sources::{
    FixtureMode, FixtureStore, SourceClients, SourceError, SERPER_API_KEY_VAR,
};
use crate::tools::{make_toolset, ToolError, ToolMode, Toolset};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Tool(#[from] ToolError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(name = "webfuse", version, about = "Fused multi-source web retrieval for QA agents")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Path to a TOML config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Log agent events (LLM calls, parses, tool calls) to stderr.
    #[arg(long)]
    verbose: bool,
    /// Log agent events to this file as JSON lines.
    #[arg(long)]
    log_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Answer one question and print the answer, step trace, and timing.
    Ask {
        question: String,
        /// offline, sequential, or merged.
        #[arg(long, default_value = "merged")]
        mode: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a question,answer CSV dataset through one mode and write the
    /// record CSV and metrics JSON report.
    Bench {
        #[arg(long)]
        dataset: PathBuf,
        /// offline, sequential, or merged.
        #[arg(long, default_value = "merged")]
        mode: String,
        /// Output directory for records.csv and report.json.
        #[arg(long)]
        out: PathBuf,
        /// Continue an interrupted run from the last completed question.
        #[arg(long)]
        resume: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Convert WikiQA TSV splits into question,answer CSV files.
    Preprocess {
        /// Directory holding WikiQA-train.tsv / WikiQA-test.tsv / WikiQA-dev.tsv.
        #[arg(long)]
        wikiqa_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Populate or validate the record/replay fixture store.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Fetch every query live from every source and store the payloads.
    Record {
        /// Text file with one query per line.
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check that every (source, query) fixture exists and parses.
    ReplayVerify {
        /// Text file with one query per line.
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Ask { question, mode, common } => cmd_ask(&question, &mode, &common),
        Command::Bench { dataset, mode, out, resume, common } => {
            cmd_bench(&dataset, &mode, &out, resume, &common)
        }
        Command::Preprocess { wikiqa_dir, out } => cmd_preprocess(&wikiqa_dir, &out),
        Command::Fixtures { action } => match action {
            FixturesAction::Record { queries, config } => {
                cmd_fixtures_record(&queries, config.as_deref())
            }
            FixturesAction::ReplayVerify { queries, config } => {
                cmd_fixtures_verify(&queries, config.as_deref())
            }
        },
    }
}

fn load_config(path: Option<&Path>) -> Result<AppConfig, CliError> {
    match path {
        Some(path) => Ok(AppConfig::load(path)?),
        None => {
            let config = AppConfig::default();
            config.validate()?;
            Ok(config)
        }
    }
}

fn parse_mode(mode: &str) -> Result<EvalMode, CliError> {
    mode.parse().map_err(CliError::Usage)
}

fn make_logger(common: &CommonOpts) -> Result<RunLogger, CliError> {
    if let Some(path) = &common.log_file {
        let file = std::fs::File::create(path)?;
        return Ok(RunLogger::to_writer(Box::new(file)));
    }
    if common.verbose {
        return Ok(RunLogger::stderr());
    }
    Ok(RunLogger::null())
}

/// The constructed pipeline pieces shared by ask and bench.
struct Runtime {
    config: AppConfig,
    clients: SourceClients,
    embedder: Arc<dyn Embedder>,
    llm: Box<dyn LlmClient>,
}

impl Runtime {
    fn build(config: AppConfig) -> Result<Self, CliError> {
        let store =
            Arc::new(FixtureStore::new(config.sources.fixture_root.clone(), config.sources.mode));
        let clients = SourceClients::new(store, config.sources.client.clone());
        let embedder: Arc<dyn Embedder> = Arc::from(config.embedder.build()?);
        let llm = config.llm.build()?;
        Ok(Self { config, clients, embedder, llm })
    }

    fn toolset_for(&self, mode: EvalMode) -> Result<Option<Toolset>, CliError> {
        let tool_mode = match mode {
            EvalMode::Offline => return Ok(None),
            EvalMode::Sequential => ToolMode::Sequential,
            EvalMode::Merged => ToolMode::Merged,
        };
        Ok(Some(make_toolset(
            tool_mode,
            &self.clients,
            self.embedder.clone(),
            self.config.merge.clone(),
            &self.config.tool_descriptions,
        )?))
    }

    fn comparator(&self) -> Comparator {
        // The judge/sentiment pair is only wired up when a sentiment endpoint
        // is configured; otherwise grading uses the deterministic rule.
        match std::env::var("SENTIMENT_ENDPOINT") {
            Ok(endpoint) if !endpoint.is_empty() => {
                let judge: Arc<dyn LlmClient> = match self.config.llm.build() {
                    Ok(client) => Arc::from(client),
                    Err(_) => return Comparator::rule_only(),
                };
                let sentiment =
                    Arc::new(RemoteSentiment::new(endpoint, self.config.sources.client.timeout_ms));
                Comparator::with_judge(judge, sentiment)
            }
            _ => Comparator::rule_only(),
        }
    }
}

fn cmd_ask(question: &str, mode: &str, common: &CommonOpts) -> Result<ExitCode, CliError> {
    let mode = parse_mode(mode)?;
    let config = load_config(common.config.as_deref())?;
    let runtime = Runtime::build(config)?;
    let logger = make_logger(common)?;
    let started = Instant::now();
    match mode {
        EvalMode::Offline => {
            let answer = runtime.llm.complete(question)?;
            println!("answer: {answer}");
            println!("steps: 0");
            println!("elapsed_s: {:.3}", started.elapsed().as_secs_f64());
        }
        EvalMode::Sequential | EvalMode::Merged => {
            let tools = runtime.toolset_for(mode)?.expect("agent modes have toolsets");
            let result = run_agent(
                question,
                &tools,
                runtime.llm.as_ref(),
                &runtime.config.agent,
                &logger,
            )?;
            println!("answer: {}", result.answer);
            println!("steps: {}", result.steps.len());
            for (at, step) in result.steps.iter().enumerate() {
                println!(
                    "  {}. {}({}) -> {}",
                    at + 1,
                    step.action.tool,
                    step.action.tool_input,
                    preview(&step.observation)
                );
            }
            println!("elapsed_s: {:.3}", result.elapsed.as_secs_f64());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn preview(text: &str) -> String {
    let flat = text.replace('\n', " ");
    if flat.chars().count() <= 160 {
        return flat;
    }
    let cut: String = flat.chars().take(160).collect();
    format!("{cut}…")
}

fn cmd_bench(
    dataset_path: &Path,
    mode: &str,
    out: &Path,
    resume: bool,
    common: &CommonOpts,
) -> Result<ExitCode, CliError> {
    let mode = parse_mode(mode)?;
    // Validate inputs before creating any output files.
    let dataset = load_qa_csv(dataset_path)?;
    let config = load_config(common.config.as_deref())?;
    let runtime = Runtime::build(config)?;
    let logger = make_logger(common)?;

    std::fs::create_dir_all(out)?;
    let records_path = out.join("records.csv");
    let report_path = out.join("report.json");

    let prior = if resume && records_path.is_file() {
        read_records_csv(&records_path)?
    } else {
        Vec::new()
    };
    if prior.len() > dataset.len() {
        return Err(CliError::Usage(format!(
            "resume found {} completed records but the dataset has only {} questions",
            prior.len(),
            dataset.len()
        )));
    }
    if resume && prior.len() == dataset.len() {
        let report = metrics_from_records(&prior)?;
        write_report(&report_path, &report)?;
        println!("already complete: {}", report.summary_line());
        return Ok(ExitCode::SUCCESS);
    }

    let remaining = &dataset[prior.len()..];
    let mut writer = if prior.is_empty() {
        let file = std::fs::File::create(&records_path)?;
        let mut writer = csv::Writer::from_writer(file);
        write_record_header(&mut writer)?;
        writer.flush()?;
        writer
    } else {
        let file = std::fs::OpenOptions::new().append(true).open(&records_path)?;
        csv::Writer::from_writer(file)
    };

    let tools = runtime.toolset_for(mode)?;
    let comparator = runtime.comparator();
    let pipeline = QuestionPipeline {
        llm: runtime.llm.as_ref(),
        tools: tools.as_ref(),
        agent_config: &runtime.config.agent,
        logger: &logger,
    };
    let (new_records, _) =
        run_benchmark(remaining, mode, &pipeline, &comparator, |record| {
            write_record_row(&mut writer, record)?;
            writer.flush().map_err(|e| EvalError::Io(e.to_string()))?;
            Ok(())
        })?;

    let mut all_records = prior;
    all_records.extend(new_records);
    let report = metrics_from_records(&all_records)?;
    write_report(&report_path, &report)?;
    println!("{}", report.summary_line());
    Ok(ExitCode::SUCCESS)
}

fn write_report(path: &Path, report: &crate::eval::MetricsReport) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(path, format!("{json}\n"))?;
    Ok(())
}

const WIKIQA_SPLITS: [(&str, &[&str]); 3] = [
    ("train", &["WikiQA-train.tsv", "wikiqa-train.tsv"]),
    ("test", &["WikiQA-test.tsv", "wikiqa-test.tsv"]),
    ("validation", &["WikiQA-dev.tsv", "wikiqa-dev.tsv", "WikiQA-validation.tsv"]),
];

fn cmd_preprocess(wikiqa_dir: &Path, out: &Path) -> Result<ExitCode, CliError> {
    if !wikiqa_dir.is_dir() {
        return Err(CliError::Usage(format!("{} is not a directory", wikiqa_dir.display())));
    }
    let mut found_any = false;
    std::fs::create_dir_all(out)?;
    for (split, candidates) in WIKIQA_SPLITS {
        let Some(path) = candidates.iter().map(|name| wikiqa_dir.join(name)).find(|p| p.is_file())
        else {
            continue;
        };
        found_any = true;
        let pairs = preprocess_wikiqa_file(&path)?;
        let out_path = out.join(format!("wikiqa-{split}.csv"));
        write_qa_csv(&pairs, &out_path)?;
        println!("{split}: {} pairs -> {}", pairs.len(), out_path.display());
    }
    if !found_any {
        return Err(CliError::Usage(format!(
            "no WikiQA split files found under {}",
            wikiqa_dir.display()
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn read_queries(path: &Path) -> Result<Vec<String>, CliError> {
    let raw = std::fs::read_to_string(path)?;
    let queries: Vec<String> =
        raw.lines().map(str::trim).filter(|line| !line.is_empty()).map(String::from).collect();
    if queries.is_empty() {
        return Err(CliError::Usage(format!("no queries in {}", path.display())));
    }
    Ok(queries)
}

fn cmd_fixtures_record(queries_path: &Path, config: Option<&Path>) -> Result<ExitCode, CliError> {
    let queries = read_queries(queries_path)?;
    let config = load_config(config)?;
    let store = Arc::new(FixtureStore::new(config.sources.fixture_root.clone(), FixtureMode::Record));
    let clients = SourceClients::new(store, config.sources.client.clone());
    let google_enabled = std::env::var(SERPER_API_KEY_VAR).is_ok();
    if !google_enabled {
        eprintln!("warning: {SERPER_API_KEY_VAR} not set; skipping google recordings");
    }
    let mut failures = 0usize;
    for query in &queries {
        for source in [Source::Duckduckgo, Source::Google, Source::Wikipedia] {
            if source == Source::Google && !google_enabled {
                continue;
            }
            let client = clients.get(source).expect("fetchable source");
            match client.fetch(query) {
                Ok(result) => {
                    println!("recorded {}/{} ({} chars)", source, query, result.text.chars().count())
                }
                Err(err) => {
                    failures += 1;
                    eprintln!("warning: {source}/{query}: {err}");
                }
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} recordings failed");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixtures_verify(queries_path: &Path, config: Option<&Path>) -> Result<ExitCode, CliError> {
    let queries = read_queries(queries_path)?;
    let config = load_config(config)?;
    let store = Arc::new(FixtureStore::new(config.sources.fixture_root.clone(), FixtureMode::Replay));
    let clients = SourceClients::new(store.clone(), config.sources.client.clone());
    let mut problems: Vec<String> = Vec::new();
    for query in &queries {
        for source in [Source::Duckduckgo, Source::Google, Source::Wikipedia] {
            let key = FixtureStore::key(source, query);
            if !store.exists(source, query) {
                problems.push(format!("missing: {key}"));
                continue;
            }
            let client = clients.get(source).expect("fetchable source");
            if let Err(err) = client.fetch(query) {
                problems.push(format!("corrupt: {key}: {err}"));
            }
        }
    }
    if problems.is_empty() {
        println!("all {} queries verified across 3 sources", queries.len());
        Ok(ExitCode::SUCCESS)
    } else {
        for problem in &problems {
            eprintln!("{problem}");
        }
        eprintln!("{} fixture problems", problems.len());
        Ok(ExitCode::FAILURE)
    }
}
