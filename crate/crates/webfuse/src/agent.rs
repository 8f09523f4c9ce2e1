//! Zero-shot ReAct agent executor.
//!
//! Prompt construction, parsing of model output into actions, and the action
//! loop: get an action, run the tool, feed the observation back, repeat until
//! the model produces a final answer. An unknown tool name, a tool error,
//! and unparsable model output each become corrective observations rather
//! than crashes, and the loop always terminates within `max_iterations` tool
//! invocations.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::llm::{LlmClient, LlmError};
use crate::tools::Toolset;

pub const DEFAULT_MAX_ITERATIONS: usize = 6;

/// Corrective parse retries before the run errors out.
pub const DEFAULT_MAX_PARSE_RETRIES: usize = 2;

pub const DEFAULT_PROMPT_TEMPLATE: &str = "\
Answer the following question as well as you can. You have access to the following tools:

{tools}

Use the following format:

Question: the question you must answer
Thought: reason about what to do next
Action: the tool to use, exactly one of [{tool_names}]
Action Input: the input to pass to the tool
Observation: the result of the tool
... (Thought/Action/Action Input/Observation can repeat)
Thought: I now know the final answer
Final Answer: the answer to the original question

Begin!

Question: {question}
{scratchpad}";

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error("agent requires a non-empty toolset")]
    EmptyToolset,
    #[error("prompt template must contain {{tools}}, {{question}}, and {{scratchpad}} slots")]
    BadTemplate,
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("model output could not be parsed into an action or final answer: {raw:?}")]
    Unparsable { raw: String },
    #[error("iteration limit of {max} reached without a final answer")]
    IterationLimit { max: usize, steps: Vec<AgentStep> },
}

/// A tool invocation chosen by the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentAction {
    pub tool: String,
    pub tool_input: String,
}

/// The final outcome of a run: a key-value map holding at least "output".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentFinish {
    pub return_values: BTreeMap<String, String>,
}

impl AgentFinish {
    pub fn from_output(output: impl Into<String>) -> Self {
        Self { return_values: BTreeMap::from([("output".to_string(), output.into())]) }
    }

    pub fn output(&self) -> &str {
        self.return_values.get("output").map(String::as_str).unwrap_or("")
    }
}

/// One completed loop step: the action taken and the observation returned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentStep {
    pub action: AgentAction,
    pub observation: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedOutput {
    Action(AgentAction),
    Finish(AgentFinish),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    pub max_iterations: usize,
    pub prompt_template: String,
    pub max_parse_retries: usize,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            prompt_template: DEFAULT_PROMPT_TEMPLATE.to_string(),
            max_parse_retries: DEFAULT_MAX_PARSE_RETRIES,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<(), AgentError> {
        let has_slots = ["{tools}", "{question}", "{scratchpad}"]
            .iter()
            .all(|slot| self.prompt_template.contains(slot));
        if !has_slots {
            return Err(AgentError::BadTemplate);
        }
        Ok(())
    }
}

/// Renders the full prompt: the tool list as "name: description" lines, the
/// ReAct format instructions, the question, and every prior step as Action /
/// Action Input / Observation lines in order.
pub fn build_prompt(
    question: &str,
    tools: &Toolset,
    steps: &[AgentStep],
    pending_observation: Option<&str>,
    config: &AgentConfig,
) -> String {
    let tool_lines = tools
        .specs()
        .map(|spec| format!("{}: {}", spec.name, spec.description))
        .collect::<Vec<_>>()
        .join("\n");
    let tool_names = tools.names().join(", ");
    let mut scratchpad = String::new();
    for step in steps {
        scratchpad.push_str(&format!(
            "Action: {}\nAction Input: {}\nObservation: {}\n",
            step.action.tool, step.action.tool_input, step.observation
        ));
    }
    if let Some(observation) = pending_observation {
        scratchpad.push_str(&format!("Observation: {observation}\n"));
    }
    config
        .prompt_template
        .replace("{tools}", &tool_lines)
        .replace("{tool_names}", &tool_names)
        .replace("{question}", question)
        .replace("{scratchpad}", &scratchpad)
}

/// Parses raw model output. A "Final Answer:" marker wins; otherwise an
/// "Action:" line followed by an "Action Input:" line forms an action.
/// Markers are case-sensitive; values are whitespace-tolerant.
pub fn parse_llm_output(text: &str) -> Result<ParsedOutput, AgentError> {
    if let Some(at) = text.find("Final Answer:") {
        let output = text[at + "Final Answer:".len()..].trim();
        return Ok(ParsedOutput::Finish(AgentFinish::from_output(output)));
    }
    let mut tool: Option<&str> = None;
    let mut tool_input: Option<&str> = None;
    for line in text.lines() {
        let line = line.trim();
        if tool.is_none() {
            if let Some(rest) = line.strip_prefix("Action:") {
                tool = Some(rest.trim());
            }
        } else if tool_input.is_none() {
            if let Some(rest) = line.strip_prefix("Action Input:") {
                tool_input = Some(rest.trim());
                break;
            }
        }
    }
    match (tool, tool_input) {
        (Some(tool), Some(tool_input)) if !tool.is_empty() => {
            Ok(ParsedOutput::Action(AgentAction {
                tool: tool.to_string(),
                tool_input: tool_input.to_string(),
            }))
        }
        _ => Err(AgentError::Unparsable { raw: text.to_string() }),
    }
}

/// Outcome of a completed run, including the timing instrumentation used by
/// benchmark reports.
#[derive(Debug, Clone)]
pub struct AgentRunResult {
    pub answer: String,
    pub steps: Vec<AgentStep>,
    /// Number of LLM calls made.
    pub iterations: usize,
    pub elapsed: Duration,
}

enum LogSink {
    Null,
    Stderr,
    Writer(Box<dyn Write + Send>),
}

/// Line-delimited structured run log: one JSON record per event with
/// timestamp, event kind, and payload.
pub struct RunLogger {
    sink: Mutex<LogSink>,
}

impl RunLogger {
    pub fn null() -> Self {
        Self { sink: Mutex::new(LogSink::Null) }
    }

    pub fn stderr() -> Self {
        Self { sink: Mutex::new(LogSink::Stderr) }
    }

    pub fn to_writer(writer: Box<dyn Write + Send>) -> Self {
        Self { sink: Mutex::new(LogSink::Writer(writer)) }
    }

    pub fn log(&self, kind: &str, payload: serde_json::Value) {
        let mut sink = self.sink.lock().expect("lock poisoned");
        if matches!(*sink, LogSink::Null) {
            return;
        }
        let ts_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        let record = serde_json::json!({"ts_ms": ts_ms, "kind": kind, "payload": payload});
        match &mut *sink {
            LogSink::Null => {}
            LogSink::Stderr => eprintln!("{record}"),
            LogSink::Writer(writer) => {
                let _ = writeln!(writer, "{record}");
                let _ = writer.flush();
            }
        }
    }
}

/// Runs the action loop until the model produces a final answer.
///
/// Defensive behavior, each as an observation rather than a crash:
/// an unknown tool name, a tool error, and unparsable model output (the
/// latter retried at most `max_parse_retries` times before erroring).
/// The run errors out once `max_iterations` tool invocations have completed
/// without a final answer, carrying the partial steps.
pub fn run_agent(
    question: &str,
    tools: &Toolset,
    llm: &dyn LlmClient,
    config: &AgentConfig,
    logger: &RunLogger,
) -> Result<AgentRunResult, AgentError> {
    if tools.is_empty() {
        return Err(AgentError::EmptyToolset);
    }
    config.validate()?;
    let start = Instant::now();
    let mut steps: Vec<AgentStep> = Vec::new();
    let mut iterations = 0usize;
    let mut parse_failures = 0usize;
    let mut pending_observation: Option<String> = None;
    loop {
        if steps.len() >= config.max_iterations {
            logger.log("iteration_limit", serde_json::json!({"max": config.max_iterations}));
            return Err(AgentError::IterationLimit { max: config.max_iterations, steps });
        }
        let prompt = build_prompt(question, tools, &steps, pending_observation.as_deref(), config);
        logger.log("llm_call", serde_json::json!({"chars": prompt.len()}));
        let raw = llm.complete(&prompt)?;
        iterations += 1;
        logger.log("llm_response", serde_json::json!({"text": raw}));
        match parse_llm_output(&raw) {
            Ok(ParsedOutput::Finish(finish)) => {
                logger.log("parse", serde_json::json!({"outcome": "finish"}));
                let answer = finish.output().to_string();
                logger.log("finish", serde_json::json!({"answer": answer}));
                return Ok(AgentRunResult { answer, steps, iterations, elapsed: start.elapsed() });
            }
            Ok(ParsedOutput::Action(action)) => {
                logger.log(
                    "parse",
                    serde_json::json!({"outcome": "action", "tool": action.tool}),
                );
                parse_failures = 0;
                pending_observation = None;
                logger.log(
                    "tool_call",
                    serde_json::json!({"tool": action.tool, "input": action.tool_input}),
                );
                let observation = match tools.get(&action.tool) {
                    None => format!(
                        "tool {} does not exist; available: {}",
                        action.tool,
                        tools.names().join(", ")
                    ),
                    Some(tool) => match tool.call(&action.tool_input) {
                        Ok(output) => output,
                        Err(err) => format!("tool {} error: {err}", action.tool),
                    },
                };
                logger.log("observation", serde_json::json!({"text": observation}));
                steps.push(AgentStep { action, observation });
            }
            Err(AgentError::Unparsable { raw }) => {
                logger.log("parse", serde_json::json!({"outcome": "unparsable"}));
                parse_failures += 1;
                if parse_failures > config.max_parse_retries {
                    return Err(AgentError::Unparsable { raw });
                }
                pending_observation = Some(
                    "your last response could not be parsed; respond with either \
                     'Action: <tool name>' followed by 'Action Input: <input>', or \
                     'Final Answer: <answer>'"
                        .to_string(),
                );
            }
            Err(other) => return Err(other),
        }
    }
}
