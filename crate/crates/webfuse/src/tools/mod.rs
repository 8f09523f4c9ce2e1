//! The agent-facing tool abstraction and the two toolset layouts.
//!
//! Sequential mode exposes each web source as its own tool, so tool choice
//! depends solely on the descriptions the agent reads. Merged mode fuses the
//! web sources into one `merged_search` tool. Both modes share the
//! calculator. Every tool takes a single string input.

mod calculator;
mod merged;

pub use calculator::{calculator, evaluate, CalcError};
pub use merged::{
    merged_search, FetchOutcome, MergeConfig, MergedSearchOutput, SourceOutcome,
    SOURCE_INSERTION_ORDER,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::embeddings::{EmbedError, Embedder};
use crate::sources::{SourceClient, SourceClients, SourceError};
use crate::vector_store::StoreError;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("invalid tool configuration: {0}")]
    InvalidConfig(String),
    #[error("duplicate tool name: {0}")]
    DuplicateToolName(String),
    #[error("all sources returned no evidence; answer from what you already know")]
    EmptyEvidence,
}

/// Name, description, and single-string input contract of one tool. The
/// description is the exact prose the agent sees when choosing tools.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToolSpec {
    pub name: String,
    pub description: String,
}

impl ToolSpec {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        Self { name: name.into(), description: description.into() }
    }
}

/// A callable the agent can invoke with a single string input.
pub trait Tool: Send + Sync {
    fn spec(&self) -> &ToolSpec;

    fn call(&self, input: &str) -> Result<String, ToolError>;

    fn name(&self) -> &str {
        &self.spec().name
    }
}

/// A validated set of tools with unique, non-empty names.
pub struct Toolset {
    tools: Vec<Box<dyn Tool>>,
}

impl Toolset {
    pub fn new(tools: Vec<Box<dyn Tool>>) -> Result<Self, ToolError> {
        let mut seen: Vec<&str> = Vec::new();
        for tool in &tools {
            let spec = tool.spec();
            if spec.name.is_empty() {
                return Err(ToolError::InvalidConfig("tool name must not be empty".into()));
            }
            if spec.description.is_empty() {
                return Err(ToolError::InvalidConfig(format!(
                    "tool {} must have a description",
                    spec.name
                )));
            }
            if seen.contains(&spec.name.as_str()) {
                return Err(ToolError::DuplicateToolName(spec.name.clone()));
            }
            seen.push(&spec.name);
        }
        Ok(Self { tools })
    }

    pub fn get(&self, name: &str) -> Option<&dyn Tool> {
        self.tools.iter().find(|tool| tool.name() == name).map(|tool| tool.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.tools.iter().map(|tool| tool.name()).collect()
    }

    pub fn specs(&self) -> impl Iterator<Item = &ToolSpec> {
        self.tools.iter().map(|tool| tool.spec())
    }

    pub fn len(&self) -> usize {
        self.tools.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty()
    }
}

/// Which toolset layout the agent runs with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToolMode {
    /// One tool per web source plus the calculator (four tools).
    Sequential,
    /// One fused web tool plus the calculator (two tools).
    Merged,
}

/// Default tool descriptions; overridable through the config file.
pub const DEFAULT_TOOL_DESCRIPTIONS: &[(&str, &str)] = &[
    (
        "google",
        "Searches Google and returns the answer box, knowledge graph, and top organic result snippets. Input: a plain-text search query.",
    ),
    (
        "duckduckgo",
        "Searches DuckDuckGo and returns the abstract and related result snippets. Input: a plain-text search query.",
    ),
    (
        "wikipedia",
        "Looks up the best-matching Wikipedia page and returns its lead summary. Input: a topic or question.",
    ),
    (
        "calculator",
        "Evaluates an arithmetic expression with +, -, *, / and parentheses and returns the numeric result. Input: the expression, e.g. 2+2.",
    ),
    (
        "merged_search",
        "Searches DuckDuckGo, Google, and Wikipedia at once and returns the most relevant passages across all of them. Input: a plain-text search query.",
    ),
];

fn description_for(name: &str, overrides: &BTreeMap<String, String>) -> String {
    if let Some(text) = overrides.get(name) {
        return text.clone();
    }
    DEFAULT_TOOL_DESCRIPTIONS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d.to_string())
        .unwrap_or_else(|| name.to_string())
}

/// One web source exposed as an agent tool.
pub struct SearchTool {
    client: Arc<dyn SourceClient>,
    spec: ToolSpec,
}

impl SearchTool {
    pub fn new(client: Arc<dyn SourceClient>, description: impl Into<String>) -> Self {
        let spec = ToolSpec::new(client.source().name(), description);
        Self { client, spec }
    }
}

impl Tool for SearchTool {
    fn spec(&self) -> &ToolSpec {
        &self.spec
    }

    fn call(&self, input: &str) -> Result<String, ToolError> {
        Ok(self.client.fetch(input)?.text)
    }
}

/// The fused multi-source retrieval tool.
pub struct MergedSearchTool {
    clients: SourceClients,
    embedder: Arc<dyn Embedder>,
    config: MergeConfig,
    spec: ToolSpec,
}

impl MergedSearchTool {
    pub fn new(
        clients: SourceClients,
        embedder: Arc<dyn Embedder>,
        config: MergeConfig,
        description: impl Into<String>,
    ) -> Self {
        Self { clients, embedder, config, spec: ToolSpec::new("merged_search", description) }
    }
}

impl Tool for MergedSearchTool {
    fn spec(&self) -> &ToolSpec {
        &self.spec
    }

    fn call(&self, input: &str) -> Result<String, ToolError> {
        Ok(merged_search(input, &self.config, &self.clients, self.embedder.clone())?.text)
    }
}

pub struct CalculatorTool {
    spec: ToolSpec,
}

impl CalculatorTool {
    pub fn new(description: impl Into<String>) -> Self {
        Self { spec: ToolSpec::new("calculator", description) }
    }
}

impl Tool for CalculatorTool {
    fn spec(&self) -> &ToolSpec {
        &self.spec
    }

    fn call(&self, input: &str) -> Result<String, ToolError> {
        Ok(calculator(input.trim())?)
    }
}

/// Builds the toolset for `mode`. Sequential: google, duckduckgo, wikipedia,
/// calculator. Merged: merged_search, calculator.
pub fn make_toolset(
    mode: ToolMode,
    clients: &SourceClients,
    embedder: Arc<dyn Embedder>,
    merge: MergeConfig,
    overrides: &BTreeMap<String, String>,
) -> Result<Toolset, ToolError> {
    let tools: Vec<Box<dyn Tool>> = match mode {
        ToolMode::Sequential => vec![
            Box::new(SearchTool::new(
                clients.google.clone(),
                description_for("google", overrides),
            )),
            Box::new(SearchTool::new(
                clients.duckduckgo.clone(),
                description_for("duckduckgo", overrides),
            )),
            Box::new(SearchTool::new(
                clients.wikipedia.clone(),
                description_for("wikipedia", overrides),
            )),
            Box::new(CalculatorTool::new(description_for("calculator", overrides))),
        ],
        ToolMode::Merged => vec![
            Box::new(MergedSearchTool::new(
                clients.clone(),
                embedder,
                merge,
                description_for("merged_search", overrides),
            )),
            Box::new(CalculatorTool::new(description_for("calculator", overrides))),
        ],
    };
    Toolset::new(tools)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::DeterministicEmbedder;
    use crate::sources::{FixtureMode, FixtureStore, SourceConfig};

    fn toolset(mode: ToolMode) -> Toolset {
        let dir = std::env::temp_dir();
        let store = Arc::new(FixtureStore::new(dir, FixtureMode::Replay));
        let clients = SourceClients::new(store, SourceConfig::default());
        make_toolset(
            mode,
            &clients,
            Arc::new(DeterministicEmbedder::new(16)),
            MergeConfig::default(),
            &BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn merged_mode_exposes_exactly_two_tools() {
        let tools = toolset(ToolMode::Merged);
        assert_eq!(tools.names(), vec!["merged_search", "calculator"]);
    }

    #[test]
    fn sequential_mode_exposes_four_distinct_tools() {
        let tools = toolset(ToolMode::Sequential);
        let names = tools.names();
        assert_eq!(names, vec!["google", "duckduckgo", "wikipedia", "calculator"]);
        let mut unique = names.clone();
        unique.dedup();
        assert_eq!(unique.len(), 4);
    }

    #[test]
    fn both_modes_share_calculator_behavior() {
        for mode in [ToolMode::Sequential, ToolMode::Merged] {
            let tools = toolset(mode);
            let calc = tools.get("calculator").unwrap();
            assert_eq!(calc.call("2+2").unwrap(), "4");
        }
    }

    #[test]
    fn description_overrides_take_effect() {
        let overrides =
            BTreeMap::from([("calculator".to_string(), "custom calculator text".to_string())]);
        let tool = CalculatorTool::new(description_for("calculator", &overrides));
        assert_eq!(tool.spec().description, "custom calculator text");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let tools: Vec<Box<dyn Tool>> =
            vec![Box::new(CalculatorTool::new("a")), Box::new(CalculatorTool::new("b"))];
        assert!(matches!(Toolset::new(tools), Err(ToolError::DuplicateToolName(_))));
    }
}
