//! Application configuration: a single TOML tree with env-var overrides for
//! secrets, so a benchmark run can be archived alongside its exact config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agent::AgentConfig;
use crate::embeddings::EmbedderSpec;
use crate::llm::LlmSpec;
use crate::sources::{FixtureMode, SourceConfig};
use crate::tools::MergeConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {detail}")]
    Read { path: PathBuf, detail: String },
    #[error("cannot parse config {path}: {detail}")]
    Parse { path: PathBuf, detail: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SourcesConfig {
    pub mode: FixtureMode,
    pub fixture_root: PathBuf,
    #[serde(flatten)]
    pub client: SourceConfig,
}

impl Default for SourcesConfig {
    fn default() -> Self {
        Self {
            mode: FixtureMode::Replay,
            fixture_root: PathBuf::from("fixtures"),
            client: SourceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PathsConfig {
    pub report_dir: PathBuf,
}

impl Default for PathsConfig {
    fn default() -> Self {
        Self { report_dir: PathBuf::from("reports") }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AppConfig {
    pub llm: LlmSpec,
    pub embedder: EmbedderSpec,
    pub merge: MergeConfig,
    pub agent: AgentConfig,
    pub sources: SourcesConfig,
    pub paths: PathsConfig,
    /// Per-tool description overrides keyed by tool name.
    pub tool_descriptions: BTreeMap<String, String>,
}

impl AppConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.to_path_buf(), detail: e.to_string() })?;
        let config: AppConfig = toml::from_str(&raw)
            .map_err(|e| ConfigError::Parse { path: path.to_path_buf(), detail: e.to_string() })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.llm.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.embedder.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.merge.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.agent.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::EmbedderKind;
    use crate::llm::LlmKind;

    #[test]
    fn defaults_validate() {
        AppConfig::default().validate().unwrap();
    }

    #[test]
    fn a_minimal_toml_tree_parses_with_defaults_filled_in() {
        let raw = r#"
[llm]
kind = "scripted_stub"
script = ["Final Answer: ok"]

[embedder]
kind = "deterministic_test"
dimension = 64

[sources]
mode = "replay"
fixture_root = "my-fixtures"
timeout_ms = 5000

[merge]
min_chunks = 5

[tool_descriptions]
calculator = "custom text"
"#;
        let config: AppConfig = toml::from_str(raw).unwrap();
        config.validate().unwrap();
        assert_eq!(config.llm.kind, LlmKind::ScriptedStub);
        assert_eq!(config.embedder.kind, EmbedderKind::DeterministicTest);
        assert_eq!(config.embedder.dimension, 64);
        assert_eq!(config.sources.mode, FixtureMode::Replay);
        assert_eq!(config.sources.fixture_root, PathBuf::from("my-fixtures"));
        assert_eq!(config.sources.client.timeout_ms, 5000);
        assert_eq!(config.merge.min_chunks, 5);
        assert_eq!(config.merge.splitter.chunk_size, 400);
        assert_eq!(config.agent.max_iterations, 6);
        assert_eq!(config.tool_descriptions["calculator"], "custom text");
    }

    #[test]
    fn invalid_sections_are_rejected() {
        let raw = "[merge]\nmin_chunks = 0\n";
        let config: AppConfig = toml::from_str(raw).unwrap();
        assert!(config.validate().is_err());
    }
}
