//! Google search via the Serper API.

use std::sync::Arc;

use serde::Deserialize;

use crate::chunking::Source;
use crate::net;

use super::fixtures::{FixtureMode, FixtureStore};
use super::{json_error_offset, with_retries, SourceClient, SourceConfig, SourceError, SourceResult, SERPER_API_KEY_VAR};

const SERPER_URL: &str = "https://google.serper.dev/search";

pub struct GoogleClient {
    store: Arc<FixtureStore>,
    config: SourceConfig,
}

impl GoogleClient {
    pub fn new(store: Arc<FixtureStore>, config: SourceConfig) -> Self {
        Self { store, config }
    }

    fn live_fetch(&self, query: &str) -> Result<String, SourceError> {
        let key = std::env::var(SERPER_API_KEY_VAR)
            .map_err(|_| SourceError::MissingApiKey(SERPER_API_KEY_VAR))?;
        with_retries(self.config.retry_count, || {
            let client = net::http_client(self.config.timeout_ms);
            net::count_request();
            let response = client
                .post(SERPER_URL)
                .header("X-API-KEY", &key)
                .json(&serde_json::json!({ "q": query }))
                .send()
                .map_err(|e| SourceError::Transport { origin: Source::Google, detail: e.to_string() })?;
            let status = response.status();
            if !status.is_success() {
                return Err(SourceError::Http { origin: Source::Google, status: status.as_u16() });
            }
            response
                .text()
                .map_err(|e| SourceError::Transport { origin: Source::Google, detail: e.to_string() })
        })
    }
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase")]
struct SerperResponse {
    #[serde(default)]
    answer_box: Option<AnswerBox>,
    #[serde(default)]
    knowledge_graph: Option<KnowledgeGraph>,
    #[serde(default)]
    organic: Vec<Organic>,
}

#[derive(Deserialize, Default)]
struct AnswerBox {
    #[serde(default)]
    answer: Option<String>,
    #[serde(default)]
    snippet: Option<String>,
}

#[derive(Deserialize, Default)]
struct KnowledgeGraph {
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    description: Option<String>,
}

#[derive(Deserialize, Default)]
struct Organic {
    #[serde(default)]
    snippet: Option<String>,
}

/// Concatenates, in order: answer-box snippet (if present), knowledge-graph
/// title+description (if present), then the organic snippets,
/// newline-separated.
pub(crate) fn assemble_google_text(raw: &str) -> Result<String, SourceError> {
    let parsed: SerperResponse = serde_json::from_str(raw).map_err(|e| {
        SourceError::MalformedResponse {
            origin: Source::Google,
            offset: json_error_offset(raw, &e),
            detail: e.to_string(),
        }
    })?;
    let mut parts: Vec<String> = Vec::new();
    if let Some(answer_box) = parsed.answer_box {
        if let Some(text) = answer_box.answer.or(answer_box.snippet) {
            if !text.is_empty() {
                parts.push(text);
            }
        }
    }
    if let Some(kg) = parsed.knowledge_graph {
        let joined = match (kg.title, kg.description) {
            (Some(title), Some(description)) => format!("{title}: {description}"),
            (Some(title), None) => title,
            (None, Some(description)) => description,
            (None, None) => String::new(),
        };
        if !joined.is_empty() {
            parts.push(joined);
        }
    }
    for organic in parsed.organic {
        if let Some(snippet) = organic.snippet {
            if !snippet.is_empty() {
                parts.push(snippet);
            }
        }
    }
    Ok(parts.join("\n"))
}

impl SourceClient for GoogleClient {
    fn source(&self) -> Source {
        Source::Google
    }

    fn fetch(&self, query: &str) -> Result<SourceResult, SourceError> {
        match self.store.mode {
            FixtureMode::Replay => {
                let raw = self.store.read(Source::Google, query)?;
                Ok(SourceResult::new(Source::Google, assemble_google_text(&raw)?, true))
            }
            FixtureMode::Record => {
                let raw = self.live_fetch(query)?;
                self.store.write(Source::Google, query, &raw)?;
                Ok(SourceResult::new(Source::Google, assemble_google_text(&raw)?, false))
            }
            FixtureMode::Live => {
                let raw = self.live_fetch(query)?;
                Ok(SourceResult::new(Source::Google, assemble_google_text(&raw)?, false))
            }
        }
    }
}
