//! DuckDuckGo search via the instant-answer JSON API.

use std::sync::Arc;

use serde::Deserialize;

use crate::chunking::Source;
use crate::net;

use super::fixtures::{FixtureMode, FixtureStore};
use super::{json_error_offset, with_retries, SourceClient, SourceConfig, SourceError, SourceResult};

const DDG_URL: &str = "https://api.duckduckgo.com/";

pub struct DuckDuckGoClient {
    store: Arc<FixtureStore>,
    config: SourceConfig,
}

impl DuckDuckGoClient {
    pub fn new(store: Arc<FixtureStore>, config: SourceConfig) -> Self {
        Self { store, config }
    }

    fn live_fetch(&self, query: &str) -> Result<String, SourceError> {
        with_retries(self.config.retry_count, || {
            let client = net::http_client(self.config.timeout_ms);
            net::count_request();
            let response = client
                .get(DDG_URL)
                .query(&[("q", query), ("format", "json"), ("no_html", "1"), ("skip_disambig", "1")])
                .send()
                .map_err(|e| SourceError::Transport {
                    origin: Source::Duckduckgo,
                    detail: e.to_string(),
                })?;
            let status = response.status();
            if !status.is_success() {
                return Err(SourceError::Http { origin: Source::Duckduckgo, status: status.as_u16() });
            }
            response.text().map_err(|e| SourceError::Transport {
                origin: Source::Duckduckgo,
                detail: e.to_string(),
            })
        })
    }
}

#[derive(Deserialize, Default)]
struct DdgResponse {
    #[serde(rename = "AbstractText", default)]
    abstract_text: String,
    #[serde(rename = "Results", default)]
    results: Vec<DdgTopic>,
    #[serde(rename = "RelatedTopics", default)]
    related_topics: Vec<DdgTopic>,
}

/// Related topics may be nested one level under category groups.
#[derive(Deserialize, Default)]
struct DdgTopic {
    #[serde(rename = "Text", default)]
    text: Option<String>,
    #[serde(rename = "Topics", default)]
    topics: Option<Vec<DdgTopic>>,
}

fn push_topic(topic: &DdgTopic, out: &mut Vec<String>) {
    if let Some(text) = &topic.text {
        if !text.is_empty() {
            out.push(text.clone());
        }
    }
    if let Some(nested) = &topic.topics {
        for inner in nested {
            push_topic(inner, out);
        }
    }
}

/// Concatenated result snippets: abstract first, then direct results, then
/// related topics, newline-separated. An empty result set yields empty text.
pub(crate) fn assemble_duckduckgo_text(raw: &str) -> Result<String, SourceError> {
    let parsed: DdgResponse = serde_json::from_str(raw).map_err(|e| {
        SourceError::MalformedResponse {
            origin: Source::Duckduckgo,
            offset: json_error_offset(raw, &e),
            detail: e.to_string(),
        }
    })?;
    let mut parts: Vec<String> = Vec::new();
    if !parsed.abstract_text.is_empty() {
        parts.push(parsed.abstract_text);
    }
    for topic in parsed.results.iter().chain(&parsed.related_topics) {
        push_topic(topic, &mut parts);
    }
    Ok(parts.join("\n"))
}

impl SourceClient for DuckDuckGoClient {
    fn source(&self) -> Source {
        Source::Duckduckgo
    }

    fn fetch(&self, query: &str) -> Result<SourceResult, SourceError> {
        match self.store.mode {
            FixtureMode::Replay => {
                let raw = self.store.read(Source::Duckduckgo, query)?;
                Ok(SourceResult::new(Source::Duckduckgo, assemble_duckduckgo_text(&raw)?, true))
            }
            FixtureMode::Record => {
                let raw = self.live_fetch(query)?;
                self.store.write(Source::Duckduckgo, query, &raw)?;
                Ok(SourceResult::new(Source::Duckduckgo, assemble_duckduckgo_text(&raw)?, false))
            }
            FixtureMode::Live => {
                let raw = self.live_fetch(query)?;
                Ok(SourceResult::new(Source::Duckduckgo, assemble_duckduckgo_text(&raw)?, false))
            }
        }
    }
}
