//! Wikipedia lead summaries via the MediaWiki API.

use std::sync::Arc;

use serde::Deserialize;

use crate::chunking::Source;
use crate::net;

use super::fixtures::{FixtureMode, FixtureStore};
use super::{with_retries, SourceClient, SourceConfig, SourceError, SourceResult};

const WIKI_API_URL: &str = "https://en.wikipedia.org/w/api.php";

pub struct WikipediaClient {
    store: Arc<FixtureStore>,
    config: SourceConfig,
}

impl WikipediaClient {
    pub fn new(store: Arc<FixtureStore>, config: SourceConfig) -> Self {
        Self { store, config }
    }

    /// Finds the best-matching page and assembles "title\nlead". Fixtures
    /// store this assembled text uncapped; the cap is applied on every path.
    fn live_fetch(&self, query: &str) -> Result<String, SourceError> {
        let title = match self.search_title(query)? {
            Some(title) => title,
            None => return Ok(String::new()),
        };
        let extract = self.page_extract(&title)?;
        if extract.is_empty() {
            return Ok(title);
        }
        Ok(format!("{title}\n{extract}"))
    }

    fn search_title(&self, query: &str) -> Result<Option<String>, SourceError> {
        let body = self.get(&[
            ("action", "query"),
            ("list", "search"),
            ("srsearch", query),
            ("srlimit", "1"),
            ("format", "json"),
        ])?;
        #[derive(Deserialize)]
        struct SearchResponse {
            query: Option<SearchQuery>,
        }
        #[derive(Deserialize)]
        struct SearchQuery {
            #[serde(default)]
            search: Vec<SearchHit>,
        }
        #[derive(Deserialize)]
        struct SearchHit {
            title: String,
        }
        let parsed: SearchResponse = serde_json::from_str(&body).map_err(|e| {
            SourceError::MalformedResponse {
                origin: Source::Wikipedia,
                offset: super::json_error_offset(&body, &e),
                detail: e.to_string(),
            }
        })?;
        Ok(parsed.query.and_then(|q| q.search.into_iter().next()).map(|hit| hit.title))
    }

    fn page_extract(&self, title: &str) -> Result<String, SourceError> {
        let body = self.get(&[
            ("action", "query"),
            ("prop", "extracts"),
            ("exintro", "1"),
            ("explaintext", "1"),
            ("redirects", "1"),
            ("titles", title),
            ("format", "json"),
        ])?;
        #[derive(Deserialize)]
        struct ExtractResponse {
            query: Option<ExtractQuery>,
        }
        #[derive(Deserialize)]
        struct ExtractQuery {
            #[serde(default)]
            pages: std::collections::BTreeMap<String, Page>,
        }
        #[derive(Deserialize)]
        struct Page {
            #[serde(default)]
            extract: Option<String>,
        }
        let parsed: ExtractResponse = serde_json::from_str(&body).map_err(|e| {
            SourceError::MalformedResponse {
                origin: Source::Wikipedia,
                offset: super::json_error_offset(&body, &e),
                detail: e.to_string(),
            }
        })?;
        Ok(parsed
            .query
            .and_then(|q| q.pages.into_values().next())
            .and_then(|page| page.extract)
            .unwrap_or_default())
    }

    fn get(&self, params: &[(&str, &str)]) -> Result<String, SourceError> {
        with_retries(self.config.retry_count, || {
            let client = net::http_client(self.config.timeout_ms);
            net::count_request();
            let response = client.get(WIKI_API_URL).query(params).send().map_err(|e| {
                SourceError::Transport { origin: Source::Wikipedia, detail: e.to_string() }
            })?;
            let status = response.status();
            if !status.is_success() {
                return Err(SourceError::Http { origin: Source::Wikipedia, status: status.as_u16() });
            }
            response.text().map_err(|e| SourceError::Transport {
                origin: Source::Wikipedia,
                detail: e.to_string(),
            })
        })
    }
}

/// Truncates `text` to at most `max_chars` characters, backing up to the last
/// word boundary when the cut would land mid-word.
pub(crate) fn cap_at_word_boundary(text: &str, max_chars: usize) -> String {
    let total = text.chars().count();
    if total <= max_chars {
        return text.to_string();
    }
    let cut: String = text.chars().take(max_chars).collect();
    match cut.rfind(char::is_whitespace) {
        Some(at) if !cut[..at].trim().is_empty() => cut[..at].trim_end().to_string(),
        _ => cut,
    }
}

impl SourceClient for WikipediaClient {
    fn source(&self) -> Source {
        Source::Wikipedia
    }

    fn fetch(&self, query: &str) -> Result<SourceResult, SourceError> {
        let (lead, from_fixture) = match self.store.mode {
            FixtureMode::Replay => (self.store.read(Source::Wikipedia, query)?, true),
            FixtureMode::Record => {
                let lead = self.live_fetch(query)?;
                self.store.write(Source::Wikipedia, query, &lead)?;
                (lead, false)
            }
            FixtureMode::Live => (self.live_fetch(query)?, false),
        };
        let capped = cap_at_word_boundary(&lead, self.config.max_wiki_chars);
        Ok(SourceResult::new(Source::Wikipedia, capped, from_fixture))
    }
}
