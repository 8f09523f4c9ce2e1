//! Uniform client over chat-completion endpoints, plus a scripted stub for
//! deterministic tests.
//!
//! One wire contract reaches both a local open-source model server (for
//! example a quantized Mistral 7B served on localhost) and hosted GPT-class
//! APIs: `POST {base_url}/chat/completions` with
//! `{"model", "messages", "temperature", "max_tokens"}`, reading
//! `choices[0].message.content`. Prompting uses a single user message; a
//! system-message slot exists but defaults empty.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::net;

/// Env var holding the chat endpoint credential (optional for local servers).
pub const LLM_API_KEY_VAR: &str = "LLM_API_KEY";

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("llm spec invalid: {0}")]
    InvalidSpec(String),
    #[error("prompt must not be empty")]
    EmptyPrompt,
    #[error("chat endpoint transport failure: {0}")]
    Transport(String),
    #[error("chat endpoint returned HTTP {status}")]
    Http { status: u16 },
    #[error("chat endpoint returned an empty completion")]
    EmptyCompletion,
    #[error("malformed chat response: {0}")]
    MalformedResponse(String),
    #[error("scripted responses exhausted after {calls} calls")]
    ScriptExhausted { calls: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LlmKind {
    RemoteChat,
    ScriptedStub,
}

/// How to construct an LLM client.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmSpec {
    pub kind: LlmKind,
    pub base_url: String,
    pub model_name: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_ms: u64,
    pub system_prompt: Option<String>,
    /// Canned responses consumed in order (scripted stub only).
    pub script: Vec<String>,
}

impl Default for LlmSpec {
    fn default() -> Self {
        Self {
            kind: LlmKind::RemoteChat,
            base_url: "http://localhost:4891/v1".to_string(),
            model_name: "mistral-7b-openorca.Q4_0.gguf".to_string(),
            // Temperature 0 keeps agent turns deterministic.
            temperature: 0.0,
            max_tokens: 512,
            // Local CPU inference is slow; leave generous headroom.
            timeout_ms: 120_000,
            system_prompt: None,
            script: Vec::new(),
        }
    }
}

impl LlmSpec {
    pub fn scripted(script: Vec<String>) -> Self {
        Self { kind: LlmKind::ScriptedStub, script, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), LlmError> {
        if self.kind == LlmKind::RemoteChat {
            if self.base_url.is_empty() {
                return Err(LlmError::InvalidSpec("remote_chat requires base_url".into()));
            }
            if self.model_name.is_empty() {
                return Err(LlmError::InvalidSpec("remote_chat requires model_name".into()));
            }
        }
        if self.temperature < 0.0 {
            return Err(LlmError::InvalidSpec("temperature must be >= 0".into()));
        }
        if self.max_tokens == 0 {
            return Err(LlmError::InvalidSpec("max_tokens must be positive".into()));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Box<dyn LlmClient>, LlmError> {
        self.validate()?;
        match self.kind {
            LlmKind::ScriptedStub => Ok(Box::new(ScriptedLlm::new(self.script.clone()))),
            LlmKind::RemoteChat => Ok(Box::new(RemoteChatLlm::new(self.clone()))),
        }
    }
}

/// A prompt-to-completion client. Stateless per call except the stub's
/// cursor; concurrent runs should use separate stub instances.
pub trait LlmClient: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, LlmError>;
}

/// Returns its script entries in order; errors once exhausted.
pub struct ScriptedLlm {
    script: Vec<String>,
    cursor: Mutex<usize>,
}

impl ScriptedLlm {
    pub fn new(script: Vec<String>) -> Self {
        Self { script, cursor: Mutex::new(0) }
    }

    pub fn calls_made(&self) -> usize {
        *self.cursor.lock().expect("lock poisoned")
    }
}

impl LlmClient for ScriptedLlm {
    fn complete(&self, prompt: &str) -> Result<String, LlmError> {
        if prompt.is_empty() {
            return Err(LlmError::EmptyPrompt);
        }
        let mut cursor = self.cursor.lock().expect("lock poisoned");
        let response = self
            .script
            .get(*cursor)
            .cloned()
            .ok_or(LlmError::ScriptExhausted { calls: *cursor })?;
        *cursor += 1;
        Ok(response)
    }
}

pub struct RemoteChatLlm {
    spec: LlmSpec,
}

impl RemoteChatLlm {
    pub fn new(spec: LlmSpec) -> Self {
        Self { spec }
    }

    fn endpoint(&self) -> String {
        let base = self.spec.base_url.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    #[serde(default)]
    content: Option<String>,
}

impl LlmClient for RemoteChatLlm {
    fn complete(&self, prompt: &str) -> Result<String, LlmError> {
        if prompt.is_empty() {
            return Err(LlmError::EmptyPrompt);
        }
        let mut messages = Vec::new();
        if let Some(system) = &self.spec.system_prompt {
            if !system.is_empty() {
                messages.push(serde_json::json!({"role": "system", "content": system}));
            }
        }
        messages.push(serde_json::json!({"role": "user", "content": prompt}));
        let body = serde_json::json!({
            "model": self.spec.model_name,
            "messages": messages,
            "temperature": self.spec.temperature,
            "max_tokens": self.spec.max_tokens,
        });
        let client = net::http_client(self.spec.timeout_ms);
        let mut request = client.post(self.endpoint()).json(&body);
        if let Ok(key) = std::env::var(LLM_API_KEY_VAR) {
            if !key.is_empty() {
                request = request.bearer_auth(key);
            }
        }
        net::count_request();
        let response = request.send().map_err(|e| LlmError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(LlmError::Http { status: status.as_u16() });
        }
        let parsed: ChatResponse =
            response.json().map_err(|e| LlmError::MalformedResponse(e.to_string()))?;
        let content = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|choice| choice.message.content)
            .unwrap_or_default();
        if content.is_empty() {
            return Err(LlmError::EmptyCompletion);
        }
        Ok(content)
    }
}
