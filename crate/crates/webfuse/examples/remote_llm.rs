//! Talking to a real chat-completions endpoint, local or hosted.
//!
//! Point LLM_BASE_URL at any server speaking the standard chat-completions
//! shape (a local GPT4All/llama.cpp-style server at http://localhost:4891/v1,
//! an OpenAI-compatible proxy, ...). Set LLM_MODEL to pick the model and
//! LLM_API_KEY if the endpoint needs a credential.
//!
//! Run with: LLM_BASE_URL=http://localhost:4891/v1 cargo run --example remote_llm

use webfuse::llm::{LlmSpec, ScriptedLlm};
use webfuse::LlmClient;

fn main() {
    let spec = LlmSpec {
        base_url: std::env::var("LLM_BASE_URL")
            .unwrap_or_else(|_| "http://localhost:4891/v1".to_string()),
        model_name: std::env::var("LLM_MODEL")
            .unwrap_or_else(|_| "mistral-7b-openorca.Q4_0.gguf".to_string()),
        timeout_ms: 120_000,
        ..LlmSpec::default()
    };
    println!("endpoint: {} (model {})", spec.base_url, spec.model_name);
    let client = spec.build().expect("valid spec");
    match client.complete("Reply with one short sentence: what is a glacier cave?") {
        Ok(answer) => println!("completion: {answer}"),
        Err(err) => {
            eprintln!("no reachable endpoint ({err})");
            eprintln!("falling back to the scripted stub used throughout the test suite:");
            let stub = ScriptedLlm::new(vec![
                "A glacier cave is a cave formed within the ice of a glacier.".to_string(),
            ]);
            println!("completion: {}", stub.complete("...").expect("scripted"));
        }
    }
}
