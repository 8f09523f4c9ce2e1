//! webfuse: multi-source web retrieval fused into a single agent tool.
//!
//! A zero-shot ReAct agent usually chooses between homogeneous web tools
//! (Google, DuckDuckGo, Wikipedia) purely by their descriptions. This crate
//! instead fetches all of them in parallel, splits the combined text into
//! chunks, ranks the chunks by embedding similarity to the query in an
//! ephemeral vector collection, and hands the agent the top passages as one
//! fused tool, alongside the classic one-tool-per-source layout so the two
//! can be compared head to head.
//!
//! The pieces:
//!
//! - [`chunking`]: recursive character splitting into bounded, overlapping
//!   chunks
//! - [`embeddings`]: remote embedding client plus a deterministic offline
//!   embedder
//! - [`vector_store`]: exact top-k cosine retrieval over an in-memory
//!   collection
//! - [`sources`]: Google/DuckDuckGo/Wikipedia clients with record/replay
//!   fixtures
//! - [`tools`]: the tool abstraction, the calculator, and the fused search
//! - [`agent`]: the ReAct prompt, output parser, and action loop
//! - [`llm`]: chat-completion client and a scripted stub
//! - [`eval`]: answer comparison, dataset preprocessing, metrics, and the
//!   benchmark runner
//! - [`config`] / [`cli`]: TOML configuration and the command-line entry
//!   point
//!
//! Everything is testable offline: source clients replay recorded fixtures,
//! the scripted LLM stub plays canned responses, and the deterministic
//! embedder is a pure function of the text. See the crate examples for one
//! runnable walkthrough per capability.

pub mod agent;
pub mod chunking;
pub mod cli;
pub mod config;
pub mod embeddings;
pub mod eval;
pub mod llm;
pub mod net;
pub mod sources;
pub mod tools;
pub mod vector_store;

pub use agent::{run_agent, AgentAction, AgentConfig, AgentFinish, AgentRunResult, AgentStep};
pub use chunking::{split_text, Chunk, Source, SplitterConfig};
pub use config::AppConfig;
pub use embeddings::{cosine_similarity, DeterministicEmbedder, Embedder, EmbeddingVector};
pub use eval::{
    compute_metrics, load_qa_csv, preprocess_wikiqa, run_benchmark, Comparator, EvalMode,
    EvalRecord, MatchVerdict, MetricsReport, QAPair,
};
pub use llm::{LlmClient, LlmSpec, ScriptedLlm};
pub use sources::{FixtureMode, FixtureStore, SourceClients, SourceResult};
pub use tools::{calculator, make_toolset, merged_search, MergeConfig, Tool, ToolMode, Toolset};
pub use vector_store::Collection;
