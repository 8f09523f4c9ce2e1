//! The zero-shot ReAct loop end to end with a scripted model, showing the
//! prompt the model sees, the parsed actions, tool observations, and the
//! structured run log on stderr.
//!
//! Swap the scripted stub for `LlmSpec::default().build()?` to drive a local
//! chat-completions server instead.
//!
//! Run with: cargo run --example agent_scripted

use webfuse::agent::{build_prompt, run_agent, AgentConfig, RunLogger};
use webfuse::llm::ScriptedLlm;
use webfuse::tools::{CalculatorTool, Toolset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tools = Toolset::new(vec![Box::new(CalculatorTool::new(
        "Evaluates an arithmetic expression and returns the numeric result. Input: the expression.",
    ))])?;
    let config = AgentConfig::default();
    let question = "what is (17+3)*2?";

    println!("=== prompt sent on the first turn ===");
    println!("{}", build_prompt(question, &tools, &[], None, &config));

    // The stub plays the model: one tool call, then the final answer.
    let llm = ScriptedLlm::new(vec![
        "Thought: this needs arithmetic\nAction: calculator\nAction Input: (17+3)*2".to_string(),
        "Thought: I now know the final answer\nFinal Answer: 40".to_string(),
    ]);

    let result = run_agent(question, &tools, &llm, &config, &RunLogger::stderr())?;
    println!("=== run result ===");
    println!("answer: {}", result.answer);
    println!("iterations (llm calls): {}", result.iterations);
    for (at, step) in result.steps.iter().enumerate() {
        println!(
            "step {}: {}({}) -> {}",
            at + 1,
            step.action.tool,
            step.action.tool_input,
            step.observation
        );
    }
    println!("elapsed: {:?}", result.elapsed);
    Ok(())
}
