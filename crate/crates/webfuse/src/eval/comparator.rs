//! Automated answer comparison.
//!
//! The primary path fills a fixed comparison prompt with the produced and
//! gold answers, asks a judge LLM whether the gold answer appears, and
//! classifies the judge's reply with a sentiment model: positive means
//! matched. The prompt text is kept byte-for-byte fixed (including its
//! quirks) because judge behavior depends on the exact wording.
//!
//! When no judge or sentiment endpoint is configured, or either fails, a
//! deterministic rule takes over: the gold answer must be a substring of the
//! produced answer after normalization (lowercase, punctuation stripped,
//! whitespace collapsed). Every verdict records which method produced it.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::llm::LlmClient;
use crate::net;

use super::EvalError;

/// The fixed comparison prompt. `{llm_generated}` receives the produced
/// answer and `{actual_answer}` the gold answer.
pub const COMPARISON_PROMPT_TEMPLATE: &str = "\n\nRead the following Prompt1 and Prompt2 and determine if Prompt2 is available in Prompt1\n\n\n\nPrompt1: \"{llm_generated}\"\n\nPrompt2: \"{actual_answer}\"\n\nOptions:\n\nYes, the answer is available in the Prompt1 .\nNo, the answer is not available in the Prompt2 sentence.\n\n";

/// Fills the comparison prompt with the produced and gold answers.
pub fn fill_comparison_prompt(produced: &str, gold: &str) -> String {
    COMPARISON_PROMPT_TEMPLATE
        .replace("{llm_generated}", produced)
        .replace("{actual_answer}", gold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl SentimentLabel {
    pub fn name(&self) -> &'static str {
        match self {
            SentimentLabel::Positive => "positive",
            SentimentLabel::Negative => "negative",
            SentimentLabel::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMethod {
    LlmSentiment,
    RuleFallback,
}

impl CompareMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CompareMethod::LlmSentiment => "llm_sentiment",
            CompareMethod::RuleFallback => "rule_fallback",
        }
    }
}

/// The outcome of comparing one produced answer against the gold answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchVerdict {
    pub matched: bool,
    /// Raw judge output; empty on the fallback path.
    pub judge_text: String,
    pub sentiment_label: SentimentLabel,
    pub method: CompareMethod,
}

/// Classifies text as positive/negative/neutral.
pub trait SentimentClassifier: Send + Sync {
    fn classify(&self, text: &str) -> Result<SentimentLabel, EvalError>;
}

/// Scripted classifier for deterministic tests; consumes labels in order.
pub struct ScriptedSentiment {
    script: Vec<SentimentLabel>,
    cursor: Mutex<usize>,
}

impl ScriptedSentiment {
    pub fn new(script: Vec<SentimentLabel>) -> Self {
        Self { script, cursor: Mutex::new(0) }
    }
}

impl SentimentClassifier for ScriptedSentiment {
    fn classify(&self, _text: &str) -> Result<SentimentLabel, EvalError> {
        let mut cursor = self.cursor.lock().expect("lock poisoned");
        let label = self
            .script
            .get(*cursor)
            .copied()
            .ok_or_else(|| EvalError::Sentiment("scripted sentiment exhausted".into()))?;
        *cursor += 1;
        Ok(label)
    }
}

/// Remote sentiment endpoint client (inference-API shape): POST
/// `{"inputs": text}`, response `[[{"label": ..., "score": ...}, ...]]`;
/// the highest-scoring label wins.
pub struct RemoteSentiment {
    endpoint: String,
    timeout_ms: u64,
}

impl RemoteSentiment {
    pub fn new(endpoint: String, timeout_ms: u64) -> Self {
        Self { endpoint, timeout_ms }
    }
}

#[derive(Deserialize)]
struct ScoredLabel {
    label: String,
    score: f64,
}

impl SentimentClassifier for RemoteSentiment {
    fn classify(&self, text: &str) -> Result<SentimentLabel, EvalError> {
        let client = net::http_client(self.timeout_ms);
        net::count_request();
        let response = client
            .post(&self.endpoint)
            .json(&serde_json::json!({"inputs": text}))
            .send()
            .map_err(|e| EvalError::Sentiment(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(EvalError::Sentiment(format!("HTTP {status}")));
        }
        let parsed: Vec<Vec<ScoredLabel>> =
            response.json().map_err(|e| EvalError::Sentiment(e.to_string()))?;
        let best = parsed
            .into_iter()
            .flatten()
            .max_by(|a, b| a.score.partial_cmp(&b.score).unwrap_or(std::cmp::Ordering::Equal))
            .ok_or_else(|| EvalError::Sentiment("empty sentiment response".into()))?;
        match best.label.to_lowercase().as_str() {
            "positive" => Ok(SentimentLabel::Positive),
            "negative" => Ok(SentimentLabel::Negative),
            _ => Ok(SentimentLabel::Neutral),
        }
    }
}

/// Lowercase, punctuation stripped, whitespace collapsed.
pub fn normalize(text: &str) -> String {
    let kept: String = text
        .chars()
        .map(|c| if c.is_alphanumeric() || c.is_whitespace() { c } else { ' ' })
        .collect();
    kept.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Answer comparator: judge + sentiment when configured, rule fallback
/// otherwise (and on any judge/sentiment failure).
pub struct Comparator {
    judge: Option<Arc<dyn LlmClient>>,
    sentiment: Option<Arc<dyn SentimentClassifier>>,
}

impl Comparator {
    pub fn rule_only() -> Self {
        Self { judge: None, sentiment: None }
    }

    pub fn with_judge(judge: Arc<dyn LlmClient>, sentiment: Arc<dyn SentimentClassifier>) -> Self {
        Self { judge: Some(judge), sentiment: Some(sentiment) }
    }

    pub fn compare(&self, produced: &str, gold: &str) -> MatchVerdict {
        if let (Some(judge), Some(sentiment)) = (&self.judge, &self.sentiment) {
            let prompt = fill_comparison_prompt(produced, gold);
            if let Ok(judge_text) = judge.complete(&prompt) {
                if let Ok(label) = sentiment.classify(&judge_text) {
                    return MatchVerdict {
                        matched: label == SentimentLabel::Positive,
                        judge_text,
                        sentiment_label: label,
                        method: CompareMethod::LlmSentiment,
                    };
                }
            }
        }
        self.rule_verdict(produced, gold)
    }

    fn rule_verdict(&self, produced: &str, gold: &str) -> MatchVerdict {
        let gold_normalized = normalize(gold);
        let matched =
            !gold_normalized.is_empty() && normalize(produced).contains(&gold_normalized);
        MatchVerdict {
            matched,
            judge_text: String::new(),
            sentiment_label: SentimentLabel::Neutral,
            method: CompareMethod::RuleFallback,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::ScriptedLlm;
    use proptest::prelude::*;

    #[test]
    fn identical_answers_match_on_the_fallback_path() {
        let verdict = Comparator::rule_only().compare("Narges Mohammadi", "Narges Mohammadi");
        assert!(verdict.matched);
        assert_eq!(verdict.method, CompareMethod::RuleFallback);
    }

    #[test]
    fn normalized_substring_matches() {
        let verdict = Comparator::rule_only()
            .compare("The 2023 winner was Narges Mohammadi.", "Narges Mohammadi");
        assert!(verdict.matched);
    }

    #[test]
    fn normalization_strips_punctuation_case_and_extra_whitespace() {
        assert_eq!(normalize("  The  2023   winner, was: Narges  Mohammadi!  "), "the 2023 winner was narges mohammadi");
    }

    #[test]
    fn unrelated_answers_do_not_match() {
        let verdict = Comparator::rule_only().compare("Australia won the cup", "Narges Mohammadi");
        assert!(!verdict.matched);
    }

    #[test]
    fn scripted_judge_and_sentiment_drive_the_primary_path() {
        let judge: Arc<dyn LlmClient> = Arc::new(ScriptedLlm::new(vec![
            "Yes, the answer is available in the Prompt1 .".to_string(),
        ]));
        let sentiment: Arc<dyn SentimentClassifier> =
            Arc::new(ScriptedSentiment::new(vec![SentimentLabel::Positive]));
        let verdict = Comparator::with_judge(judge, sentiment).compare("produced text", "gold");
        assert!(verdict.matched);
        assert_eq!(verdict.method, CompareMethod::LlmSentiment);
        assert_eq!(verdict.judge_text, "Yes, the answer is available in the Prompt1 .");
        assert_eq!(verdict.sentiment_label, SentimentLabel::Positive);
    }

    #[test]
    fn negative_sentiment_means_no_match() {
        let judge: Arc<dyn LlmClient> =
            Arc::new(ScriptedLlm::new(vec!["No, it is not there.".to_string()]));
        let sentiment: Arc<dyn SentimentClassifier> =
            Arc::new(ScriptedSentiment::new(vec![SentimentLabel::Negative]));
        let verdict = Comparator::with_judge(judge, sentiment).compare("produced", "gold");
        assert!(!verdict.matched);
        assert_eq!(verdict.method, CompareMethod::LlmSentiment);
    }

    #[test]
    fn judge_failure_falls_back_to_the_rule_with_method_flagged() {
        // Empty script: the judge errors immediately.
        let judge: Arc<dyn LlmClient> = Arc::new(ScriptedLlm::new(vec![]));
        let sentiment: Arc<dyn SentimentClassifier> = Arc::new(ScriptedSentiment::new(vec![]));
        let verdict = Comparator::with_judge(judge, sentiment)
            .compare("the answer is Lou Blaney", "Lou Blaney");
        assert!(verdict.matched);
        assert_eq!(verdict.method, CompareMethod::RuleFallback);
    }

    #[test]
    fn prompt_is_filled_verbatim() {
        let prompt = fill_comparison_prompt("AAA", "BBB");
        assert!(prompt.contains("Read the following Prompt1 and Prompt2 and determine if Prompt2 is available in Prompt1"));
        assert!(prompt.contains("Prompt1: \"AAA\""));
        assert!(prompt.contains("Prompt2: \"BBB\""));
        assert!(prompt.contains("Yes, the answer is available in the Prompt1 ."));
        assert!(prompt.contains("No, the answer is not available in the Prompt2 sentence."));
    }

    proptest! {
        /// Appending text to the produced answer never flips matched from
        /// true to false on the fallback path.
        #[test]
        fn fallback_match_is_monotone_under_appends(
            gold in "[a-z]{2,8}( [a-z]{2,8}){0,2}",
            prefix in "[a-zA-Z ,.!]{0,20}",
            suffix in "[a-zA-Z ,.!]{0,20}",
        ) {
            let comparator = Comparator::rule_only();
            let produced = format!("{prefix}{gold}");
            if comparator.compare(&produced, &gold).matched {
                let extended = format!("{produced}{suffix}");
                prop_assert!(comparator.compare(&extended, &gold).matched);
            }
        }
    }
}
