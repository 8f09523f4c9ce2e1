//! Dataset preprocessing and IO.
//!
//! WikiQA ships as tab-separated candidate-sentence rows; only label-1
//! sentences are gold answers. Preprocessing keeps one pair per question,
//! merging multiple label-1 sentences in file order. Benchmark datasets are
//! plain `question,answer` CSV files.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// A gold question-answer pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAPair {
    pub question: String,
    pub answer: String,
}

impl QAPair {
    pub fn new(question: impl Into<String>, answer: impl Into<String>) -> Self {
        Self { question: question.into(), answer: answer.into() }
    }
}

/// Accepts both the five-column preprocessed shape (question_id, question,
/// document_title, answer, label) and the public release's seven-column
/// shape (QuestionID, Question, DocumentID, DocumentTitle, SentenceID,
/// Sentence, Label). Header names are matched case-insensitively with
/// underscores ignored; Sentence is accepted for answer.
fn resolve_columns(headers: &csv::StringRecord) -> Result<(usize, usize, usize, usize), EvalError> {
    let mut question_id = None;
    let mut question = None;
    let mut answer = None;
    let mut label = None;
    let mut document_title = None;
    for (at, raw) in headers.iter().enumerate() {
        let name: String = raw.chars().filter(|c| *c != '_').collect::<String>().to_lowercase();
        match name.as_str() {
            "questionid" => question_id = Some(at),
            "question" => question = Some(at),
            "documenttitle" => document_title = Some(at),
            "answer" | "sentence" => answer = Some(at),
            "label" => label = Some(at),
            _ => {}
        }
    }
    let question_id = question_id.ok_or(EvalError::MissingColumn("question_id"))?;
    let question = question.ok_or(EvalError::MissingColumn("question"))?;
    document_title.ok_or(EvalError::MissingColumn("document_title"))?;
    let answer = answer.ok_or(EvalError::MissingColumn("answer"))?;
    let label = label.ok_or(EvalError::MissingColumn("label"))?;
    Ok((question_id, question, answer, label))
}

/// Drops rows with label != 1, groups the survivors by question id, and
/// emits one pair per group in first-appearance order. Multi-row groups
/// concatenate their label-1 sentences in file order.
pub fn preprocess_wikiqa(reader: impl Read) -> Result<Vec<QAPair>, EvalError> {
    let mut tsv = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .from_reader(reader);
    let headers = tsv.headers().map_err(|e| EvalError::Csv(e.to_string()))?.clone();
    let (qid_col, question_col, answer_col, label_col) = resolve_columns(&headers)?;

    // (question_id, question, label-1 sentences) in first-appearance order.
    let mut groups: Vec<(String, String, Vec<String>)> = Vec::new();
    for (at, row) in tsv.records().enumerate() {
        let row = row.map_err(|e| EvalError::Csv(e.to_string()))?;
        let line = at + 2;
        let field = |col: usize| -> Result<&str, EvalError> {
            row.get(col).ok_or(EvalError::ShortRow { line })
        };
        let qid = field(qid_col)?.to_string();
        let question = field(question_col)?.to_string();
        let answer = field(answer_col)?.to_string();
        let label = match field(label_col)?.trim() {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(EvalError::NonBinaryLabel { line, found: other.to_string() })
            }
        };
        let group = match groups.iter_mut().find(|(id, _, _)| *id == qid) {
            Some(group) => group,
            None => {
                groups.push((qid, question, Vec::new()));
                groups.last_mut().expect("just pushed")
            }
        };
        if label == 1 {
            group.2.push(answer);
        }
    }
    Ok(groups
        .into_iter()
        .filter(|(_, _, answers)| !answers.is_empty())
        .map(|(_, question, answers)| QAPair::new(question, answers.join(" ")))
        .collect())
}

pub fn preprocess_wikiqa_file(path: impl AsRef<Path>) -> Result<Vec<QAPair>, EvalError> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| EvalError::Io(format!("{}: {e}", path.as_ref().display())))?;
    preprocess_wikiqa(file)
}

/// Loads a `question,answer` CSV. The header must be exactly those two
/// columns; every field must be non-empty.
pub fn load_qa_csv_reader(reader: impl Read) -> Result<Vec<QAPair>, EvalError> {
    let mut csv_reader = csv::ReaderBuilder::new().from_reader(reader);
    let headers = csv_reader.headers().map_err(|e| EvalError::Csv(e.to_string()))?;
    let names: Vec<String> = headers.iter().map(|h| h.trim().to_lowercase()).collect();
    if names != ["question", "answer"] {
        return Err(EvalError::BadHeader { expected: "question,answer", found: names.join(",") });
    }
    let mut pairs = Vec::new();
    for (at, row) in csv_reader.records().enumerate() {
        let row = row.map_err(|e| EvalError::Csv(e.to_string()))?;
        let line = at + 2;
        let question = row.get(0).unwrap_or("").trim().to_string();
        let answer = row.get(1).unwrap_or("").trim().to_string();
        if question.is_empty() || answer.is_empty() {
            return Err(EvalError::EmptyField { line });
        }
        pairs.push(QAPair::new(question, answer));
    }
    Ok(pairs)
}

pub fn load_qa_csv(path: impl AsRef<Path>) -> Result<Vec<QAPair>, EvalError> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| EvalError::Io(format!("{}: {e}", path.as_ref().display())))?;
    load_qa_csv_reader(file)
}

/// Writes pairs as a `question,answer` CSV.
pub fn write_qa_csv(pairs: &[QAPair], path: impl AsRef<Path>) -> Result<(), EvalError> {
    let mut writer = csv::Writer::from_path(path.as_ref())
        .map_err(|e| EvalError::Io(format!("{}: {e}", path.as_ref().display())))?;
    writer.write_record(["question", "answer"]).map_err(|e| EvalError::Csv(e.to_string()))?;
    for pair in pairs {
        writer
            .write_record([&pair.question, &pair.answer])
            .map_err(|e| EvalError::Csv(e.to_string()))?;
    }
    writer.flush().map_err(|e| EvalError::Io(e.to_string()))?;
    Ok(())
}
