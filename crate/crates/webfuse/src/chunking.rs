//! Recursive character text splitting.
//!
//! Long source documents are cut into bounded, overlapping chunks before
//! embedding. The splitter walks a separator hierarchy (paragraph break,
//! line break, space, then a hard character cut) so boundaries land on
//! natural breaks whenever possible, then greedily packs the resulting
//! pieces up to `chunk_size` characters, carrying up to `chunk_overlap`
//! trailing characters into the next chunk for cross-chunk context.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

/// Default separator hierarchy: paragraphs, lines, words, hard cut.
pub const DEFAULT_SEPARATORS: [&str; 4] = ["\n\n", "\n", " ", ""];

/// Where a piece of retrieved text came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Duckduckgo,
    Google,
    Wikipedia,
    Other,
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::Duckduckgo => "duckduckgo",
            Source::Google => "google",
            Source::Wikipedia => "wikipedia",
            Source::Other => "other",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "duckduckgo" => Ok(Source::Duckduckgo),
            "google" => Ok(Source::Google),
            "wikipedia" => Ok(Source::Wikipedia),
            "other" => Ok(Source::Other),
            other => Err(format!("unknown source: {other}")),
        }
    }
}

/// A bounded fragment of source text, the unit of embedding and retrieval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub text: String,
    pub source: Source,
    /// Ordinal position within its source's split.
    pub index: usize,
}

impl Chunk {
    pub fn new(text: impl Into<String>, source: Source, index: usize) -> Self {
        Self { text: text.into(), source, index }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitterConfigError {
    #[error("chunk_size must be greater than zero")]
    ZeroChunkSize,
    #[error("chunk_overlap ({overlap}) must be smaller than chunk_size ({size})")]
    OverlapTooLarge { overlap: usize, size: usize },
    #[error("separators must be non-empty and end with the empty string")]
    BadSeparators,
}

/// Splitter parameters. Sizes are counted in characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitterConfig {
    pub chunk_size: usize,
    pub chunk_overlap: usize,
    /// Boundary strings tried in order; the trailing empty string is the
    /// hard character cut that guarantees termination.
    pub separators: Vec<String>,
}

impl Default for SplitterConfig {
    fn default() -> Self {
        Self {
            chunk_size: 400,
            chunk_overlap: 100,
            separators: DEFAULT_SEPARATORS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl SplitterConfig {
    pub fn new(
        chunk_size: usize,
        chunk_overlap: usize,
        separators: Vec<String>,
    ) -> Result<Self, SplitterConfigError> {
        let config = Self { chunk_size, chunk_overlap, separators };
        config.validate()?;
        Ok(config)
    }

    /// Like [`SplitterConfig::new`] with the default separator hierarchy.
    pub fn with_sizes(chunk_size: usize, chunk_overlap: usize) -> Result<Self, SplitterConfigError> {
        Self::new(
            chunk_size,
            chunk_overlap,
            DEFAULT_SEPARATORS.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn validate(&self) -> Result<(), SplitterConfigError> {
        if self.chunk_size == 0 {
            return Err(SplitterConfigError::ZeroChunkSize);
        }
        if self.chunk_overlap >= self.chunk_size {
            return Err(SplitterConfigError::OverlapTooLarge {
                overlap: self.chunk_overlap,
                size: self.chunk_size,
            });
        }
        if self.separators.is_empty() || self.separators.last().map(String::as_str) != Some("") {
            return Err(SplitterConfigError::BadSeparators);
        }
        Ok(())
    }
}

/// Splits `text` into chunk strings of at most `config.chunk_size` characters.
///
/// Empty or whitespace-only input yields an empty list. The config must be
/// valid per [`SplitterConfig::validate`]; construction through the checked
/// constructors guarantees that.
pub fn split_text(text: &str, config: &SplitterConfig) -> Vec<String> {
    split_text_with_offsets(text, config)
        .into_iter()
        .map(|(_, chunk)| chunk)
        .collect()
}

/// Like [`split_text`] but pairs every chunk with the character offset of its
/// first retained character in the input.
pub fn split_text_with_offsets(text: &str, config: &SplitterConfig) -> Vec<(usize, String)> {
    config.validate().expect("invalid splitter configuration");
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut atoms = Vec::new();
    collect_atoms(
        text,
        0..text.len(),
        0,
        &config.separators,
        0,
        config.chunk_size,
        &mut atoms,
    );
    pack(text, &atoms, config.chunk_size, config.chunk_overlap)
}

/// One indivisible piece of the input: either text between separator matches
/// or a separator match itself. Pieces longer than `chunk_size` fall back to
/// single-character atoms so the packer can slide through them. Atoms
/// partition the input contiguously and in order.
#[derive(Debug, Clone, Copy)]
struct Atom {
    byte_start: usize,
    byte_end: usize,
    char_start: usize,
    char_len: usize,
    whitespace: bool,
}

fn collect_atoms(
    input: &str,
    range: Range<usize>,
    char_start: usize,
    separators: &[String],
    level: usize,
    chunk_size: usize,
    out: &mut Vec<Atom>,
) {
    if range.is_empty() {
        return;
    }
    let sep = separators.get(level).map(String::as_str).unwrap_or("");
    if sep.is_empty() {
        push_windows(input, range, char_start, chunk_size, out);
        return;
    }
    let slice = &input[range.clone()];
    if !slice.contains(sep) {
        collect_atoms(input, range, char_start, separators, level + 1, chunk_size, out);
        return;
    }
    let mut rel_byte = 0usize;
    let mut abs_char = char_start;
    let sep_chars = sep.chars().count();
    let matches: Vec<usize> = slice.match_indices(sep).map(|(at, _)| at).collect();
    for at in matches {
        let piece = &slice[rel_byte..at];
        collect_atoms(
            input,
            range.start + rel_byte..range.start + at,
            abs_char,
            separators,
            level + 1,
            chunk_size,
            out,
        );
        abs_char += piece.chars().count();
        push_windows(
            input,
            range.start + at..range.start + at + sep.len(),
            abs_char,
            chunk_size,
            out,
        );
        abs_char += sep_chars;
        rel_byte = at + sep.len();
    }
    collect_atoms(
        input,
        range.start + rel_byte..range.end,
        abs_char,
        separators,
        level + 1,
        chunk_size,
        out,
    );
}

/// Emits `input[range]` as one atom, or as single-character atoms when the
/// piece does not fit inside `chunk_size` (the hard-cut fallback).
fn push_windows(
    input: &str,
    range: Range<usize>,
    char_start: usize,
    chunk_size: usize,
    out: &mut Vec<Atom>,
) {
    let slice = &input[range.clone()];
    let char_len = slice.chars().count();
    if char_len == 0 {
        return;
    }
    if char_len <= chunk_size {
        out.push(Atom {
            byte_start: range.start,
            byte_end: range.end,
            char_start,
            char_len,
            whitespace: slice.trim().is_empty(),
        });
        return;
    }
    for (offset, (at, c)) in slice.char_indices().enumerate() {
        out.push(Atom {
            byte_start: range.start + at,
            byte_end: range.start + at + c.len_utf8(),
            char_start: char_start + offset,
            char_len: 1,
            whitespace: c.is_whitespace(),
        });
    }
}

/// Greedily packs atoms into chunks of at most `chunk_size` characters,
/// carrying a trailing run of whole atoms totalling at most `overlap`
/// characters into the next chunk. Whitespace atoms never start a chunk, so
/// chunk start offsets stay strictly increasing and no whitespace-only
/// fragment is ever emitted.
fn pack(input: &str, atoms: &[Atom], chunk_size: usize, overlap: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut window: VecDeque<Atom> = VecDeque::new();
    let mut total = 0usize;
    for &atom in atoms {
        debug_assert!(atom.char_len <= chunk_size);
        if window.is_empty() && atom.whitespace {
            continue;
        }
        if !window.is_empty() && total + atom.char_len > chunk_size {
            emit(input, &window, &mut out);
            // Carry the longest proper suffix that stays within the overlap
            // budget and still leaves room for the incoming atom, then drop
            // whitespace from its front.
            while let Some(front) = window.front().copied() {
                if total > overlap || total + atom.char_len > chunk_size {
                    total -= front.char_len;
                    window.pop_front();
                } else {
                    break;
                }
            }
            while let Some(front) = window.front().copied() {
                if front.whitespace {
                    total -= front.char_len;
                    window.pop_front();
                } else {
                    break;
                }
            }
            if window.is_empty() && atom.whitespace {
                continue;
            }
        }
        window.push_back(atom);
        total += atom.char_len;
    }
    emit(input, &window, &mut out);
    out
}

/// Whitespace-only chunks carry nothing retrievable and are dropped.
fn emit(input: &str, window: &VecDeque<Atom>, out: &mut Vec<(usize, String)>) {
    let first = match window.front() {
        Some(atom) => *atom,
        None => return,
    };
    let last = window.back().expect("non-empty window");
    let text = &input[first.byte_start..last.byte_end];
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return;
    }
    let leading_ws = text.chars().count() - text.trim_start().chars().count();
    out.push((first.char_start + leading_ws, trimmed.to_string()));
}
