//! Shared test helpers: a tiny seeded RNG and independent oracles for the
//! splitter, the retrieval ranking, the deterministic embedder, and the
//! calculator. Each oracle is coded separately from the implementation path
//! it checks.

#![allow(dead_code)]

/// SplitMix64: small, seedable, good enough for generating test inputs
/// reproducibly without pulling in an RNG crate.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish integer in [0, bound).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }
}

pub mod splitter_oracle {
    //! Greedy packing oracle for the recursive splitter, over the default
    //! separator hierarchy. Tokenizes by scanning the input left to right
    //! (separators tried in list order at each position), explodes oversized
    //! tokens into single characters, then packs tokens greedily to
    //! `chunk_size` with a snapped overlap carry computed by explicit
    //! suffix-sum search.

    #[derive(Debug, Clone, Copy)]
    struct Tok {
        byte_start: usize,
        byte_end: usize,
        char_start: usize,
        char_len: usize,
        ws: bool,
    }

    const SEPS: [&str; 3] = ["\n\n", "\n", " "];

    fn tokenize(text: &str, chunk_size: usize) -> Vec<Tok> {
        let mut raw: Vec<(usize, usize, usize, usize)> = Vec::new();
        let boundaries: Vec<(usize, char)> = text.char_indices().collect();
        let total_chars = boundaries.len();
        let byte_at = |char_at: usize| {
            if char_at == total_chars {
                text.len()
            } else {
                boundaries[char_at].0
            }
        };
        let mut at = 0usize;
        let mut word_start: Option<usize> = None;
        while at < total_chars {
            let here = byte_at(at);
            let sep = SEPS.iter().find(|sep| text[here..].starts_with(**sep));
            match sep {
                Some(sep) => {
                    if let Some(start) = word_start.take() {
                        raw.push((byte_at(start), here, start, at - start));
                    }
                    let sep_chars = sep.chars().count();
                    raw.push((here, here + sep.len(), at, sep_chars));
                    at += sep_chars;
                }
                None => {
                    if word_start.is_none() {
                        word_start = Some(at);
                    }
                    at += 1;
                }
            }
        }
        if let Some(start) = word_start {
            raw.push((byte_at(start), text.len(), start, total_chars - start));
        }

        let mut toks = Vec::new();
        for (byte_start, byte_end, char_start, char_len) in raw {
            let slice = &text[byte_start..byte_end];
            if char_len <= chunk_size {
                toks.push(Tok {
                    byte_start,
                    byte_end,
                    char_start,
                    char_len,
                    ws: slice.trim().is_empty(),
                });
            } else {
                for (offset, (rel, c)) in slice.char_indices().enumerate() {
                    toks.push(Tok {
                        byte_start: byte_start + rel,
                        byte_end: byte_start + rel + c.len_utf8(),
                        char_start: char_start + offset,
                        char_len: 1,
                        ws: c.is_whitespace(),
                    });
                }
            }
        }
        toks
    }

    pub fn split(text: &str, chunk_size: usize, overlap: usize) -> Vec<(usize, String)> {
        assert!(chunk_size > 0 && overlap < chunk_size);
        if text.trim().is_empty() {
            return Vec::new();
        }
        let toks = tokenize(text, chunk_size);
        let mut out: Vec<(usize, String)> = Vec::new();
        let mut win: Vec<Tok> = Vec::new();
        let emit = |win: &[Tok], out: &mut Vec<(usize, String)>| {
            let (first, last) = match (win.first(), win.last()) {
                (Some(first), Some(last)) => (*first, *last),
                _ => return,
            };
            let raw = &text[first.byte_start..last.byte_end];
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                return;
            }
            let lead = raw.chars().count() - raw.trim_start().chars().count();
            out.push((first.char_start + lead, trimmed.to_string()));
        };
        for tok in toks {
            if win.is_empty() && tok.ws {
                continue;
            }
            let total: usize = win.iter().map(|t| t.char_len).sum();
            if !win.is_empty() && total + tok.char_len > chunk_size {
                emit(&win, &mut out);
                // Longest suffix within the overlap budget that leaves room
                // for the incoming token, grown backwards from empty.
                let mut keep_from = win.len();
                let mut sum = 0usize;
                while keep_from > 0 {
                    let grown = sum + win[keep_from - 1].char_len;
                    if grown <= overlap && grown + tok.char_len <= chunk_size {
                        sum = grown;
                        keep_from -= 1;
                    } else {
                        break;
                    }
                }
                win = win.split_off(keep_from);
                while win.first().is_some_and(|t| t.ws) {
                    win.remove(0);
                }
                if win.is_empty() && tok.ws {
                    continue;
                }
            }
            win.push(tok);
        }
        emit(&win, &mut out);
        out
    }

    /// Random text mixing words, spaces, line and paragraph breaks,
    /// multibyte characters, and occasional very long unbroken words.
    pub fn random_text(rng: &mut super::SplitMix64, max_chars: usize) -> String {
        let target = rng.below(max_chars + 1);
        let mut text = String::new();
        while text.chars().count() < target {
            match rng.below(100) {
                0..=54 => {
                    let len = 1 + rng.below(12);
                    for _ in 0..len {
                        text.push((b'a' + rng.below(26) as u8) as char);
                    }
                }
                55..=74 => text.push(' '),
                75..=84 => text.push('\n'),
                85..=89 => text.push_str("\n\n"),
                90..=93 => text.push_str("é∂ü"),
                94..=96 => text.push('\t'),
                _ => {
                    let len = 200 + rng.below(600);
                    for _ in 0..len {
                        text.push((b'A' + rng.below(26) as u8) as char);
                    }
                }
            }
        }
        text
    }
}

pub mod embed_oracle {
    //! Independent hash-count-normalize embedding and cosine, mirroring the
    //! published contract: FNV-1a 64 over each whitespace token, bucket =
    //! hash mod dimension, counts L2-normalized.

    pub fn fnv1a64(bytes: &[u8]) -> u64 {
        let mut hash: u64 = 14695981039346656037;
        for &byte in bytes {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(1099511628211);
        }
        hash
    }

    /// Raw bucket counts before normalization; None when no tokens.
    pub fn counts(text: &str, dimension: usize) -> Option<Vec<f64>> {
        let mut counts = vec![0.0f64; dimension];
        let mut any = false;
        for token in text.split_whitespace() {
            let bucket = (fnv1a64(token.as_bytes()) % dimension as u64) as usize;
            counts[bucket] += 1.0;
            any = true;
        }
        any.then_some(counts)
    }

    pub fn unit(mut values: Vec<f64>) -> Vec<f64> {
        let mut sum_sq = 0.0f64;
        for v in &values {
            sum_sq += v * v;
        }
        let norm = sum_sq.sqrt();
        for v in &mut values {
            *v /= norm;
        }
        values
    }

    pub fn embed(text: &str, dimension: usize) -> Option<Vec<f64>> {
        counts(text, dimension).map(unit)
    }

    pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
        let mut dot = 0.0f64;
        let mut norm_a = 0.0f64;
        let mut norm_b = 0.0f64;
        for at in 0..a.len() {
            dot += a[at] * b[at];
            norm_a += a[at] * a[at];
            norm_b += b[at] * b[at];
        }
        dot / (norm_a.sqrt() * norm_b.sqrt())
    }

    /// Exhaustive top-k by repeated maximum selection, ties to the smaller
    /// id. Returns (id, similarity) pairs.
    pub fn brute_force_top_k(
        texts: &[String],
        query: &str,
        k: usize,
        dimension: usize,
    ) -> Vec<(u64, f64)> {
        let query_vector = embed(query, dimension).expect("query embeds");
        let scored: Vec<(u64, f64)> = texts
            .iter()
            .enumerate()
            .map(|(at, text)| {
                let vector = embed(text, dimension).expect("entry embeds");
                (at as u64, cosine(&vector, &query_vector))
            })
            .collect();
        let mut taken = vec![false; scored.len()];
        let mut out = Vec::new();
        for _ in 0..k.min(scored.len()) {
            let mut best: Option<usize> = None;
            for (at, &(id, sim)) in scored.iter().enumerate() {
                if taken[at] {
                    continue;
                }
                best = match best {
                    None => Some(at),
                    Some(b) => {
                        let (best_id, best_sim) = scored[b];
                        if sim > best_sim || (sim == best_sim && id < best_id) {
                            Some(at)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let b = best.expect("non-empty candidates");
            taken[b] = true;
            out.push(scored[b]);
        }
        out
    }
}

pub mod calc_oracle {
    //! Recursive-descent arithmetic evaluator, the second evaluator the
    //! calculator is checked against.

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(f64),
        Plus,
        Minus,
        Star,
        Slash,
        Open,
        Close,
    }

    fn lex(expr: &str) -> Result<Vec<Tok>, String> {
        let mut toks = Vec::new();
        let chars: Vec<char> = expr.chars().collect();
        let mut at = 0;
        while at < chars.len() {
            match chars[at] {
                ' ' | '\t' => at += 1,
                '+' => {
                    toks.push(Tok::Plus);
                    at += 1;
                }
                '-' => {
                    toks.push(Tok::Minus);
                    at += 1;
                }
                '*' => {
                    toks.push(Tok::Star);
                    at += 1;
                }
                '/' => {
                    toks.push(Tok::Slash);
                    at += 1;
                }
                '(' => {
                    toks.push(Tok::Open);
                    at += 1;
                }
                ')' => {
                    toks.push(Tok::Close);
                    at += 1;
                }
                '0'..='9' => {
                    let start = at;
                    while at < chars.len() && (chars[at].is_ascii_digit() || chars[at] == '.') {
                        at += 1;
                    }
                    let lit: String = chars[start..at].iter().collect();
                    toks.push(Tok::Num(lit.parse().map_err(|e| format!("{e}"))?));
                }
                other => return Err(format!("bad char {other}")),
            }
        }
        Ok(toks)
    }

    struct Parser {
        toks: Vec<Tok>,
        at: usize,
    }

    impl Parser {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.at)
        }

        fn expr(&mut self) -> Result<f64, String> {
            let mut value = self.term()?;
            loop {
                match self.peek() {
                    Some(Tok::Plus) => {
                        self.at += 1;
                        value += self.term()?;
                    }
                    Some(Tok::Minus) => {
                        self.at += 1;
                        value -= self.term()?;
                    }
                    _ => return Ok(value),
                }
            }
        }

        fn term(&mut self) -> Result<f64, String> {
            let mut value = self.factor()?;
            loop {
                match self.peek() {
                    Some(Tok::Star) => {
                        self.at += 1;
                        value *= self.factor()?;
                    }
                    Some(Tok::Slash) => {
                        self.at += 1;
                        let divisor = self.factor()?;
                        if divisor == 0.0 {
                            return Err("division by zero".into());
                        }
                        value /= divisor;
                    }
                    _ => return Ok(value),
                }
            }
        }

        fn factor(&mut self) -> Result<f64, String> {
            match self.peek().cloned() {
                Some(Tok::Num(value)) => {
                    self.at += 1;
                    Ok(value)
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    Ok(-self.factor()?)
                }
                Some(Tok::Open) => {
                    self.at += 1;
                    let value = self.expr()?;
                    match self.peek() {
                        Some(Tok::Close) => {
                            self.at += 1;
                            Ok(value)
                        }
                        _ => Err("missing )".into()),
                    }
                }
                other => Err(format!("unexpected {other:?}")),
            }
        }
    }

    pub fn eval(expr: &str) -> Result<f64, String> {
        let toks = lex(expr)?;
        let mut parser = Parser { toks, at: 0 };
        let value = parser.expr()?;
        if parser.at != parser.toks.len() {
            return Err("trailing tokens".into());
        }
        Ok(value)
    }

    /// Random well-formed expression from the grammar
    /// expr := term ((+|-) term)* ; term := factor ((*|/) factor)* ;
    /// factor := number | (expr).
    pub fn random_expression(rng: &mut super::SplitMix64, depth: usize) -> String {
        let mut out = String::new();
        gen_expr(rng, depth, &mut out);
        out
    }

    fn gen_expr(rng: &mut super::SplitMix64, depth: usize, out: &mut String) {
        gen_term(rng, depth, out);
        for _ in 0..rng.below(3) {
            out.push(if rng.chance(50) { '+' } else { '-' });
            gen_term(rng, depth, out);
        }
    }

    fn gen_term(rng: &mut super::SplitMix64, depth: usize, out: &mut String) {
        gen_factor(rng, depth, out);
        for _ in 0..rng.below(3) {
            out.push(if rng.chance(50) { '*' } else { '/' });
            gen_factor(rng, depth, out);
        }
    }

    fn gen_factor(rng: &mut super::SplitMix64, depth: usize, out: &mut String) {
        if depth > 0 && rng.chance(30) {
            out.push('(');
            gen_expr(rng, depth - 1, out);
            out.push(')');
        } else if rng.chance(30) {
            out.push_str(&format!("{}.{}", rng.below(1000), rng.below(1000)));
        } else {
            out.push_str(&format!("{}", rng.below(1000)));
        }
    }
}
