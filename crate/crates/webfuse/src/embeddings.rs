//! Embedding providers and vector math.
//!
//! Two providers sit behind the [`Embedder`] trait: a remote client speaking
//! the de-facto embeddings endpoint shape, and a deterministic hashed
//! bag-of-words embedder that makes every downstream retrieval test runnable
//! offline. All vectors are unit-normalized at construction, so cosine
//! ranking is equivalent to negative-squared-Euclidean ranking and the choice
//! of distance metric cannot change top-k order.

use serde::{Deserialize, Serialize};

use crate::net;

/// Output width of the default sentence-embedding model (all-MiniLM-L6-v2).
pub const DEFAULT_DIMENSION: usize = 384;
pub const DEFAULT_MODEL_NAME: &str = "all-MiniLM-L6-v2";

/// Env var holding the credential for remote embedding endpoints.
pub const EMBEDDER_API_KEY_VAR: &str = "EMBEDDER_API_KEY";

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("embed called with an empty batch")]
    EmptyBatch,
    #[error("embed called with an empty text at position {0}")]
    EmptyText(usize),
    #[error("text embeds to the zero vector: {0:?}")]
    DegenerateInput(String),
    #[error("vector has no finite non-zero component")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("embedder spec invalid: {0}")]
    InvalidSpec(String),
    #[error("embedding endpoint transport failure: {0}")]
    Transport(String),
    #[error("embedding endpoint returned HTTP {status}")]
    Http { status: u16 },
    #[error("malformed embedding response: {0}")]
    MalformedResponse(String),
}

/// A fixed-dimension real vector, unit-normalized at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

impl EmbeddingVector {
    /// Normalizes `values` to unit Euclidean length. The all-zero (or
    /// non-finite) vector is rejected.
    pub fn unit(values: Vec<f64>) -> Result<Self, EmbedError> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(EmbedError::ZeroVector);
        }
        Ok(Self { values: values.into_iter().map(|v| v / norm).collect() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Cosine similarity of two non-zero vectors of equal dimension, in [-1, 1].
pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, EmbedError> {
    if a.dimension() != b.dimension() {
        return Err(EmbedError::DimensionMismatch { expected: a.dimension(), got: b.dimension() });
    }
    let dot: f64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum();
    let norm_a = a.norm();
    let norm_b = b.norm();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(EmbedError::ZeroVector);
    }
    Ok(dot / (norm_a * norm_b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedderKind {
    Remote,
    DeterministicTest,
}

/// How to construct an embedding provider.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbedderSpec {
    pub kind: EmbedderKind,
    pub endpoint: String,
    pub model_name: String,
    pub dimension: usize,
    pub timeout_ms: u64,
}

impl Default for EmbedderSpec {
    fn default() -> Self {
        Self {
            kind: EmbedderKind::DeterministicTest,
            endpoint: String::new(),
            model_name: DEFAULT_MODEL_NAME.to_string(),
            dimension: DEFAULT_DIMENSION,
            timeout_ms: 30_000,
        }
    }
}

impl EmbedderSpec {
    pub fn deterministic(dimension: usize) -> Self {
        Self { kind: EmbedderKind::DeterministicTest, dimension, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), EmbedError> {
        if self.dimension == 0 {
            return Err(EmbedError::InvalidSpec("dimension must be at least 1".into()));
        }
        if self.kind == EmbedderKind::Remote && self.endpoint.is_empty() {
            return Err(EmbedError::InvalidSpec("remote embedder requires an endpoint".into()));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Box<dyn Embedder>, EmbedError> {
        self.validate()?;
        match self.kind {
            EmbedderKind::DeterministicTest => {
                Ok(Box::new(DeterministicEmbedder::new(self.dimension)))
            }
            EmbedderKind::Remote => Ok(Box::new(RemoteEmbedder::new(
                self.endpoint.clone(),
                self.model_name.clone(),
                self.dimension,
                self.timeout_ms,
            ))),
        }
    }
}

/// Turns texts into unit vectors of a fixed dimension.
///
/// Implementations must be order-preserving (one vector per input text) and
/// safe to call from concurrent threads.
pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;

    fn embed(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError>;

    fn embed_one(&self, text: &str) -> Result<EmbeddingVector, EmbedError> {
        let mut vectors = self.embed(std::slice::from_ref(&text.to_string()))?;
        Ok(vectors.remove(0))
    }
}

fn check_batch(texts: &[String]) -> Result<(), EmbedError> {
    if texts.is_empty() {
        return Err(EmbedError::EmptyBatch);
    }
    for (at, text) in texts.iter().enumerate() {
        if text.is_empty() {
            return Err(EmbedError::EmptyText(at));
        }
    }
    Ok(())
}

/// Deterministic hashed bag-of-words embedder for offline tests.
///
/// Each whitespace token is hashed (FNV-1a, 64-bit) into one of `dimension`
/// buckets; the bucket counts are then L2-normalized. A pure function of the
/// text, so lexically similar texts score higher under cosine similarity,
/// which is the only property retrieval tests rely on.
#[derive(Debug, Clone)]
pub struct DeterministicEmbedder {
    dimension: usize,
}

impl DeterministicEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "dimension must be at least 1");
        Self { dimension }
    }
}

impl Embedder for DeterministicEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        check_batch(texts)?;
        texts
            .iter()
            .map(|text| {
                let mut counts = vec![0f64; self.dimension];
                let mut tokens = 0usize;
                for token in text.split_whitespace() {
                    let bucket = (fnv1a64(token.as_bytes()) % self.dimension as u64) as usize;
                    counts[bucket] += 1.0;
                    tokens += 1;
                }
                if tokens == 0 {
                    return Err(EmbedError::DegenerateInput(text.clone()));
                }
                EmbeddingVector::unit(counts)
            })
            .collect()
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET_BASIS;
    for &byte in bytes {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}

/// Client for a remote embeddings endpoint.
///
/// Wire contract: `POST {endpoint}` with body
/// `{"model": <name>, "input": [<text>, ...]}`, response
/// `{"data": [{"embedding": [f64, ...]}, ...]}`. The credential, when
/// present, is read from `EMBEDDER_API_KEY` and sent as a bearer token.
pub struct RemoteEmbedder {
    endpoint: String,
    model_name: String,
    dimension: usize,
    timeout_ms: u64,
}

impl RemoteEmbedder {
    pub fn new(endpoint: String, model_name: String, dimension: usize, timeout_ms: u64) -> Self {
        Self { endpoint, model_name, dimension, timeout_ms }
    }
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingDatum>,
}

#[derive(Deserialize)]
struct EmbeddingDatum {
    embedding: Vec<f64>,
}

impl Embedder for RemoteEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        check_batch(texts)?;
        let body = serde_json::json!({
            "model": self.model_name,
            "input": texts,
        });
        let client = net::http_client(self.timeout_ms);
        let mut request = client.post(&self.endpoint).json(&body);
        if let Ok(key) = std::env::var(EMBEDDER_API_KEY_VAR) {
            request = request.bearer_auth(key);
        }
        net::count_request();
        let response = request.send().map_err(|e| EmbedError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(EmbedError::Http { status: status.as_u16() });
        }
        let parsed: EmbeddingResponse = response
            .json()
            .map_err(|e| EmbedError::MalformedResponse(e.to_string()))?;
        if parsed.data.len() != texts.len() {
            return Err(EmbedError::MalformedResponse(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                parsed.data.len()
            )));
        }
        parsed
            .data
            .into_iter()
            .map(|datum| {
                if datum.embedding.len() != self.dimension {
                    return Err(EmbedError::DimensionMismatch {
                        expected: self.dimension,
                        got: datum.embedding.len(),
                    });
                }
                EmbeddingVector::unit(datum.embedding)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn embed_one(text: &str, d: usize) -> EmbeddingVector {
        DeterministicEmbedder::new(d).embed_one(text).unwrap()
    }

    #[test]
    fn normalization_erases_count_scale() {
        assert_eq!(embed_one("a a", 16).values(), embed_one("a", 16).values());
    }

    #[test]
    fn same_text_twice_in_one_batch_is_identical() {
        let batch = vec!["the sky is blue".to_string(), "the sky is blue".to_string()];
        let vectors = DeterministicEmbedder::new(32).embed(&batch).unwrap();
        assert_eq!(vectors[0], vectors[1]);
    }

    #[test]
    fn alpha_beta_matches_frozen_hash_oracle() {
        // fnv1a64("alpha") % 8 == 3 and fnv1a64("beta") % 8 == 7; both
        // buckets hold count 1, so the unit vector is 1/sqrt(2) at each.
        let v = embed_one("alpha beta", 8);
        let expected = 1.0 / 2f64.sqrt();
        for (bucket, &value) in v.values().iter().enumerate() {
            let want = if bucket == 3 || bucket == 7 { expected } else { 0.0 };
            assert!((value - want).abs() < 1e-12, "bucket {bucket}: {value} != {want}");
        }
    }

    #[test]
    fn unit_norm_holds_after_normalization() {
        let v = embed_one("some words repeated words", 64);
        assert!((v.norm() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let err = DeterministicEmbedder::new(8).embed_one("   ").unwrap_err();
        assert!(matches!(err, EmbedError::DegenerateInput(_)));
        assert!(matches!(EmbeddingVector::unit(vec![0.0; 4]), Err(EmbedError::ZeroVector)));
    }

    #[test]
    fn empty_batch_and_empty_text_are_errors() {
        let embedder = DeterministicEmbedder::new(8);
        assert!(matches!(embedder.embed(&[]), Err(EmbedError::EmptyBatch)));
        assert!(matches!(
            embedder.embed(&["x".to_string(), String::new()]),
            Err(EmbedError::EmptyText(1))
        ));
    }

    #[test]
    fn cosine_identity_and_orthogonality() {
        let v = embed_one("the sky is blue", 32);
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);

        let e1 = EmbeddingVector::unit(vec![1.0, 0.0, 0.0]).unwrap();
        let e2 = EmbeddingVector::unit(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(cosine_similarity(&e1, &e2).unwrap(), 0.0);
    }

    #[test]
    fn cosine_of_known_pair_matches_direct_computation() {
        let a = EmbeddingVector::unit(vec![1.0, 0.0]).unwrap();
        let b = EmbeddingVector::unit(vec![1.0, 1.0]).unwrap();
        let got = cosine_similarity(&a, &b).unwrap();
        // Direct dot-product oracle: 1 / sqrt(2).
        assert!((got - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(format!("{got:.8}"), "0.70710678");
    }

    #[test]
    fn cosine_rejects_dimension_mismatch() {
        let a = EmbeddingVector::unit(vec![1.0, 0.0]).unwrap();
        let b = EmbeddingVector::unit(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            cosine_similarity(&a, &b),
            Err(EmbedError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn remote_spec_requires_endpoint() {
        let spec = EmbedderSpec {
            kind: EmbedderKind::Remote,
            endpoint: String::new(),
            ..EmbedderSpec::default()
        };
        assert!(matches!(spec.build(), Err(EmbedError::InvalidSpec(_))));
    }

    fn arb_words() -> impl Strategy<Value = String> {
        proptest::collection::vec(proptest::string::string_regex("[a-z]{1,8}").unwrap(), 1..12)
            .prop_map(|words| words.join(" "))
    }

    fn arb_vector() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-100.0f64..100.0, 4)
            .prop_filter("non-zero", |v| v.iter().any(|x| x.abs() > 1e-6))
    }

    proptest! {
        #[test]
        fn cosine_is_symmetric_and_bounded(a in arb_vector(), b in arb_vector()) {
            let va = EmbeddingVector::unit(a).unwrap();
            let vb = EmbeddingVector::unit(b).unwrap();
            let ab = cosine_similarity(&va, &vb).unwrap();
            let ba = cosine_similarity(&vb, &va).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&ab));
        }

        #[test]
        fn cosine_is_invariant_under_positive_scaling(a in arb_vector(), b in arb_vector(), scale in 0.001f64..1000.0) {
            let va = EmbeddingVector::unit(a).unwrap();
            let scaled: Vec<f64> = b.iter().map(|x| x * scale).collect();
            let vb = EmbeddingVector::unit(b).unwrap();
            let vb_scaled = EmbeddingVector::unit(scaled).unwrap();
            let plain = cosine_similarity(&va, &vb).unwrap();
            let rescaled = cosine_similarity(&va, &vb_scaled).unwrap();
            prop_assert!((plain - rescaled).abs() < 1e-9);
        }

        #[test]
        fn batches_concatenate(xs in proptest::collection::vec(arb_words(), 1..5), ys in proptest::collection::vec(arb_words(), 1..5)) {
            let embedder = DeterministicEmbedder::new(16);
            let joined: Vec<String> = xs.iter().chain(&ys).cloned().collect();
            let whole = embedder.embed(&joined).unwrap();
            let mut parts = embedder.embed(&xs).unwrap();
            parts.extend(embedder.embed(&ys).unwrap());
            prop_assert_eq!(whole, parts);
        }
    }
}
