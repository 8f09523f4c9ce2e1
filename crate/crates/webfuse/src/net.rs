//! Shared HTTP plumbing.
//!
//! Every outbound HTTP attempt made by this crate passes through
//! [`count_request`], so tests can assert that replay/offline paths perform
//! zero network activity by snapshotting [`request_count`] around the code
//! under test.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

static REQUESTS: AtomicU64 = AtomicU64::new(0);

/// Total number of outbound HTTP attempts made by this process.
pub fn request_count() -> u64 {
    REQUESTS.load(Ordering::SeqCst)
}

pub(crate) fn count_request() {
    REQUESTS.fetch_add(1, Ordering::SeqCst);
}

pub(crate) fn http_client(timeout_ms: u64) -> reqwest::blocking::Client {
    reqwest::blocking::Client::builder()
        .timeout(Duration::from_millis(timeout_ms))
        .build()
        .expect("HTTP client construction cannot fail with static options")
}
