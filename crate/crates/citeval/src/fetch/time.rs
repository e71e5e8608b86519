//! Time abstraction so retry delays can be virtualized in tests and in
//! replay mode, where wall-clock timing would break byte-stable outputs.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use async_trait::async_trait;

#[async_trait]
pub trait TimeSource: Send + Sync {
    /// Monotonic milliseconds since an arbitrary origin.
    fn now_ms(&self) -> u64;
    async fn sleep_ms(&self, ms: u64);
}

/// Wall-clock time; sleeps really sleep.
pub struct SystemTime {
    origin: Instant,
}

impl SystemTime {
    pub fn new() -> Self {
        SystemTime {
            origin: Instant::now(),
        }
    }
}

impl Default for SystemTime {
    fn default() -> Self {
        Self::new()
    }
}

#[async_trait]
impl TimeSource for SystemTime {
    fn now_ms(&self) -> u64 {
        self.origin.elapsed().as_millis() as u64
    }

    async fn sleep_ms(&self, ms: u64) {
        tokio::time::sleep(Duration::from_millis(ms)).await;
    }
}

/// Deterministic clock: sleeping advances it instantly and every sleep is
/// recorded, which lets tests assert delay schedules without waiting.
#[derive(Default)]
pub struct VirtualTime {
    now: AtomicU64,
    sleeps: Mutex<Vec<u64>>,
}

impl VirtualTime {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn recorded_sleeps(&self) -> Vec<u64> {
        self.sleeps.lock().unwrap().clone()
    }

    pub fn total_slept_ms(&self) -> u64 {
        self.recorded_sleeps().iter().sum()
    }
}

#[async_trait]
impl TimeSource for VirtualTime {
    fn now_ms(&self) -> u64 {
        self.now.load(Ordering::SeqCst)
    }

    async fn sleep_ms(&self, ms: u64) {
        self.now.fetch_add(ms, Ordering::SeqCst);
        self.sleeps.lock().unwrap().push(ms);
    }
}
