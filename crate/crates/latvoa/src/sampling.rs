//! Seeded sampling and an order-stable worker pool.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic sampler: the same seed and stream give the same draws on
/// every platform.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Independent stream `stream` of the generator seeded with `seed`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// `count` distinct indices below `len` in increasing order, or all of
    /// them when `count >= len`.
    pub fn distinct(&mut self, len: usize, count: usize) -> Vec<usize> {
        if count >= len {
            return (0..len).collect();
        }
        let mut picked = index::sample(&mut self.rng, len, count).into_vec();
        picked.sort_unstable();
        picked
    }

    pub fn below(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// Number of workers: the available parallelism, at most `cap`.
pub fn worker_count(cap: usize) -> usize {
    thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .clamp(1, cap.max(1))
}

type Task<'a, T> = Box<dyn FnOnce() -> T + Send + 'a>;

/// Runs `tasks` on at most `workers` threads; results keep task order.
pub fn run_ordered<'a, T: Send>(
    tasks: Vec<Box<dyn FnOnce() -> T + Send + 'a>>,
    workers: usize,
) -> Vec<T> {
    let n = tasks.len();
    if workers <= 1 || n <= 1 {
        return tasks.into_iter().map(|t| t()).collect();
    }
    let queue: Vec<Mutex<Option<Task<'a, T>>>> =
        tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let results: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..workers.min(n) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let task = queue[i]
                    .lock()
                    .expect("task lock")
                    .take()
                    .expect("task taken once");
                let out = task();
                *results[i].lock().expect("result lock") = Some(out);
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.into_inner().expect("result lock").expect("task ran"))
        .collect()
}
