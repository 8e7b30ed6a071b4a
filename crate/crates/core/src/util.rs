//! Deterministic pseudorandomness and a small work pool.

use crate::scalar::{rat, Rat};

/// SplitMix64. Used everywhere a fixed-seed sample is needed so that outputs
/// are bit-identical across platforms and runs.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // Modulo bias is irrelevant for bound << 2^64.
        self.next_u64() % bound
    }

    /// Uniform f64 in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Positive rational in `[1/10, 10]` with numerator and denominator at
    /// most 100, by rejection.
    pub fn next_positive_rat(&mut self) -> Rat {
        loop {
            let num = self.next_below(100) as i64 + 1;
            let den = self.next_below(100) as i64 + 1;
            if num * 10 >= den && num <= 10 * den {
                return rat(num, den);
            }
        }
    }
}

/// Maps `f` over `items`, splitting the work over `jobs` threads. Results come
/// back in input order. `jobs <= 1` runs inline.
pub fn parallel_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let n = items.len();
    let mut slots: Vec<Option<R>> = Vec::with_capacity(n);
    slots.resize_with(n, || None);
    let work: Vec<(usize, T)> = items.into_iter().enumerate().collect();
    let queue = std::sync::Mutex::new(work);
    let slot_refs = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(n) {
            scope.spawn(|| loop {
                let item = queue.lock().unwrap().pop();
                match item {
                    None => break,
                    Some((idx, value)) => {
                        let out = f(value);
                        slot_refs.lock().unwrap()[idx] = Some(out);
                    }
                }
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}
