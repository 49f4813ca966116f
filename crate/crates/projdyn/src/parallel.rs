//! Deterministic work sharding.
//!
//! Work is split into a fixed number of logical shards regardless of the
//! worker count; per-shard partial results are reduced in shard order, so the
//! outcome is bit-identical whether one thread or many consume the shards.

use std::sync::Mutex;

pub const DEFAULT_SHARDS: usize = 64;

/// Map `f` over the index range `0..n` split into `DEFAULT_SHARDS` contiguous
/// shards, running at most `workers` threads, and return per-shard outputs in
/// shard order.
pub fn sharded_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync,
{
    let shards = DEFAULT_SHARDS.min(n.max(1));
    let bounds: Vec<std::ops::Range<usize>> = (0..shards)
        .map(|s| (s * n / shards)..((s + 1) * n / shards))
        .collect();
    let workers = workers.max(1).min(shards);
    if workers == 1 {
        return bounds.into_iter().map(f).collect();
    }

    let next = Mutex::new(0usize);
    let out: Vec<Mutex<Option<T>>> = (0..shards).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let s = {
                    let mut guard = next.lock().unwrap();
                    let s = *guard;
                    if s >= shards {
                        return;
                    }
                    *guard += 1;
                    s
                };
                let value = f(bounds[s].clone());
                *out[s].lock().unwrap() = Some(value);
            });
        }
    });
    out.into_iter()
        .map(|m| m.into_inner().unwrap().expect("shard completed"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_change_result() {
        let f = |r: std::ops::Range<usize>| -> f64 { r.map(|i| (i as f64).sqrt()).sum() };
        let a: f64 = sharded_map(10_000, 1, f).iter().sum();
        let b: f64 = sharded_map(10_000, 7, f).iter().sum();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
