//! Bounded worker pool with order-preserving assembly.
//!
//! Jobs are pulled from a shared counter and results land in their input
//! slot, so the output is identical for any worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub fn run_ordered<T, F>(count: usize, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(count.max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= count {
                    break;
                }
                let out = job(idx);
                results.lock().expect("pool poisoned")[idx] = Some(out);
            });
        }
    });
    results
        .into_inner()
        .expect("pool poisoned")
        .into_iter()
        .map(|slot| slot.expect("every job ran"))
        .collect()
}
