pub mod algcore;
pub mod angulation;
pub mod error;
pub mod exactla;
pub mod frobstab;
pub mod standardcons;

pub use error::{Error, Result};

/// Worker threads: `NANGLE_THREADS` if set to a positive number, otherwise
/// the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("NANGLE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t: &usize| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// `f` on every item, spread over at most `threads` scoped threads;
/// results keep the input order.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
