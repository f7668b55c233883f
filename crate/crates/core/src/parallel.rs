//! Partition-and-merge execution for the table scans.
//!
//! Workers receive disjoint contiguous index ranges over immutable inputs and
//! return partial results; the caller folds them in chunk order. Every
//! reduction used in this crate (key-wise histogram sum, max, integer sum) is
//! order-insensitive, so results are identical for any thread count.

use std::ops::Range;

/// Splits `0..total` into at most `threads` contiguous chunks and runs
/// `work` on each, returning the partial results in chunk order.
/// `threads == 1` runs inline on the calling thread.
pub(crate) fn run_chunks<T, W>(total: u64, threads: usize, work: W) -> Vec<T>
where
    T: Send,
    W: Fn(Range<u64>) -> T + Sync,
{
    let threads = threads.max(1).min(total.max(1) as usize);
    if threads == 1 {
        return vec![work(0..total)];
    }
    let chunk = total.div_ceil(threads as u64);
    std::thread::scope(|scope| {
        let work = &work;
        let handles: Vec<_> = (0..threads as u64)
            .map(|i| {
                let start = i * chunk;
                let end = ((i + 1) * chunk).min(total);
                scope.spawn(move || work(start..end))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
