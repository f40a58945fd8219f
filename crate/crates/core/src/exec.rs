//! Data-parallel sweep driver.
//!
//! Sweeps hand out disjoint work items (usually pre-chunked coordinate
//! ranges); partial results merge through an associative, commutative
//! `merge`, so the final value does not depend on scheduling. The
//! `parallel` feature routes through rayon; without it the same API runs
//! sequentially. `map_reduce_seq` is always available so benchmarks can
//! compare both lanes in one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential reference lane.
pub fn map_reduce_seq<I, R, F, M>(items: Vec<I>, eval: F, identity: R, merge: M) -> R
where
    F: Fn(I) -> R,
    M: Fn(R, R) -> R,
{
    items.into_iter().fold(identity, |acc, it| merge(acc, eval(it)))
}

/// Parallel lane (rayon) when the feature is on, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn map_reduce<I, R, F, M>(items: Vec<I>, eval: F, identity: R, merge: M) -> R
where
    I: Send,
    R: Send + Clone + Sync,
    F: Fn(I) -> R + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    items
        .into_par_iter()
        .map(eval)
        .reduce(|| identity.clone(), &merge)
}

#[cfg(not(feature = "parallel"))]
pub fn map_reduce<I, R, F, M>(items: Vec<I>, eval: F, identity: R, merge: M) -> R
where
    I: Send,
    R: Send + Clone + Sync,
    F: Fn(I) -> R + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    map_reduce_seq(items, eval, identity, merge)
}

/// Splits an inclusive range into at most `chunks` contiguous pieces.
pub fn chunk_range(lo: i64, hi: i64, chunks: usize) -> Vec<(i64, i64)> {
    if hi < lo {
        return Vec::new();
    }
    let len = (hi - lo + 1) as usize;
    let chunks = chunks.clamp(1, len);
    let base = len / chunks;
    let extra = len % chunks;
    let mut out = Vec::with_capacity(chunks);
    let mut start = lo;
    for i in 0..chunks {
        let sz = base + usize::from(i < extra);
        let end = start + sz as i64 - 1;
        out.push((start, end));
        start = end + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range() {
        for chunks in 1..10 {
            let parts = chunk_range(-7, 13, chunks);
            let mut all = Vec::new();
            for (a, b) in parts {
                for v in a..=b {
                    all.push(v);
                }
            }
            assert_eq!(all, (-7..=13).collect::<Vec<_>>());
        }
    }

    #[test]
    fn lanes_agree() {
        let items: Vec<i64> = (1..=100).collect();
        let seq = map_reduce_seq(items.clone(), |x| x * x, 0i64, |a, b| a + b);
        let par = map_reduce(items, |x| x * x, 0i64, |a, b| a + b);
        assert_eq!(seq, par);
        assert_eq!(seq, 338350);
    }
}
