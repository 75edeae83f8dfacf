//! Data-parallel iteration with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the mapping helpers fan out
//! over the rayon pool; without it they compile to plain iterator loops with
//! no rayon dependency. Results are collected in index order either way, so
//! callers are deterministic regardless of scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, in parallel when the feature is enabled.
pub fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential variant, the baseline the benchmarks compare against.
pub fn map_indices_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let a = map_indices(100, |i| i * i);
        let b = map_indices_seq(100, |i| i * i);
        assert_eq!(a, b);
    }
}
