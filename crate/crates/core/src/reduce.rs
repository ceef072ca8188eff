//! Deterministic pairwise summation.
//!
//! The summation tree depends only on the number of terms: the index range is
//! halved recursively until a block holds at most [`LEAF`] terms, and each
//! block is summed left to right. The parallel variant walks the same tree
//! through `rayon::join`, so serial and parallel sums agree bit for bit for
//! any thread count.

use num_traits::Zero;

/// Largest block summed sequentially.
pub const LEAF: usize = 64;

/// Ranges shorter than this are not split across threads.
const PAR_MIN: usize = 2048;

/// Pairwise sum of a slice.
pub fn pairwise_sum<T>(terms: &[T]) -> T
where
    T: Copy + Zero,
{
    pairwise_sum_by(terms.len(), |i| terms[i])
}

/// Pairwise sum of `term(0) + ... + term(n - 1)` on the current thread.
pub fn pairwise_sum_by<T, F>(n: usize, term: F) -> T
where
    T: Zero,
    F: Fn(usize) -> T,
{
    serial(0, n, &term)
}

/// Same tree as [`pairwise_sum_by`], with subtrees evaluated in parallel.
pub fn par_pairwise_sum_by<T, F>(n: usize, term: F) -> T
where
    T: Zero + Send,
    F: Fn(usize) -> T + Sync,
{
    parallel(0, n, &term)
}

fn serial<T, F>(lo: usize, hi: usize, term: &F) -> T
where
    T: Zero,
    F: Fn(usize) -> T,
{
    if hi - lo <= LEAF {
        return (lo..hi).fold(T::zero(), |acc, i| acc + term(i));
    }
    let mid = lo + (hi - lo) / 2;
    serial(lo, mid, term) + serial(mid, hi, term)
}

fn parallel<T, F>(lo: usize, hi: usize, term: &F) -> T
where
    T: Zero + Send,
    F: Fn(usize) -> T + Sync,
{
    if hi - lo < PAR_MIN {
        return serial(lo, hi, term);
    }
    let mid = lo + (hi - lo) / 2;
    let (a, b) = rayon::join(|| parallel(lo, mid, term), || parallel(mid, hi, term));
    a + b
}
