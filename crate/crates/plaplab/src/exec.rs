//! Execution strategy for the data-parallel inner loops.
//!
//! Every loop routed through here writes each output slot from a pure
//! function of the index, so results are identical for both strategies and
//! for any thread count. The `parallel` feature (on by default) enables the
//! rayon-backed variant; without it only `Sequential` exists.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

/// Fill `out[i] = f(i)`.
pub fn fill<T, F>(exec: Exec, out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    match exec {
        Exec::Sequential => {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = f(i);
            }
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
        }
    }
}

/// Fill two slabs in one pass: `(a[i], b[i]) = f(i)`.
pub fn fill2<T, U, F>(exec: Exec, a: &mut [T], b: &mut [U], f: F)
where
    T: Send,
    U: Send,
    F: Fn(usize) -> (T, U) + Sync,
{
    assert_eq!(a.len(), b.len());
    match exec {
        Exec::Sequential => {
            for (i, (sa, sb)) in a.iter_mut().zip(b.iter_mut()).enumerate() {
                let (va, vb) = f(i);
                *sa = va;
                *sb = vb;
            }
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            a.par_iter_mut()
                .zip(b.par_iter_mut())
                .enumerate()
                .for_each(|(i, (sa, sb))| {
                    let (va, vb) = f(i);
                    *sa = va;
                    *sb = vb;
                });
        }
    }
}

/// Maximum of `f` over `0..n`; `NEG_INFINITY` when empty. Max is
/// order-independent, so both strategies agree bitwise.
pub fn max_f64<F>(exec: Exec, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    match exec {
        Exec::Sequential => (0..n).map(f).fold(f64::NEG_INFINITY, f64::max),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map(f)
                .reduce(|| f64::NEG_INFINITY, f64::max)
        }
    }
}

/// Deterministic map over `0..n` collected in index order.
pub fn map_vec<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send + Default + Clone,
    F: Fn(usize) -> T + Sync,
{
    let mut out = vec![T::default(); n];
    fill(exec, &mut out, f);
    out
}

/// Sum via a fixed pairwise reduction tree, independent of thread count.
/// Used for the summed norms so reductions are bitwise reproducible.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}
