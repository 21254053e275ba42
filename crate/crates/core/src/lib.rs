//! Laboratory for round elimination via self-reduction on the b-grabbing
//! problem: LOCAL-model simulation on ported regular graphs, reductions from
//! maximal b-matching and edge colouring, the one-round-faster derivation,
//! and exact checks of the probabilistic inequalities behind it.

pub mod error;
pub mod graph;
pub mod local;
pub mod problems;
pub mod reductions;
pub mod baselines;
pub mod oracle;
pub mod rng;
pub mod selfred;

pub use error::{Error, Result};

/// `(0..n).map(f)` collected in index order, in parallel when enabled.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
