//! Pluggable execution for embarrassingly parallel loops.
//!
//! The evaluators compute independent per-item partials through an
//! [`Executor`] and then reduce them in a fixed order, so results do not
//! depend on how the work was scheduled.

use alloc::vec::Vec;

pub trait Executor {
    /// `(0..len).map(f).collect()`, possibly in parallel; output order is
    /// always index order.
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}
