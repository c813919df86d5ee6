//! Work distribution for the (node, time) sweeps.
//!
//! Every backend maps an index range through a pure function and returns the
//! results in index order, so outputs never depend on how work was split.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Backend::Parallel => "parallel",
        }
    }

    pub(crate) fn try_map<T, E, F>(self, len: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        match self {
            Backend::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Backend::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }
}
