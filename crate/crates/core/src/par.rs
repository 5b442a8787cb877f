//! Execution policy for the data-parallel loops (condition-row assembly,
//! sampling, rejection trials). With the `parallel` feature the default is
//! rayon; without it everything runs on the calling thread. Results are
//! always collected in index order, so output does not depend on the policy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


impl Exec {
    pub fn map<T, U, G>(self, items: &[T], f: G) -> Vec<U>
    where
        T: Sync,
        U: Send,
        G: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    pub fn map_range<U, G>(self, range: std::ops::Range<usize>, f: G) -> Vec<U>
    where
        U: Send,
        G: Fn(usize) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().map(f).collect(),
        }
    }

    /// First index in `range` (in index order) for which `f` succeeds.
    pub fn find_first<U, G>(self, range: std::ops::Range<u64>, f: G) -> Option<U>
    where
        U: Send,
        G: Fn(u64) -> Option<U> + Sync + Send,
    {
        match self {
            Exec::Sequential => range.into_iter().find_map(f),
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().find_map_first(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let seq = Exec::Sequential.map_range(0..100, |i| i * i);
        let def = Exec::default().map_range(0..100, |i| i * i);
        assert_eq!(seq, def);
        let hit = |i: u64| (i % 37 == 36 && i > 40).then_some(i);
        assert_eq!(Exec::Sequential.find_first(0..1000, hit), Some(73));
        assert_eq!(Exec::default().find_first(0..1000, hit), Some(73));
    }
}
