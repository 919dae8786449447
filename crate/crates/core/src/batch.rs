//! Order-preserving batch maps.
//!
//! With the `parallel` feature (on by default) [`map`] fans out over rayon's
//! global pool; without it everything runs on the calling thread. Output
//! order always matches input order.

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

/// Sequential map.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Rayon map; `collect` on an indexed iterator keeps input order.
#[cfg(feature = "parallel")]
pub fn map_par<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Whether [`map`] runs in parallel in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let xs: Vec<u64> = (0..10_000).collect();
        let ys = map(&xs, |x| x * 3);
        assert_eq!(ys, map_seq(&xs, |x| x * 3));
        assert!(ys.windows(2).all(|w| w[0] < w[1]));
    }
}
