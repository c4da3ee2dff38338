//! Order-preserving parallel map over independent work items.

use rayon::prelude::*;

/// Applies `f` to every item and returns results in input order.
///
/// `jobs <= 1` runs on the calling thread; otherwise a dedicated pool of `jobs`
/// threads is used. The output is identical either way.
pub fn ordered_map<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
        Err(_) => items.into_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let serial = ordered_map(items.clone(), 1, |x| x * x);
        let par = ordered_map(items, 8, |x| x * x);
        assert_eq!(serial, par);
        assert_eq!(par[999], 998001);
    }
}
