//! Level-by-level enumeration spread over the rayon pool. Each level is
//! sorted and deduplicated, so the result matches the sequential
//! enumerators exactly.

use hypersplit::covering::{enumerate_necs_levels, Necs};
use hypersplit::geometry::enumerate_levels;
use hypersplit::Decomposition;
use rayon::prelude::*;

fn levels<T, F>(n: usize, root: T, children: F) -> Vec<Vec<T>>
where
    T: Ord + Send + Sync + Clone,
    F: Fn(&T, u64) -> Vec<T> + Sync,
{
    let mut levels: Vec<Vec<T>> = vec![Vec::new(); n + 1];
    if n == 0 {
        return levels;
    }
    levels[1] = vec![root];
    for m in 2..=n {
        let parents: Vec<(&T, u64)> = (1..m)
            .flat_map(|smaller| {
                levels[smaller]
                    .iter()
                    .map(move |s| (s, (m - smaller + 1) as u64))
            })
            .collect();
        let mut level: Vec<T> = parents
            .into_par_iter()
            .flat_map_iter(|(s, p)| children(s, p))
            .collect();
        level.par_sort_unstable();
        level.dedup();
        levels[m] = level;
    }
    levels
}

pub fn decomposition_levels(d: usize, n: usize, sequential: bool) -> Vec<Vec<Decomposition>> {
    if sequential {
        return enumerate_levels(d, n);
    }
    levels(n, Decomposition::trivial(d), |s, p| {
        s.children_with_arity(p).collect()
    })
}

pub fn necs_levels(n: usize, sequential: bool) -> Vec<Vec<Necs>> {
    if sequential {
        return enumerate_necs_levels(n);
    }
    levels(n, Necs::trivial(), |c, r| {
        (0..c.len())
            .map(|i| c.split_at(i, r).expect("arity is at least 2"))
            .collect()
    })
}
