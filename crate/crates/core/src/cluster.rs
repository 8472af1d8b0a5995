//! The rectangular initial cluster of `Gr(m, m+n)` and the reduction that
//! sends it to the initial cluster of `Gr(m-1, m+n-2)`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// Plücker indices of the initial cluster. `duplicates` lists any set
/// produced by more than one grid cell (expected to be empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialCluster {
    pub sets: BTreeSet<IndexSet>,
    pub duplicates: Vec<IndexSet>,
}

/// `{[m]} ∪ {I_ij : (i,j) ∈ [m]×[n]}` with
/// `I_ij = ([1,m] \ [i-l, i]) ∪ [j+m, j+m+l]`, `l = min(i-1, n-j)`.
pub fn initial_cluster(m: usize, n: usize) -> Result<InitialCluster> {
    if m == 0 || m > n {
        return Err(Error::InvalidContext { m, n });
    }
    let mut sets = BTreeSet::new();
    let mut duplicates = Vec::new();
    sets.insert(IndexSet::range(1, m));
    for i in 1..=m {
        for j in 1..=n {
            let l = (i - 1).min(n - j);
            let elems = (1..=m)
                .filter(|&x| x < i - l || x > i)
                .chain(j + m..=j + m + l);
            let set = IndexSet::from_sorted_unchecked(elems.collect());
            if !sets.insert(set.clone()) {
                duplicates.push(set);
            }
        }
    }
    Ok(InitialCluster { sets, duplicates })
}

/// Keeps the sets containing exactly one of `u`, `v`, deletes it, and
/// relabels `[ambient] \ {u, v}` onto `[ambient - 2]` preserving order.
/// Colliding images are merged.
pub fn r_reduce<'a>(
    sets: impl IntoIterator<Item = &'a IndexSet>,
    u: usize,
    v: usize,
    ambient: usize,
) -> Result<BTreeSet<IndexSet>> {
    if u == v || u == 0 || v == 0 || u > ambient || v > ambient {
        return Err(Error::PairOutOfRange { u, v, ambient });
    }
    let relabel = |x: usize| x - usize::from(x > u) - usize::from(x > v);
    Ok(sets
        .into_iter()
        .filter(|s| s.contains(u) != s.contains(v))
        .map(|s| {
            IndexSet::from_sorted_unchecked(
                s.iter().filter(|&x| x != u && x != v).map(relabel).collect(),
            )
        })
        .collect())
}
