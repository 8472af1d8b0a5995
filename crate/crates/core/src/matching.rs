//! Noncrossing perfect matchings of a finite ground set.
//!
//! A matching is admissible when its pairs can be removed one at a time,
//! each pair consecutive in what is left of the ground set. This is the
//! same as having no two pairs `{a,c}`, `{b,d}` with `a < b < c < d`;
//! both predicates are exposed so the equivalence can be checked.

use std::fmt;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// The order-reversing involution `u ↦ 2·half + 1 − u` on `[2·half]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarMap {
    half: usize,
}

impl StarMap {
    pub fn new(half: usize) -> Self {
        Self { half }
    }

    pub fn half(&self) -> usize {
        self.half
    }

    /// `None` outside `[1, 2·half]`.
    pub fn apply(&self, u: usize) -> Option<usize> {
        (1..=2 * self.half).contains(&u).then(|| 2 * self.half + 1 - u)
    }

    pub fn preserves(&self, set: &IndexSet) -> bool {
        set.iter()
            .all(|u| self.apply(u).is_some_and(|s| set.contains(s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingMode {
    /// Every noncrossing perfect matching.
    Plain,
    /// Only those mapped to themselves by the star map.
    Symmetric(StarMap),
}

/// A noncrossing perfect matching of `ground`. Pairs are stored as
/// `(u, v)` with `u < v`, sorted by `u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    ground: IndexSet,
}

impl Matching {
    /// Validates that `pairs` partition `ground` without crossings.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>, ground: IndexSet) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        let mut covered: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        covered.sort_unstable();
        if pairs.iter().any(|&(a, b)| a == b) || covered != ground.as_slice() {
            return Err(Error::InvalidMatching(format!(
                "pairs {pairs:?} do not partition {ground}"
            )));
        }
        if has_crossing(&pairs) {
            return Err(Error::InvalidMatching(format!("pairs {pairs:?} cross")));
        }
        Ok(Self { pairs, ground })
    }

    /// The empty matching of the empty ground set.
    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            ground: IndexSet::empty(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn ground(&self) -> &IndexSet {
        &self.ground
    }

    pub fn eta(&self) -> usize {
        self.pairs.len()
    }

    pub fn contains_pair(&self, u: usize, v: usize) -> bool {
        self.pairs.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn is_star_symmetric(&self, star: StarMap) -> bool {
        self.pairs.iter().all(|&(a, b)| match (star.apply(a), star.apply(b)) {
            (Some(sa), Some(sb)) => self.contains_pair(sa, sb),
            _ => false,
        })
    }

    /// Relabels the ground set through a strictly increasing map.
    pub fn map_monotone(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            pairs: self.pairs.iter().map(|&(a, b)| (f(a), f(b))).collect(),
            ground: self.ground.map_monotone(f),
        }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        write!(f, "}}")
    }
}

/// True if some `{a,c}`, `{b,d}` satisfy `a < b < c < d`.
pub fn has_crossing(pairs: &[(usize, usize)]) -> bool {
    let norm: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    norm.iter().any(|&(a, c)| {
        norm.iter()
            .any(|&(b, d)| a < b && b < c && c < d)
    })
}

/// A removal order in which each pair is consecutive in the ground set
/// minus the pairs removed before it, or `None` if there is none.
///
/// Greedy removal is complete: removing any currently-consecutive pair
/// never destroys the existence of an order for the rest.
pub fn removal_order(pairs: &[(usize, usize)], ground: &IndexSet) -> Option<Vec<(usize, usize)>> {
    let mut remaining: Vec<usize> = ground.iter().collect();
    let mut left: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let pos = left.iter().position(|&(a, b)| {
            remaining
                .windows(2)
                .any(|w| w[0] == a && w[1] == b)
        })?;
        let (a, b) = left.swap_remove(pos);
        remaining.retain(|&x| x != a && x != b);
        order.push((a, b));
    }
    remaining.is_empty().then_some(order)
}

/// Noncrossing perfect matchings of `ground` in lexicographic order of
/// their sorted pair lists.
///
/// The smallest element pairs with a partner at an odd position offset;
/// the elements strictly inside and strictly outside that pair are matched
/// recursively, inner choices varying slowest.
pub fn enumerate_matchings(ground: &IndexSet, mode: MatchingMode) -> Result<Vec<Matching>> {
    if ground.len() % 2 == 1 {
        return Err(Error::OddGroundSet(ground.len()));
    }
    if let MatchingMode::Symmetric(star) = mode {
        if !star.preserves(ground) {
            return Err(Error::NotStarInvariant { half: star.half() });
        }
    }
    let elems = ground.as_slice();
    let all = matchings_of(elems);
    let out = all
        .into_iter()
        .map(|pairs| Matching {
            pairs,
            ground: ground.clone(),
        })
        .filter(|m| match mode {
            MatchingMode::Plain => true,
            MatchingMode::Symmetric(star) => m.is_star_symmetric(star),
        })
        .collect();
    Ok(out)
}

fn matchings_of(elems: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let first = elems[0];
    let mut out = Vec::new();
    for partner in (1..elems.len()).step_by(2) {
        let inner = matchings_of(&elems[1..partner]);
        let outer = matchings_of(&elems[partner + 1..]);
        for a in &inner {
            for b in &outer {
                let mut pairs = Vec::with_capacity(elems.len() / 2);
                pairs.push((first, elems[partner]));
                pairs.extend_from_slice(a);
                pairs.extend_from_slice(b);
                pairs.sort_unstable();
                out.push(pairs);
            }
        }
    }
    out
}
