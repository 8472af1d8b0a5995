//! Sorted sets of positive integers and order-preserving relabelings.

use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing sequence of integers `>= 1`: the index of one
/// Plücker coordinate, or any other subset of `[m+n]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Accepts elements in any order; rejects zero and duplicates.
    pub fn new(elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = elements.into_iter().collect();
        v.sort_unstable();
        if v.first() == Some(&0) || v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet(v));
        }
        Ok(Self(v))
    }

    /// The interval `[lo, hi]`, empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        debug_assert!(lo >= 1 || lo > hi);
        Self((lo..=hi).collect())
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(v.first() != Some(&0));
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x <= y {
                        a.next();
                    }
                    if y <= x {
                        b.next();
                    }
                    v.push(x.min(y));
                }
                (Some(&&x), None) => {
                    a.next();
                    v.push(x);
                }
                (None, Some(&&y)) => {
                    b.next();
                    v.push(y);
                }
                (None, None) => break,
            }
        }
        Self(v)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self(self.iter().filter(|&x| other.contains(x)).collect())
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.union(other).difference(&self.intersection(other))
    }

    /// Complement inside `[1, ambient]`.
    pub fn complement(&self, ambient: usize) -> Self {
        Self((1..=ambient).filter(|&x| !self.contains(x)).collect())
    }

    /// `(self \ {remove}) ∪ {insert}`; callers guarantee `remove ∈ self`, `insert ∉ self`.
    pub(crate) fn replace(&self, remove: usize, insert: usize) -> Self {
        let mut v: Vec<usize> = self.iter().filter(|&x| x != remove).collect();
        let pos = v.partition_point(|&x| x < insert);
        v.insert(pos, insert);
        Self(v)
    }

    /// Image under a strictly increasing map; the result stays sorted.
    pub(crate) fn map_monotone(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_sorted_unchecked(self.iter().map(f).collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// The unique order-preserving bijection `S -> [|S|]`, `s_k ↦ k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderPreservingMap {
    domain: IndexSet,
}

impl OrderPreservingMap {
    pub fn new(domain: IndexSet) -> Self {
        Self { domain }
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.domain.0.binary_search(&x).ok().map(|k| k + 1)
    }

    pub fn inverse(&self, k: usize) -> Option<usize> {
        k.checked_sub(1).and_then(|i| self.domain.0.get(i).copied())
    }

    /// Image of a subset of the domain; `None` if some element falls outside it.
    pub fn apply_set(&self, set: &IndexSet) -> Option<IndexSet> {
        set.iter()
            .map(|x| self.apply(x))
            .collect::<Option<Vec<_>>>()
            .map(IndexSet::from_sorted_unchecked)
    }

    /// Pairs `(s_k, k)` in increasing order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.domain.iter().enumerate().map(|(k, s)| (s, k + 1))
    }
}

pub fn order_preserving_map(set: &IndexSet) -> OrderPreservingMap {
    OrderPreservingMap::new(set.clone())
}

/// All pairs `(u, v)`, `u < v`, adjacent in the sorted order of `set`.
/// Empty when `|set| < 2`.
pub fn consecutive_pairs(set: &IndexSet) -> Vec<(usize, usize)> {
    set.0.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Entrywise `(min(I,J), max(I,J))` of the sorted sequences.
pub fn lattice_min_max(i: &IndexSet, j: &IndexSet) -> Result<(IndexSet, IndexSet)> {
    if i.len() != j.len() {
        return Err(Error::SizeMismatch(format!(
            "lattice operations need |I| = |J|, got {} and {}",
            i.len(),
            j.len()
        )));
    }
    let (lo, hi): (Vec<usize>, Vec<usize>) =
        i.iter().zip(j.iter()).map(|(a, b)| (a.min(b), a.max(b))).unzip();
    Ok((
        IndexSet::from_sorted_unchecked(lo),
        IndexSet::from_sorted_unchecked(hi),
    ))
}

/// Binomial coefficient as `u128`; exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

/// `C_η = binom(2η, η) / (η + 1)`.
pub fn catalan(eta: usize) -> u128 {
    binomial(2 * eta, eta) / (eta as u128 + 1)
}

/// All `k`-element subsets of `[1, ground]` in lexicographic order.
pub fn subsets(ground: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, ground: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if cur.len() == k {
            out.push(IndexSet::from_sorted_unchecked(cur.clone()));
            return;
        }
        let need = k - cur.len();
        for x in start..=ground {
            if ground - x + 1 < need {
                break;
            }
            cur.push(x);
            rec(x + 1, ground, k, cur, out);
            cur.pop();
        }
    }
    rec(1, ground, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_zero_and_duplicates() {
        assert!(IndexSet::new([0, 1]).is_err());
        assert!(IndexSet::new([2, 2]).is_err());
        assert_eq!(IndexSet::new([3, 1, 2]).unwrap(), set(&[1, 2, 3]));
    }

    #[test]
    fn order_preserving_examples() {
        let phi = order_preserving_map(&set(&[2, 5, 7]));
        assert_eq!(phi.pairs().collect::<Vec<_>>(), vec![(2, 1), (5, 2), (7, 3)]);
        assert_eq!(phi.inverse(2), Some(5));
        assert_eq!(phi.apply(3), None);

        let id = order_preserving_map(&set(&[1, 2]));
        assert_eq!(id.pairs().collect::<Vec<_>>(), vec![(1, 1), (2, 2)]);

        let empty = order_preserving_map(&IndexSet::empty());
        assert!(empty.is_empty());
        assert_eq!(empty.inverse(1), None);
    }

    #[test]
    fn consecutive_pair_examples() {
        assert_eq!(consecutive_pairs(&set(&[1, 2, 3, 4])), vec![(1, 2), (2, 3), (3, 4)]);
        assert_eq!(consecutive_pairs(&set(&[1, 4, 9])), vec![(1, 4), (4, 9)]);
        assert!(consecutive_pairs(&set(&[5])).is_empty());
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(
            lattice_min_max(&set(&[1, 4]), &set(&[2, 3])).unwrap(),
            (set(&[1, 3]), set(&[2, 4]))
        );
        let i = set(&[2, 5, 6]);
        assert_eq!(lattice_min_max(&i, &i).unwrap(), (i.clone(), i.clone()));
        assert_eq!(
            lattice_min_max(&set(&[1, 2]), &set(&[3, 4])).unwrap(),
            (set(&[1, 2]), set(&[3, 4]))
        );
        assert!(lattice_min_max(&set(&[1]), &set(&[1, 2])).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = set(&[1, 3, 5]);
        let b = set(&[3, 4]);
        assert_eq!(a.union(&b), set(&[1, 3, 4, 5]));
        assert_eq!(a.intersection(&b), set(&[3]));
        assert_eq!(a.difference(&b), set(&[1, 5]));
        assert_eq!(a.symmetric_difference(&b), set(&[1, 4, 5]));
        assert_eq!(a.complement(6), set(&[2, 4, 6]));
        assert_eq!(a.replace(3, 4), set(&[1, 4, 5]));
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(
            (1..=8).map(catalan).collect::<Vec<_>>(),
            vec![1, 2, 5, 14, 42, 132, 429, 1430]
        );
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![IndexSet::empty()]);
    }
}
