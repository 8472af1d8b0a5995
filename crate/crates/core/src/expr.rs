//! Homogeneous quadratic expressions `Σ c_α Δ_{I_α} Δ_{J_α}` and the
//! Chevalley rewriting operations on them.
//!
//! Homogeneity means the multiset `I_α ⊎ J_α` is the same for every term.
//! Its doubled elements form the common part `C`, its simple elements the
//! symmetric difference `D`, and `η = |D| / 2`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::index_set::{IndexSet, OrderPreservingMap};
use crate::Rational;

/// `Gr(m, m+n)` with `1 <= m <= n`, or the scalar context `(0, 0)` that
/// simplification produces when nothing is left of `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GrassmannContext {
    m: usize,
    n: usize,
}

impl GrassmannContext {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidContext { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn scalar() -> Self {
        Self { m: 0, n: 0 }
    }

    /// `Gr(η, 2η)`, or the scalar context when `η = 0`.
    pub fn balanced(eta: usize) -> Self {
        Self { m: eta, n: eta }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> usize {
        self.m + self.n
    }

    pub fn is_scalar(&self) -> bool {
        self.m == 0
    }
}

impl fmt::Display for GrassmannContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gr({},{})", self.m, self.ambient())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadTerm {
    pub coeff: Rational,
    pub left: IndexSet,
    pub right: IndexSet,
}

impl QuadTerm {
    pub fn new(coeff: Rational, left: IndexSet, right: IndexSet) -> Self {
        Self { coeff, left, right }
    }

    /// Number of sets among `left`, `right` that contain `u` but not `v`.
    pub fn alpha_count(&self, u: usize, v: usize) -> usize {
        [&self.left, &self.right]
            .iter()
            .filter(|x| x.contains(u) && !x.contains(v))
            .count()
    }

    /// True if `{u, v}` meets both index sets.
    pub fn splits(&self, u: usize, v: usize) -> bool {
        let meets = |x: &IndexSet| x.contains(u) || x.contains(v);
        meets(&self.left) && meets(&self.right)
    }

    fn unordered_key(&self) -> (IndexSet, IndexSet) {
        if self.left <= self.right {
            (self.left.clone(), self.right.clone())
        } else {
            (self.right.clone(), self.left.clone())
        }
    }
}

/// A validated homogeneous quadratic expression.
///
/// Each term remembers the index of the input term it descends from
/// (`origins`), so certificates can be reported against the input.
/// Equality compares the context and the terms only.
#[derive(Debug, Clone)]
pub struct QuadExpression {
    ctx: GrassmannContext,
    terms: Vec<QuadTerm>,
    origins: Vec<usize>,
    common: IndexSet,
    sym_diff: IndexSet,
}

impl PartialEq for QuadExpression {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}

impl Eq for QuadExpression {}

impl QuadExpression {
    /// Checks sizes, ranges and homogeneity; the error names the first
    /// offending term.
    pub fn new(ctx: GrassmannContext, terms: Vec<QuadTerm>) -> Result<Self> {
        let origins = (0..terms.len()).collect();
        Self::with_origins(ctx, terms, origins)
    }

    fn with_origins(ctx: GrassmannContext, terms: Vec<QuadTerm>, origins: Vec<usize>) -> Result<Self> {
        let ambient = ctx.ambient();
        for (k, t) in terms.iter().enumerate() {
            for set in [&t.left, &t.right] {
                if set.len() != ctx.m {
                    return Err(Error::TermSize {
                        term: k,
                        expected: ctx.m,
                        found: set.len(),
                    });
                }
                if let Some(index) = set.iter().find(|&x| x > ambient) {
                    return Err(Error::IndexOutOfRange {
                        term: k,
                        index,
                        ambient,
                    });
                }
            }
        }
        let (common, sym_diff) = match terms.first() {
            Some(t) => (t.left.intersection(&t.right), t.left.symmetric_difference(&t.right)),
            None => (IndexSet::empty(), IndexSet::empty()),
        };
        for (k, t) in terms.iter().enumerate().skip(1) {
            if t.left.intersection(&t.right) != common
                || t.left.symmetric_difference(&t.right) != sym_diff
            {
                return Err(Error::Inhomogeneous { term: k });
            }
        }
        Ok(Self {
            ctx,
            terms,
            origins,
            common,
            sym_diff,
        })
    }

    /// The empty expression over `ctx`.
    pub fn zero(ctx: GrassmannContext) -> Self {
        Self {
            ctx,
            terms: Vec::new(),
            origins: Vec::new(),
            common: IndexSet::empty(),
            sym_diff: IndexSet::empty(),
        }
    }

    pub fn ctx(&self) -> GrassmannContext {
        self.ctx
    }

    pub fn terms(&self) -> &[QuadTerm] {
        &self.terms
    }

    /// For each term, the index of the input term it descends from.
    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `C`: the elements lying in both index sets of every term.
    pub fn common(&self) -> &IndexSet {
        &self.common
    }

    /// `D`: the elements lying in exactly one index set of every term.
    pub fn sym_diff(&self) -> &IndexSet {
        &self.sym_diff
    }

    pub fn eta(&self) -> usize {
        self.sym_diff.len() / 2
    }

    pub fn coefficient_sum(&self) -> Rational {
        self.terms.iter().map(|t| &t.coeff).sum()
    }

    /// Forgets term provenance: origins become `0..len`.
    pub fn reset_origins(mut self) -> Self {
        self.origins = (0..self.terms.len()).collect();
        self
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = &t.coeff * k;
        }
        out
    }

    /// Merges terms with the same unordered pair `{I, J}` into the first
    /// occurrence and drops zero coefficients.
    pub fn normalize(&self) -> Self {
        let mut slot: HashMap<(IndexSet, IndexSet), usize> = HashMap::new();
        let mut terms: Vec<QuadTerm> = Vec::new();
        let mut origins = Vec::new();
        for (t, &o) in self.terms.iter().zip(&self.origins) {
            match slot.get(&t.unordered_key()) {
                Some(&k) => terms[k].coeff += &t.coeff,
                None => {
                    slot.insert(t.unordered_key(), terms.len());
                    terms.push(t.clone());
                    origins.push(o);
                }
            }
        }
        let (terms, origins): (Vec<_>, Vec<_>) = terms
            .into_iter()
            .zip(origins)
            .filter(|(t, _)| !t.coeff.is_zero())
            .unzip();
        self.rebuilt(self.ctx, terms, origins)
    }

    /// True if every coefficient is zero (vacuously for no terms).
    pub fn is_zero(&self) -> bool {
        self.normalize().is_empty()
    }

    fn rebuilt(&self, ctx: GrassmannContext, terms: Vec<QuadTerm>, origins: Vec<usize>) -> Self {
        if terms.is_empty() {
            let mut z = Self::zero(ctx);
            z.common = self.common.clone();
            z.sym_diff = self.sym_diff.clone();
            return z;
        }
        Self::with_origins(ctx, terms, origins).expect("rewriting preserves homogeneity")
    }

    fn check_adjacent(&self, u: usize, v: usize) -> Result<()> {
        if u.abs_diff(v) != 1 {
            return Err(Error::NotAdjacent { u, v });
        }
        let ambient = self.ctx.ambient();
        if u == 0 || v == 0 || u > ambient || v > ambient {
            return Err(Error::PairOutOfRange { u, v, ambient });
        }
        Ok(())
    }

    /// The Chevalley operation at an adjacent pair `(u, v)`.
    ///
    /// Keeps the terms where the number of index sets containing `u` but
    /// not `v` is maximal, and in those sets replaces `u` by `v`. When
    /// that maximum is zero the expression is returned unchanged.
    pub fn chevalley_apply(&self, u: usize, v: usize) -> Result<Self> {
        self.check_adjacent(u, v)?;
        let best = self.terms.iter().map(|t| t.alpha_count(u, v)).max().unwrap_or(0);
        if best == 0 {
            return Ok(self.clone());
        }
        let (terms, origins): (Vec<_>, Vec<_>) = self
            .terms
            .iter()
            .zip(&self.origins)
            .filter(|(t, _)| t.alpha_count(u, v) == best)
            .map(|(t, &o)| {
                let term = QuadTerm {
                    coeff: t.coeff.clone(),
                    left: shift_set(&t.left, u, v),
                    right: shift_set(&t.right, u, v),
                };
                (term, o)
            })
            .unzip();
        Ok(self.rebuilt(self.ctx, terms, origins))
    }

    /// Drops the common part and relabels `D` onto `[2η]`, giving an
    /// equivalent expression over `Gr(η, 2η)`.
    pub fn simplify(&self) -> Self {
        self.simplify_with_map().0
    }

    /// As [`simplify`](Self::simplify), also returning the relabeling of `D`.
    pub fn simplify_with_map(&self) -> (Self, OrderPreservingMap) {
        let phi = OrderPreservingMap::new(self.sym_diff.clone());
        let ctx = GrassmannContext::balanced(self.eta());
        let relabel = |s: &IndexSet| {
            phi.apply_set(&s.difference(&self.common))
                .expect("difference lies in D")
        };
        let terms: Vec<QuadTerm> = self
            .terms
            .iter()
            .map(|t| QuadTerm {
                coeff: t.coeff.clone(),
                left: relabel(&t.left),
                right: relabel(&t.right),
            })
            .collect();
        let out = if terms.is_empty() {
            let mut z = Self::zero(ctx);
            z.sym_diff = IndexSet::range(1, 2 * self.eta());
            z
        } else {
            Self::with_origins(ctx, terms, self.origins.clone()).expect("simplify preserves homogeneity")
        };
        (out, phi)
    }

    /// `𝔠̄_(u,v)`: the chain of adjacent operations walking from `u` to `v`.
    pub fn chevalley_chain(&self, u: usize, v: usize) -> Result<Self> {
        let mut e = self.clone();
        for (a, b) in chain_steps(u, v) {
            e = e.chevalley_apply(a, b)?;
        }
        Ok(e)
    }

    /// The composite operation at a pair `u, v` consecutive in `D`.
    ///
    /// Common indices `r_1 < … < r_k` strictly between `u` and `v` are
    /// first walked down to `u, u+1, …, u+k-1`, then `u+k` walks up to `v`.
    /// The operation is symmetric in `u` and `v`.
    pub fn composite_chevalley(&self, u: usize, v: usize) -> Result<Self> {
        let mut e = self.clone();
        for (a, b) in self.composite_steps(u, v)? {
            e = e.chevalley_apply(a, b)?;
        }
        Ok(e)
    }

    /// The adjacent steps of [`composite_chevalley`](Self::composite_chevalley),
    /// in application order.
    pub fn composite_steps(&self, u: usize, v: usize) -> Result<Vec<(usize, usize)>> {
        let (u, v) = (u.min(v), u.max(v));
        let d = self.sym_diff.as_slice();
        let consecutive = u != v && d.windows(2).any(|w| w[0] == u && w[1] == v);
        if !consecutive {
            return Err(Error::NotConsecutive { u, v });
        }
        let between: Vec<usize> = self.common.iter().filter(|&r| u < r && r < v).collect();
        let mut steps = Vec::new();
        for (j, &r) in between.iter().enumerate() {
            steps.extend(chain_steps(r, u + j));
        }
        steps.extend(chain_steps(u + between.len(), v));
        Ok(steps)
    }

    /// True if every index set contains exactly one of `k`, `2n+1-k` for
    /// each `k ∈ [n]`. Requires `m = n`.
    pub fn is_principal(&self) -> Result<bool> {
        let GrassmannContext { m, n } = self.ctx;
        if m != n {
            return Err(Error::PrincipalContext { m, n });
        }
        Ok(self
            .terms
            .iter()
            .all(|t| is_principal_set(&t.left, n) && is_principal_set(&t.right, n)))
    }
}

impl fmt::Display for QuadExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 over {}", self.ctx);
        }
        for (k, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff.is_negative() { "-" } else { "+" };
            if k > 0 || t.coeff.is_negative() {
                write!(f, "{sign} ")?;
            }
            write!(f, "{} Δ{} Δ{} ", t.coeff.abs(), t.left, t.right)?;
        }
        write!(f, "over {}", self.ctx)
    }
}

/// `(I \ {u}) ∪ {v}` when `u ∈ I` and `v ∉ I`, otherwise `I`.
pub fn shift_index_set(set: &IndexSet, u: usize, v: usize) -> Result<IndexSet> {
    if u.abs_diff(v) != 1 {
        return Err(Error::NotAdjacent { u, v });
    }
    Ok(shift_set(set, u, v))
}

fn shift_set(set: &IndexSet, u: usize, v: usize) -> IndexSet {
    if set.contains(u) && !set.contains(v) {
        set.replace(u, v)
    } else {
        set.clone()
    }
}

/// Adjacent steps `(u,u±1), (u±1,u±2), …` ending at `v`; empty if `u = v`.
pub fn chain_steps(u: usize, v: usize) -> Vec<(usize, usize)> {
    if u < v {
        (u..v).map(|a| (a, a + 1)).collect()
    } else {
        (v + 1..=u).rev().map(|a| (a, a - 1)).collect()
    }
}

/// Whether `set` contains exactly one of `k`, `2n+1-k` for each `k ∈ [n]`.
pub fn is_principal_set(set: &IndexSet, n: usize) -> bool {
    set.len() == n
        && set.max().is_none_or(|x| x <= 2 * n)
        && (1..=n).all(|k| set.contains(k) != set.contains(2 * n + 1 - k))
}

/// `{ P ∪ ([n+1, 2n] \ (2n+1-P)) : P ⊆ [n] }`, the index sets of
/// principal minors under the embedding.
pub fn principal_sets(n: usize) -> Vec<IndexSet> {
    (0..1usize << n)
        .map(|mask| {
            let p: Vec<usize> = (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            let upper = (n + 1..=2 * n).filter(|&x| !p.contains(&(2 * n + 1 - x)));
            IndexSet::from_sorted_unchecked(p.iter().copied().chain(upper).collect())
        })
        .collect()
}
