//! Constructors for well-known quadratic inequality families, each emitted
//! in "right side minus left side ≥ 0" form, and a lattice-closure check
//! for families of index sets.

use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{GrassmannContext, QuadExpression, QuadTerm};
use crate::index_set::{binomial, lattice_min_max, subsets, IndexSet};
use crate::{int, Rational};

/// `Δ_{min(I,J)} Δ_{max(I,J)} - Δ_I Δ_J`, with cancelling terms removed.
pub fn logsupmod_expression(i: &IndexSet, j: &IndexSet, ctx: GrassmannContext) -> Result<QuadExpression> {
    let (lo, hi) = lattice_min_max(i, j)?;
    QuadExpression::new(
        ctx,
        vec![
            QuadTerm::new(int(1), lo, hi),
            QuadTerm::new(int(-1), i.clone(), j.clone()),
        ],
    )
    .map(|e| e.normalize().reset_origins())
}

/// The Plücker index of the minor `det A_{P,Q}` of an `n × m` matrix `A`
/// stacked on `W0`: `P ∪ {m+n+1-j : j ∈ [m] \ Q}`.
pub fn minor_to_plucker(p: &IndexSet, q: &IndexSet, m: usize, n: usize) -> Result<IndexSet> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch(format!("|P| = {} but |Q| = {}", p.len(), q.len())));
    }
    if p.max().is_some_and(|x| x > n) {
        return Err(Error::OutOfRange(format!("row set {p} not inside [1, {n}]")));
    }
    if q.max().is_some_and(|x| x > m) {
        return Err(Error::OutOfRange(format!("column set {q} not inside [1, {m}]")));
    }
    let lower = (1..=m).rev().filter(|j| !q.contains(*j)).map(|j| m + n + 1 - j);
    Ok(IndexSet::from_sorted_unchecked(p.iter().chain(lower).collect()))
}

/// `det A_{min(P,R),min(Q,S)} det A_{max(P,R),max(Q,S)} - det A_{P,Q} det A_{R,S}`
/// for `n × n` matrices, written over `Gr(n, 2n)`.
pub fn lpp_expression(
    p: &IndexSet,
    q: &IndexSet,
    r: &IndexSet,
    s: &IndexSet,
    n: usize,
) -> Result<QuadExpression> {
    let k = p.len();
    if [q, r, s].iter().any(|x| x.len() != k) || k > n {
        return Err(Error::SizeMismatch(format!(
            "need |P| = |Q| = |R| = |S| <= {n}, got {}, {}, {}, {}",
            p.len(),
            q.len(),
            r.len(),
            s.len()
        )));
    }
    let (p_lo, p_hi) = lattice_min_max(p, r)?;
    let (q_lo, q_hi) = lattice_min_max(q, s)?;
    let to = |a: &IndexSet, b: &IndexSet| minor_to_plucker(a, b, n, n);
    let ctx = GrassmannContext::new(n, n)?;
    QuadExpression::new(
        ctx,
        vec![
            QuadTerm::new(int(1), to(&p_lo, &q_lo)?, to(&p_hi, &q_hi)?),
            QuadTerm::new(int(-1), to(p, q)?, to(r, s)?),
        ],
    )
    .map(|e| e.normalize().reset_origins())
}

/// Principal index sets `P ∪ ([n+1, 2n] \ (2n+1-P))` with `|P| = k`, in
/// lexicographic order of `P`.
pub fn principal_sets_of_size(n: usize, k: usize) -> Vec<IndexSet> {
    subsets(n, k)
        .into_iter()
        .map(|p| {
            let upper = (n + 1..=2 * n).filter(|&x| !p.contains(2 * n + 1 - x));
            IndexSet::from_sorted_unchecked(p.iter().chain(upper).collect())
        })
        .collect()
}

/// `C(n,k+1)^{-1} Σ_{|P|=k+1} Δ_I Δ_{I^c} - C(n,k)^{-1} Σ_{|P|=k} Δ_I Δ_{I^c}`
/// over `Gr(n, 2n)`, `I` the principal set of `P`. Each sum is written
/// literally, so complementary pairs may appear twice.
pub fn bj_expression(n: usize, k: usize) -> Result<QuadExpression> {
    if n < 2 || k + 1 > n / 2 {
        return Err(Error::OutOfRange(format!(
            "need n >= 2 and 0 <= k <= floor(n/2) - 1, got n = {n}, k = {k}"
        )));
    }
    let mut terms = Vec::new();
    for (size, sign) in [(k, -1), (k + 1, 1)] {
        let weight = Rational::new(sign.into(), (binomial(n, size) as i64).into());
        for set in principal_sets_of_size(n, size) {
            let comp = set.complement(2 * n);
            terms.push(QuadTerm::new(weight.clone(), set, comp));
        }
    }
    QuadExpression::new(GrassmannContext::new(n, n)?, terms)
}

/// The three-term relation `Δ_{Sac} Δ_{Sbd} - Δ_{Sab} Δ_{Scd} - Δ_{Sad} Δ_{Sbc}`
/// for `a < b < c < d` outside `S`, `|S| = m - 2`. It vanishes identically.
pub fn pluecker_relation(
    ctx: GrassmannContext,
    common: &IndexSet,
    [a, b, c, d]: [usize; 4],
) -> Result<QuadExpression> {
    if !(a < b && b < c && c < d) || [a, b, c, d].iter().any(|&x| common.contains(x)) {
        return Err(Error::OutOfRange(format!(
            "need a < b < c < d outside the common set, got {a}, {b}, {c}, {d}"
        )));
    }
    if common.len() + 2 != ctx.m() {
        return Err(Error::SizeMismatch(format!(
            "common set has {} elements, expected m - 2 = {}",
            common.len(),
            ctx.m().saturating_sub(2)
        )));
    }
    let with = |x: usize, y: usize| common.union(&IndexSet::from_sorted_unchecked(vec![x, y]));
    QuadExpression::new(
        ctx,
        vec![
            QuadTerm::new(int(1), with(a, c), with(b, d)),
            QuadTerm::new(int(-1), with(a, b), with(c, d)),
            QuadTerm::new(int(-1), with(a, d), with(b, c)),
        ],
    )
}

/// A random expression over `Gr(η, 2η)` with terms `(c, K, [2η] \ K)`:
/// each `η`-subset `K` is kept with probability 1/2 and gets a coefficient
/// uniform in `[-bound, bound]`. Zero coefficients are kept.
pub fn random_complementary_expression(eta: usize, bound: i64, rng: &mut impl Rng) -> QuadExpression {
    random_from_sets(eta, subsets(2 * eta, eta), bound, rng)
}

/// As [`random_complementary_expression`] with `K` ranging over the
/// principal sets only, so the result is principal.
pub fn random_principal_expression(n: usize, bound: i64, rng: &mut impl Rng) -> QuadExpression {
    random_from_sets(n, crate::expr::principal_sets(n), bound, rng)
}

fn random_from_sets(eta: usize, sets: Vec<IndexSet>, bound: i64, rng: &mut impl Rng) -> QuadExpression {
    let mut terms = Vec::new();
    for k in sets {
        if rng.gen_bool(0.5) {
            let comp = k.complement(2 * eta);
            terms.push(QuadTerm::new(int(rng.gen_range(-bound..=bound)), k, comp));
        }
    }
    let ctx = GrassmannContext::new(eta, eta).expect("eta >= 1");
    let e = QuadExpression::new(ctx, terms).expect("complementary terms are homogeneous");
    if e.is_empty() {
        QuadExpression::zero(ctx)
    } else {
        e
    }
}

/// A named family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    LogSupMod {
        ctx: GrassmannContext,
        i: IndexSet,
        j: IndexSet,
    },
    Lpp {
        n: usize,
        p: IndexSet,
        q: IndexSet,
        r: IndexSet,
        s: IndexSet,
    },
    Bj {
        n: usize,
        k: usize,
    },
    PlueckerRelation {
        ctx: GrassmannContext,
        common: IndexSet,
        points: [usize; 4],
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<QuadExpression> {
        match self {
            FamilySpec::LogSupMod { ctx, i, j } => logsupmod_expression(i, j, *ctx),
            FamilySpec::Lpp { n, p, q, r, s } => lpp_expression(p, q, r, s, *n),
            FamilySpec::Bj { n, k } => bj_expression(*n, *k),
            FamilySpec::PlueckerRelation { ctx, common, points } => {
                pluecker_relation(*ctx, common, *points)
            }
        }
    }
}

/// Outcome of [`check_lattice_closure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeClosure {
    Closed,
    /// `min(left, right)` or `max(left, right)` is missing from the family.
    Violated {
        left: IndexSet,
        right: IndexSet,
        min: IndexSet,
        max: IndexSet,
    },
}

impl LatticeClosure {
    pub fn is_closed(&self) -> bool {
        matches!(self, LatticeClosure::Closed)
    }
}

/// Whether a family of equal-size sets is closed under entrywise min/max.
pub fn check_lattice_closure(sets: &[IndexSet]) -> Result<LatticeClosure> {
    let members: std::collections::HashSet<&IndexSet> = sets.iter().collect();
    for (x, left) in sets.iter().enumerate() {
        for right in &sets[x + 1..] {
            let (min, max) = lattice_min_max(left, right)?;
            if !members.contains(&min) || !members.contains(&max) {
                return Ok(LatticeClosure::Violated {
                    left: left.clone(),
                    right: right.clone(),
                    min,
                    max,
                });
            }
        }
    }
    Ok(LatticeClosure::Closed)
}
