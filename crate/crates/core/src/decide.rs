//! Three independent decision procedures for `Σ c_α Δ_{I_α} Δ_{J_α} ≥ 0`
//! on the totally nonnegative Grassmannian.
//!
//! * [`decide`]: one coefficient sum per noncrossing matching of `D`; the
//!   inequality holds iff every sum is nonnegative.
//! * [`decide_principal`]: the same restricted to star-symmetric matchings,
//!   for expressions in principal Plücker coordinates. This is a necessary
//!   condition only; see its docs.
//! * [`decide_recursive`]: repeated Chevalley reduction down to scalars.
//!
//! A term is included in the sum of a matching `P` when every pair of `P`
//! has one endpoint in `I_α` and the other in `J_α`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::QuadExpression;
use crate::matching::{enumerate_matchings, Matching, MatchingMode, StarMap};
use crate::numeric::{falsify, Counterexample, FalsifyOptions};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Valid,
    Invalid,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Valid => "valid",
            Status::Invalid => "invalid",
        })
    }
}

/// One matching of `D` with the terms it selects and their coefficient sum.
/// `included` holds term positions in the expression that was decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateRow {
    pub matching: Matching,
    pub included: Vec<usize>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub eta: usize,
    /// All rows when valid or when a full certificate was requested;
    /// otherwise the rows up to and including the first violation.
    pub rows: Vec<CertificateRow>,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn from_rows(eta: usize, rows: Vec<CertificateRow>) -> Self {
        let status = if rows.iter().any(|r| r.sum.is_negative()) {
            Status::Invalid
        } else {
            Status::Valid
        };
        Self {
            status,
            eta,
            rows,
            counterexample: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.status == Status::Valid
    }

    /// The first row with a negative sum.
    pub fn violating_row(&self) -> Option<&CertificateRow> {
        self.rows.iter().find(|r| r.sum.is_negative())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecideOptions {
    /// Evaluate every matching instead of stopping at the first violation.
    pub full_certificate: bool,
    /// Search for a numeric counterexample when the verdict is invalid.
    pub falsify: Option<FalsifyOptions>,
}

/// The terms selected by `matching`, which must be a matching of `D`.
pub fn filter_terms(expr: &QuadExpression, matching: &Matching) -> Result<Vec<usize>> {
    if matching.ground() != expr.sym_diff() {
        return Err(Error::InvalidMatching(format!(
            "matching of {} used on an expression with symmetric difference {}",
            matching.ground(),
            expr.sym_diff()
        )));
    }
    Ok(included_terms(expr, matching))
}

fn included_terms(expr: &QuadExpression, matching: &Matching) -> Vec<usize> {
    expr.terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| matching.pairs().iter().all(|&(u, v)| t.splits(u, v)))
        .map(|(k, _)| k)
        .collect()
}

fn row_for(expr: &QuadExpression, matching: Matching) -> CertificateRow {
    let included = included_terms(expr, &matching);
    let sum = included.iter().map(|&k| &expr.terms()[k].coeff).sum();
    CertificateRow {
        matching,
        included,
        sum,
    }
}

fn matching_mode(expr: &QuadExpression, symmetric: bool) -> MatchingMode {
    if symmetric {
        MatchingMode::Symmetric(StarMap::new(expr.ctx().n()))
    } else {
        MatchingMode::Plain
    }
}

/// One row per matching of `D`, in canonical order. In symmetric mode
/// only matchings fixed by `u ↦ 2n+1-u` are used.
pub fn certificate_sums(expr: &QuadExpression, symmetric: bool) -> Result<Vec<CertificateRow>> {
    let matchings = enumerate_matchings(expr.sym_diff(), matching_mode(expr, symmetric))?;
    Ok(matchings.into_iter().map(|p| row_for(expr, p)).collect())
}

fn decide_rows(
    expr: &QuadExpression,
    symmetric: bool,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let matchings = enumerate_matchings(expr.sym_diff(), matching_mode(expr, symmetric))?;
    let mut rows = Vec::with_capacity(matchings.len());
    for p in matchings {
        let row = row_for(expr, p);
        let bad = row.sum.is_negative();
        rows.push(row);
        if bad && !opts.full_certificate {
            break;
        }
    }
    let mut verdict = Verdict::from_rows(expr.eta(), rows);
    if verdict.status == Status::Invalid {
        if let Some(f) = &opts.falsify {
            verdict.counterexample = falsify(expr, f)?;
        }
    }
    Ok(verdict)
}

/// Decides validity through the noncrossing-matching certificate.
pub fn decide(expr: &QuadExpression) -> Verdict {
    decide_with(expr, &DecideOptions::default()).expect("D of a validated expression has even size")
}

pub fn decide_with(expr: &QuadExpression, opts: &DecideOptions) -> Result<Verdict> {
    decide_rows(expr, false, opts)
}

/// Checks a principal expression over `Gr(n, 2n)` on the star-symmetric
/// matchings only.
///
/// An `Invalid` result is always correct. A `Valid` result is not
/// conclusive from `n = 3` on: for
/// `5 Δ123 Δ456 + 9 Δ145 Δ236 + 5 Δ124 Δ356 - 4 Δ135 Δ246` the symmetric
/// rows are `5, 1, 15` but the row of `{1,2},{3,6},{4,5}` is `-4`, and the
/// expression is negative on totally positive points. Use [`decide`] for a
/// verdict.
pub fn decide_principal(expr: &QuadExpression) -> Result<Verdict> {
    decide_principal_with(expr, &DecideOptions::default())
}

pub fn decide_principal_with(expr: &QuadExpression, opts: &DecideOptions) -> Result<Verdict> {
    if !expr.is_principal()? {
        return Err(Error::NotPrincipal);
    }
    decide_rows(expr, true, opts)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecursionOptions {
    /// On principal expressions, branch on mirrored pairs of positions.
    /// Off by default: like [`decide_principal`] it only reaches the
    /// star-symmetric matchings and can miss a violation from `η = 3` on.
    pub principal_fast_path: bool,
    /// Keep exploring after a negative leaf.
    pub full: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecursionStats {
    /// Scalar leaves actually reached.
    pub leaves: u128,
    /// Branches where no term separates the pair, so the operation is the
    /// identity; every matching below such a branch has sum zero.
    pub skipped_branches: u128,
    /// Leaves a plain recursion would have reached under skipped branches.
    pub skipped_leaves: u128,
    /// Branches taken through the principal fast path.
    pub principal_steps: u128,
}

impl RecursionStats {
    /// Leaves including those implied by skipped branches.
    pub fn total_leaves(&self) -> u128 {
        self.leaves + self.skipped_leaves
    }
}

/// `(2η - 1)!!`, the leaf count of a full plain recursion from `η`.
pub fn double_factorial_odd(eta: usize) -> u128 {
    (1..=eta as u128).map(|k| 2 * k - 1).product()
}

/// Decides validity by Chevalley reduction to scalars.
pub fn decide_recursive(expr: &QuadExpression) -> Verdict {
    decide_recursive_with(expr, RecursionOptions::default()).0
}

/// Each leaf of the recursion is a matching of `D` (in the labels of
/// `expr`) together with the terms that survive to it; the returned rows
/// are those leaves, deduplicated and in canonical order.
pub fn decide_recursive_with(
    expr: &QuadExpression,
    opts: RecursionOptions,
) -> (Verdict, RecursionStats) {
    let (e, phi) = expr.simplify_with_map();
    let labels: Vec<usize> = phi.domain().iter().collect();
    let mut walk = Walk {
        opts,
        ground: expr.sym_diff().clone(),
        stats: RecursionStats::default(),
        rows: BTreeMap::new(),
        stop: false,
    };
    walk.visit(&e, &labels, &mut Vec::new());
    let rows = walk.rows.into_values().collect();
    (Verdict::from_rows(expr.eta(), rows), walk.stats)
}

struct Walk {
    opts: RecursionOptions,
    ground: crate::IndexSet,
    stats: RecursionStats,
    rows: BTreeMap<Matching, CertificateRow>,
    stop: bool,
}

impl Walk {
    fn visit(&mut self, e: &QuadExpression, labels: &[usize], pairs: &mut Vec<(usize, usize)>) {
        if self.stop {
            return;
        }
        let eta = e.eta();
        if eta == 0 || e.is_empty() {
            self.leaf(e, pairs, eta);
            return;
        }
        let principal = self.opts.principal_fast_path && e.is_principal().unwrap_or(false);
        let branches: Vec<Vec<(usize, usize)>> = if principal {
            (1..=eta)
                .map(|u| {
                    let mut steps = vec![(u, u + 1)];
                    if u < eta {
                        steps.push((2 * eta - u, 2 * eta + 1 - u));
                    }
                    steps
                })
                .collect()
        } else {
            (1..2 * eta).map(|u| vec![(u, u + 1)]).collect()
        };
        for steps in branches {
            if self.stop {
                return;
            }
            let mut cur = e.clone();
            let mut acts = true;
            for &(u, v) in &steps {
                if !cur.terms().iter().any(|t| t.alpha_count(u, v) > 0) {
                    acts = false;
                    break;
                }
                cur = cur.chevalley_apply(u, v).expect("adjacent pair inside [2η]");
            }
            if !acts {
                self.stats.skipped_branches += 1;
                if !principal {
                    self.stats.skipped_leaves += double_factorial_odd(eta - 1);
                }
                continue;
            }
            if principal {
                self.stats.principal_steps += 1;
            }
            let removed: Vec<usize> = steps.iter().flat_map(|&(u, v)| [u, v]).collect();
            let next_labels: Vec<usize> = labels
                .iter()
                .enumerate()
                .filter(|(k, _)| !removed.contains(&(k + 1)))
                .map(|(_, &l)| l)
                .collect();
            let before = pairs.len();
            for &(u, v) in &steps {
                pairs.push((labels[u - 1], labels[v - 1]));
            }
            self.visit(&cur.simplify(), &next_labels, pairs);
            pairs.truncate(before);
        }
    }

    fn leaf(&mut self, e: &QuadExpression, pairs: &[(usize, usize)], eta: usize) {
        if eta > 0 {
            // An expression with no terms is zero on every matching below it.
            return;
        }
        self.stats.leaves += 1;
        let matching = Matching::new(pairs.iter().copied(), self.ground.clone())
            .expect("recursion removes consecutive pairs");
        let sum: Rational = e.terms().iter().map(|t| &t.coeff).sum();
        let mut included: Vec<usize> = e.origins().to_vec();
        included.sort_unstable();
        if sum.is_negative() && !self.opts.full {
            self.stop = true;
        }
        let row = CertificateRow {
            matching: matching.clone(),
            included,
            sum,
        };
        debug_assert!(self.rows.get(&matching).is_none_or(|r| r.sum == row.sum));
        self.rows.entry(matching).or_insert(row);
    }
}

/// Whether all rows have nonnegative sums and at least one is positive.
pub fn is_strict(rows: &[CertificateRow]) -> bool {
    rows.iter().all(|r| !r.sum.is_negative()) && rows.iter().any(|r| !r.sum.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{GrassmannContext, QuadTerm};
    use crate::{int, ratio, IndexSet};

    fn s(v: &[usize]) -> IndexSet {
        IndexSet::new(v.iter().copied()).unwrap()
    }

    fn expr(m: usize, n: usize, terms: &[(Rational, &[usize], &[usize])]) -> QuadExpression {
        let terms = terms
            .iter()
            .map(|(c, i, j)| QuadTerm::new(c.clone(), s(i), s(j)))
            .collect();
        QuadExpression::new(GrassmannContext::new(m, n).unwrap(), terms).unwrap()
    }

    fn pluecker(sign: i64) -> QuadExpression {
        expr(
            2,
            2,
            &[
                (int(sign), &[1, 3], &[2, 4]),
                (int(-sign), &[1, 2], &[3, 4]),
                (int(-sign), &[1, 4], &[2, 3]),
            ],
        )
    }

    fn bj3() -> QuadExpression {
        expr(
            3,
            3,
            &[
                (int(-1), &[1, 2, 3], &[4, 5, 6]),
                (ratio(1, 3), &[1, 4, 5], &[2, 3, 6]),
                (ratio(1, 3), &[2, 4, 6], &[1, 3, 5]),
                (ratio(1, 3), &[3, 5, 6], &[1, 2, 4]),
            ],
        )
    }

    fn sums(rows: &[CertificateRow]) -> Vec<Rational> {
        rows.iter().map(|r| r.sum.clone()).collect()
    }

    #[test]
    fn filter_examples() {
        let e = pluecker(1);
        let g = s(&[1, 2, 3, 4]);
        let p = Matching::new([(1, 2), (3, 4)], g.clone()).unwrap();
        assert_eq!(filter_terms(&e, &p).unwrap(), vec![0, 2]);
        let p = Matching::new([(1, 4), (2, 3)], g).unwrap();
        assert_eq!(filter_terms(&e, &p).unwrap(), vec![0, 1]);

        let scalar = expr(1, 2, &[(int(1), &[1], &[1])]);
        assert_eq!(filter_terms(&scalar, &Matching::empty()).unwrap(), vec![0]);
        assert!(filter_terms(&scalar, &p_of_four()).is_err());
    }

    fn p_of_four() -> Matching {
        Matching::new([(1, 2), (3, 4)], s(&[1, 2, 3, 4])).unwrap()
    }

    #[test]
    fn certificate_examples() {
        let rows = certificate_sums(&bj3(), false).unwrap();
        assert_eq!(
            sums(&rows),
            vec![ratio(2, 3), ratio(1, 3), ratio(1, 3), ratio(2, 3), int(0)]
        );
        let sym = certificate_sums(&bj3(), true).unwrap();
        assert_eq!(sums(&sym), vec![ratio(2, 3), ratio(2, 3), int(0)]);

        for sign in [1, -1] {
            assert_eq!(sums(&certificate_sums(&pluecker(sign), false).unwrap()), vec![int(0), int(0)]);
        }
        let scalar = expr(1, 2, &[(int(1), &[1], &[1])]);
        let rows = certificate_sums(&scalar, false).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].matching, Matching::empty());
        assert_eq!(rows[0].sum, int(1));
    }

    #[test]
    fn decide_examples() {
        assert!(decide(&pluecker(1)).is_valid());
        assert!(decide(&pluecker(-1)).is_valid());
        let lsm = expr(2, 2, &[(int(1), &[1, 3], &[2, 4]), (int(-1), &[1, 4], &[2, 3])]);
        let v = decide(&lsm);
        assert!(v.is_valid());
        assert_eq!(sums(&v.rows), vec![int(0), int(1)]);

        let bad = expr(2, 2, &[(int(1), &[1, 2], &[3, 4]), (int(-1), &[1, 3], &[2, 4])]);
        let v = decide(&bad);
        assert_eq!(v.status, Status::Invalid);
        let row = v.violating_row().unwrap();
        assert_eq!(row.matching.pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(row.sum, int(-1));
    }

    #[test]
    fn principal_examples() {
        let v = decide_principal(&bj3()).unwrap();
        assert!(v.is_valid());
        assert_eq!(v.rows.len(), 3);
        let zero = expr(2, 2, &[(int(1), &[1, 3], &[2, 4]), (int(-1), &[2, 4], &[1, 3])]);
        let v = decide_principal(&zero).unwrap();
        assert!(v.is_valid() && v.rows.iter().all(|r| r.sum.is_zero()));
        assert_eq!(decide_principal(&pluecker(1)), Err(Error::NotPrincipal));
    }

    #[test]
    fn recursive_examples() {
        for sign in [1, -1] {
            let (v, _) = decide_recursive_with(&pluecker(sign), RecursionOptions { full: true, ..Default::default() });
            assert!(v.is_valid());
            assert!(v.rows.iter().all(|r| r.sum.is_zero()));
        }
        assert!(decide_recursive(&bj3()).is_valid());
        let fast = RecursionOptions {
            principal_fast_path: true,
            full: true,
        };
        let (v, stats) = decide_recursive_with(&bj3(), fast);
        assert!(v.is_valid());
        assert!(stats.principal_steps >= 3);
        let symmetric: Vec<Matching> = certificate_sums(&bj3(), true)
            .unwrap()
            .into_iter()
            .map(|r| r.matching)
            .collect();
        assert_eq!(v.rows.iter().map(|r| r.matching.clone()).collect::<Vec<_>>(), symmetric);
        let bad = expr(2, 2, &[(int(1), &[1, 2], &[3, 4]), (int(-1), &[1, 3], &[2, 4])]);
        assert_eq!(decide_recursive(&bad).status, Status::Invalid);
    }

    #[test]
    fn recursive_rows_match_certificate() {
        let opts = RecursionOptions {
            principal_fast_path: false,
            full: true,
        };
        let (v, stats) = decide_recursive_with(&bj3(), opts);
        let cert = certificate_sums(&bj3(), false).unwrap();
        for row in &v.rows {
            assert!(cert.contains(row), "{row:?}");
        }
        assert_eq!(stats.total_leaves(), double_factorial_odd(3));
    }

    #[test]
    fn double_factorials() {
        assert_eq!(
            (0..=5).map(double_factorial_odd).collect::<Vec<_>>(),
            vec![1, 1, 3, 15, 105, 945]
        );
    }
}
