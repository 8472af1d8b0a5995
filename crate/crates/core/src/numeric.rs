//! Exact points of the totally nonnegative Grassmannian and evaluation of
//! quadratic expressions on them.
//!
//! A point is an `(m+n) × m` rational matrix whose maximal minors (the
//! Plücker coordinates) are all nonnegative. Two generators are provided:
//!
//! * embedded: a totally positive `n × m` matrix `A` stacked on `W0`;
//! * structured: `T · [Pᵀ(D;0); L·W0]` with `T` a word in positive
//!   elementary bidiagonal factors, `Pᵀ(D;0)` an increasing row selection
//!   scaled by a positive diagonal `D`, and `L` a positive diagonal.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{GrassmannContext, QuadExpression};
use crate::index_set::{subsets, IndexSet};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut out = Self::zeros(size, size);
        for i in 0..size {
            out.set(i, i, Rational::one());
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::SizeMismatch("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ← (I + w·E_{u,v}) · self`, i.e. row `u` += `w` · row `v`
    /// (zero-based rows).
    pub fn add_row_multiple(&mut self, u: usize, v: usize, w: &Rational) {
        for j in 0..self.cols {
            let add = self.get(v, j) * w;
            self.data[u * self.cols + j] += add;
        }
    }

    /// `self ← self · (I + w·E_{u,v})`, i.e. column `v` += `w` · column `u`.
    pub fn add_col_multiple(&mut self, u: usize, v: usize, w: &Rational) {
        for i in 0..self.rows {
            let add = self.get(i, u) * w;
            self.data[i * self.cols + v] += add;
        }
    }

    /// Rows `top` stacked above rows `bottom`.
    pub fn vstack(&self, bottom: &Self) -> Result<Self> {
        if self.cols != bottom.cols {
            return Err(Error::SizeMismatch("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&bottom.data);
        Ok(Self {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            data,
        })
    }

    /// The submatrix on zero-based `rows` × `cols`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// The first `cols` columns.
    pub fn leading_columns(&self, cols: usize) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        let keep: Vec<usize> = (0..cols).collect();
        self.submatrix(&all, &keep)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::SizeMismatch(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(determinant_of_rows(
            (0..self.rows).map(|i| self.row(i)).collect::<Vec<_>>(),
        ))
    }

    /// `det` of the submatrix on 1-based row and column sets.
    pub fn minor(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Rational> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch("minor with |rows| != |cols|".into()));
        }
        if rows.max().is_some_and(|r| r > self.rows) || cols.max().is_some_and(|c| c > self.cols) {
            return Err(Error::OutOfRange(format!("minor {rows} x {cols} of a {}x{} matrix", self.rows, self.cols)));
        }
        let r: Vec<usize> = rows.iter().map(|x| x - 1).collect();
        let c: Vec<usize> = cols.iter().map(|x| x - 1).collect();
        self.submatrix(&r, &c).determinant()
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = self.to_rows();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for r in rank + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &pivot;
                for c in col..self.cols {
                    let sub = &m[rank][c] * &f;
                    m[r][c] -= sub;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Determinant of a square matrix given by row slices. Each row is first
/// cleared of denominators, then Bareiss elimination runs over integers.
fn determinant_of_rows(rows: Vec<&[Rational]>) -> Rational {
    let mut scale = BigInt::one();
    let m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            scale *= l;
            ints
        })
        .collect();
    Rational::new(bareiss(m), scale)
}

/// `m × m` with `(W0)_{ij} = (-1)^{i+1}` when `j = m - i + 1`.
pub fn w0(m: usize) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(m, m);
    for i in 1..=m {
        let v = if i % 2 == 1 { 1 } else { -1 };
        out.set(i - 1, m - i, Rational::from_integer(v.into()));
    }
    out
}

/// `A` (n × m) stacked on `W0` (m × m). Minors of `A` become Plücker
/// coordinates: `det A_{P,Q} = Δ_I` with `I = P ∪ {m+n+1-j : j ∈ [m] \ Q}`.
pub fn embed_matrix(a: &RationalMatrix) -> RationalMatrix {
    a.vstack(&w0(a.cols())).expect("W0 has as many columns as A")
}

/// `Δ_I` of an `(m+n) × m` matrix.
pub fn plucker_coordinate(mtx: &RationalMatrix, set: &IndexSet) -> Result<Rational> {
    if set.len() != mtx.cols() {
        return Err(Error::SizeMismatch(format!(
            "Plücker index {set} has {} elements, matrix has {} columns",
            set.len(),
            mtx.cols()
        )));
    }
    if let Some(x) = set.iter().find(|&x| x > mtx.rows()) {
        return Err(Error::OutOfRange(format!("row {x} of a {}-row matrix", mtx.rows())));
    }
    Ok(determinant_of_rows(set.iter().map(|i| mtx.row(i - 1)).collect()))
}

/// Parameters of the Loewner–Whitney factorization of a `size × size`
/// matrix. `lower[t]` and `upper[t]` are consumed in factor order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BidiagonalWeights {
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub diag: Vec<Rational>,
}

impl BidiagonalWeights {
    /// All weights equal to one.
    pub fn unit(size: usize) -> Self {
        let pairs = size * size.saturating_sub(1) / 2;
        Self {
            lower: vec![Rational::one(); pairs],
            upper: vec![Rational::one(); pairs],
            diag: vec![Rational::one(); size],
        }
    }

    /// Weights drawn from `{p/q : 1 <= p, q <= bound}`.
    pub fn random(size: usize, rng: &mut impl Rng, bound: u64) -> Self {
        let pairs = size * size.saturating_sub(1) / 2;
        let mut draw = |k: usize| (0..k).map(|_| grid_weight(rng, bound)).collect();
        Self {
            lower: draw(pairs),
            upper: draw(pairs),
            diag: draw(size),
        }
    }
}

/// `∏_{j=1}^{s-1} ∏_{k=s-1}^{j} (I + w E_{k+1,k}) · ∏_{j=s-1}^{1} ∏_{k=j}^{s-1} (I + w' E_{k,k+1}) · D`.
///
/// With all weights positive the result is totally positive.
pub fn generate_tp_matrix(size: usize, weights: &BidiagonalWeights) -> Result<RationalMatrix> {
    factor_product(size, weights, false)
}

/// As [`generate_tp_matrix`] but allowing zero bidiagonal weights, which
/// gives nonsingular totally nonnegative matrices. `diag` must stay positive.
pub fn generate_tnn_matrix(size: usize, weights: &BidiagonalWeights) -> Result<RationalMatrix> {
    factor_product(size, weights, true)
}

fn factor_product(size: usize, w: &BidiagonalWeights, allow_zero: bool) -> Result<RationalMatrix> {
    let pairs = size * size.saturating_sub(1) / 2;
    if w.lower.len() != pairs || w.upper.len() != pairs || w.diag.len() != size {
        return Err(Error::SizeMismatch(format!(
            "size {size} needs {pairs}+{pairs}+{size} weights, got {}+{}+{}",
            w.lower.len(),
            w.upper.len(),
            w.diag.len()
        )));
    }
    let bad = |x: &Rational, zero_ok: bool| x.is_negative() || (!zero_ok && x.is_zero());
    if let Some(x) = w.lower.iter().chain(&w.upper).find(|x| bad(x, allow_zero)) {
        return Err(Error::NonPositiveParameter(format!("bidiagonal weight {x}")));
    }
    if let Some(x) = w.diag.iter().find(|x| bad(x, false)) {
        return Err(Error::NonPositiveParameter(format!("diagonal entry {x}")));
    }
    // Build right to left: start from D and left-multiply by each factor.
    let mut out = RationalMatrix::zeros(size, size);
    for (i, d) in w.diag.iter().enumerate() {
        out.set(i, i, d.clone());
    }
    let mut upper = Vec::with_capacity(pairs);
    for j in (1..size).rev() {
        for k in j..size {
            upper.push((k, k + 1));
        }
    }
    let mut lower = Vec::with_capacity(pairs);
    for j in 1..size {
        for k in (j..size).rev() {
            lower.push((k + 1, k));
        }
    }
    let factors = lower.iter().zip(&w.lower).chain(upper.iter().zip(&w.upper));
    for (&(u, v), x) in factors.collect::<Vec<_>>().into_iter().rev() {
        out.add_row_multiple(u - 1, v - 1, x);
    }
    Ok(out)
}

/// A random positive rational `p/q` with `1 <= p, q <= bound`.
fn grid_weight(rng: &mut impl Rng, bound: u64) -> Rational {
    let bound = bound.max(1);
    let p = rng.gen_range(1..=bound);
    let q = rng.gen_range(1..=bound);
    Rational::new(p.into(), q.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleMode {
    Embedded,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointParams {
    /// `embed` of the first `m` columns of an `n × n` totally positive matrix.
    Embedded { weights: BidiagonalWeights },
    /// `T · [Pᵀ(D;0); L·W0]`; `word` lists the factors `I + w E_{u,v}` of
    /// `T` left to right, `rows` the selected rows of the top block.
    Structured {
        word: Vec<(usize, usize, Rational)>,
        rows: IndexSet,
        d: Vec<Rational>,
        l: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestPoint {
    pub ctx: GrassmannContext,
    pub seed: u64,
    pub params: PointParams,
    pub matrix: RationalMatrix,
}

impl TestPoint {
    pub fn plucker(&self, set: &IndexSet) -> Result<Rational> {
        plucker_coordinate(&self.matrix, set)
    }
}

/// A seeded random point of `Gr≥0(m, m+n)` with weights on the grid
/// `{p/q : 1 <= p, q <= bound}`.
pub fn generate_test_point(ctx: GrassmannContext, mode: SampleMode, seed: u64, bound: u64) -> TestPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (ctx.m(), ctx.n());
    let (params, matrix) = match mode {
        SampleMode::Embedded => {
            let weights = BidiagonalWeights::random(n, &mut rng, bound);
            let tp = generate_tp_matrix(n, &weights).expect("grid weights are positive");
            (PointParams::Embedded { weights }, embed_matrix(&tp.leading_columns(m)))
        }
        SampleMode::Structured => {
            let ambient = m + n;
            let rows = random_subset(n, m, &mut rng);
            let d: Vec<Rational> = (0..m).map(|_| grid_weight(&mut rng, bound)).collect();
            let l: Vec<Rational> = (0..m).map(|_| grid_weight(&mut rng, bound)).collect();
            let len = rng.gen_range(0..=2 * ambient);
            let word: Vec<(usize, usize, Rational)> = (0..len)
                .map(|_| {
                    let u = rng.gen_range(1..ambient);
                    let w = grid_weight(&mut rng, bound);
                    if rng.gen_bool(0.5) {
                        (u, u + 1, w)
                    } else {
                        (u + 1, u, w)
                    }
                })
                .collect();
            let matrix = structured_matrix(m, n, &word, &rows, &d, &l);
            (PointParams::Structured { word, rows, d, l }, matrix)
        }
    };
    TestPoint {
        ctx,
        seed,
        params,
        matrix,
    }
}

/// `T · [Pᵀ(D;0); L·W0]` for the given factor word.
pub fn structured_matrix(
    m: usize,
    n: usize,
    word: &[(usize, usize, Rational)],
    rows: &IndexSet,
    d: &[Rational],
    l: &[Rational],
) -> RationalMatrix {
    let mut base = RationalMatrix::zeros(m + n, m);
    for (k, r) in rows.iter().enumerate() {
        base.set(r - 1, k, d[k].clone());
    }
    let w = w0(m);
    for i in 0..m {
        for j in 0..m {
            base.set(n + i, j, &l[i] * w.get(i, j));
        }
    }
    for (u, v, x) in word.iter().rev() {
        base.add_row_multiple(u - 1, v - 1, x);
    }
    base
}

fn random_subset(n: usize, k: usize, rng: &mut impl Rng) -> IndexSet {
    let picked = rand::seq::index::sample(rng, n, k);
    IndexSet::new(picked.into_iter().map(|x| x + 1)).expect("distinct positive samples")
}

/// Evaluates an expression, computing each distinct Plücker coordinate once.
pub fn evaluate_expression(expr: &QuadExpression, pt: &TestPoint) -> Result<Rational> {
    let (ec, pc) = (expr.ctx(), pt.ctx);
    if ec != pc {
        return Err(Error::ContextMismatch(ec.m(), ec.ambient(), pc.m(), pc.ambient()));
    }
    let mut memo: HashMap<&IndexSet, Rational> = HashMap::new();
    let mut total = Rational::zero();
    for t in expr.terms() {
        let mut value = t.coeff.clone();
        for set in [&t.left, &t.right] {
            if !memo.contains_key(set) {
                memo.insert(set, pt.plucker(set)?);
            }
            value *= &memo[set];
        }
        total += value;
    }
    Ok(total)
}

/// The index sets with nonzero Plücker coordinate, in lexicographic order.
pub fn positroid(pt: &TestPoint) -> Vec<IndexSet> {
    subsets(pt.ctx.ambient(), pt.ctx.m())
        .into_iter()
        .filter(|s| !pt.plucker(s).expect("m-subset of [m+n]").is_zero())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FalsifyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for FalsifyOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Counterexample {
    pub point: TestPoint,
    pub value: Rational,
    pub trial: usize,
}

/// Seed of trial `t` derived from the run seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Weight bound of trial `t`: `1 + ⌊√t⌋`, so trial 0 uses unit weights.
pub fn trial_bound(trial: usize) -> u64 {
    1 + (trial as u64).isqrt()
}

/// Searches embedded points for a strictly negative value. The result is
/// the negative trial with the smallest index, independent of scheduling.
pub fn falsify(expr: &QuadExpression, opts: &FalsifyOptions) -> Result<Option<Counterexample>> {
    let ctx = expr.ctx();
    if ctx.is_scalar() {
        return Ok(None);
    }
    let expr = expr.normalize();
    Ok((0..opts.samples).into_par_iter().find_map_first(|t| {
        let point = generate_test_point(ctx, SampleMode::Embedded, trial_seed(opts.seed, t), trial_bound(t));
        let value = evaluate_expression(&expr, &point).expect("same context");
        value.is_negative().then_some(Counterexample {
            point,
            value,
            trial: t,
        })
    }))
}

/// The index sets whose coordinates a batch of compiled expressions reads,
/// each with a slot number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerSupport {
    ctx: GrassmannContext,
    sets: Vec<IndexSet>,
    slots: HashMap<IndexSet, usize>,
}

impl PluckerSupport {
    /// Every `m`-subset of `[m+n]`, slot = lexicographic rank.
    pub fn full(ctx: GrassmannContext) -> Self {
        Self::from_sets(ctx, subsets(ctx.ambient(), ctx.m()))
    }

    /// The sets used by `exprs`, in lexicographic order.
    pub fn of<'a>(ctx: GrassmannContext, exprs: impl IntoIterator<Item = &'a QuadExpression>) -> Self {
        let mut sets: Vec<IndexSet> = exprs
            .into_iter()
            .flat_map(|e| e.terms().iter().flat_map(|t| [t.left.clone(), t.right.clone()]))
            .collect();
        sets.sort();
        sets.dedup();
        Self::from_sets(ctx, sets)
    }

    fn from_sets(ctx: GrassmannContext, sets: Vec<IndexSet>) -> Self {
        let slots = sets.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
        Self { ctx, sets, slots }
    }

    pub fn ctx(&self) -> GrassmannContext {
        self.ctx
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    pub fn slot(&self, set: &IndexSet) -> Option<usize> {
        self.slots.get(set).copied()
    }
}

/// Plücker coordinates of a point on a support, as integers.
///
/// Row `i` of the point is multiplied by the positive lcm `d_i` of its
/// denominators, so `Δ_I` is stored as `Δ_I · ∏_{i∈I} d_i`. Signs of single
/// coordinates and of homogeneous quadratic expressions (where `I ⊎ J` is
/// the same multiset in every term) are unchanged.
#[derive(Debug, Clone)]
pub struct IntegerPlucker {
    values: Vec<BigInt>,
    small: Option<Vec<i128>>,
}

impl IntegerPlucker {
    /// All coordinates, in lexicographic order of the index sets.
    pub fn new(pt: &TestPoint) -> Self {
        Self::on(&PluckerSupport::full(pt.ctx), pt)
    }

    pub fn on(support: &PluckerSupport, pt: &TestPoint) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..pt.matrix.rows())
            .map(|i| {
                let row = pt.matrix.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let small_rows: Option<Vec<Vec<i128>>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128()).collect())
            .collect();
        let values: Vec<BigInt> = support
            .sets
            .iter()
            .map(|set| {
                let fast = small_rows.as_ref().and_then(|sr| {
                    bareiss_i128(set.iter().map(|i| sr[i - 1].clone()).collect())
                });
                match fast {
                    Some(v) => BigInt::from(v),
                    None => bareiss(set.iter().map(|i| rows[i - 1].clone()).collect()),
                }
            })
            .collect();
        let small = values.iter().map(|x| x.to_i128()).collect();
        Self { values, small }
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// An expression with integer coefficients (scaled by a positive factor)
/// and terms addressed by support slot, for repeated sign evaluation.
#[derive(Debug, Clone)]
pub struct CompiledExpression {
    terms: Vec<(BigInt, usize, usize)>,
    small: Option<Vec<(i128, usize, usize)>>,
}

impl CompiledExpression {
    /// Compiled against the full support of the expression's context.
    pub fn new(expr: &QuadExpression) -> Self {
        let ambient = expr.ctx().ambient();
        Self::build(expr, |s| Some(subset_rank(s, ambient))).expect("every set has a rank")
    }

    /// `None` if the expression reads a set outside `support` or lives in
    /// another context.
    pub fn on(support: &PluckerSupport, expr: &QuadExpression) -> Option<Self> {
        if expr.ctx() != support.ctx {
            return None;
        }
        Self::build(expr, |s| support.slot(s))
    }

    fn build(expr: &QuadExpression, slot: impl Fn(&IndexSet) -> Option<usize>) -> Option<Self> {
        let l = expr
            .terms()
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.coeff.denom()));
        let terms = expr
            .terms()
            .iter()
            .map(|t| {
                Some((
                    t.coeff.numer() * (&l / t.coeff.denom()),
                    slot(&t.left)?,
                    slot(&t.right)?,
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        let small = terms
            .iter()
            .map(|(c, i, j)| c.to_i128().map(|c| (c, *i, *j)))
            .collect();
        Some(Self { terms, small })
    }

    /// Sign of the expression at the point: -1, 0 or 1. The point must be
    /// built on the support this expression was compiled against.
    pub fn sign(&self, pt: &IntegerPlucker) -> i8 {
        if let (Some(terms), Some(vals)) = (&self.small, &pt.small) {
            let mut acc: i128 = 0;
            let fast = terms.iter().try_for_each(|&(c, i, j)| {
                let p = vals[i].checked_mul(vals[j])?.checked_mul(c)?;
                acc = acc.checked_add(p)?;
                Some(())
            });
            if fast.is_some() {
                return acc.signum() as i8;
            }
        }
        let total: BigInt = self
            .terms
            .iter()
            .map(|(c, i, j)| c * &pt.values[*i] * &pt.values[*j])
            .sum();
        if total.is_positive() {
            1
        } else if total.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Position of `set` among the `|set|`-subsets of `[ambient]` in
/// lexicographic order.
pub fn subset_rank(set: &IndexSet, ambient: usize) -> usize {
    let k = set.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (pos, x) in set.iter().enumerate() {
        for skipped in prev + 1..x {
            rank += crate::index_set::binomial(ambient - skipped, k - pos - 1) as usize;
        }
        prev = x;
    }
    rank
}

/// Fraction-free determinant of a square integer matrix.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                let v = (&m[r][j] * &m[c][c] - &m[r][c] * &m[c][j]) / &prev;
                m[r][j] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    let d = m.swap_remove(k - 1).swap_remove(k - 1);
    if negate {
        -d
    } else {
        d
    }
}

/// As [`bareiss`] in `i128`; `None` on overflow.
fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let k = m.len();
    if k == 0 {
        return Some(1);
    }
    let mut negate = false;
    let mut prev = 1i128;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| m[r][c] != 0) else {
            return Some(0);
        };
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                let a = m[r][j].checked_mul(m[c][c])?;
                let b = m[r][c].checked_mul(m[c][j])?;
                m[r][j] = a.checked_sub(b)? / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    let d = m[k - 1][k - 1];
    Some(if negate { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::QuadTerm;
    use crate::{int, ratio};

    fn s(v: &[usize]) -> IndexSet {
        IndexSet::new(v.iter().copied()).unwrap()
    }

    fn cofactor_det(m: &RationalMatrix) -> Rational {
        let k = m.rows();
        if k == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..k {
            let rows: Vec<usize> = (1..k).collect();
            let cols: Vec<usize> = (0..k).filter(|&c| c != j).collect();
            let minor = cofactor_det(&m.submatrix(&rows, &cols));
            let term = m.get(0, j) * minor;
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for size in 0..=5 {
            for _ in 0..20 {
                let rows = (0..size)
                    .map(|_| {
                        (0..size)
                            .map(|_| Rational::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into()))
                            .collect()
                    })
                    .collect();
                let m = RationalMatrix::from_rows(rows).unwrap();
                let m = if size == 0 { RationalMatrix::zeros(0, 0) } else { m };
                assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
            }
        }
    }

    #[test]
    fn embedding_minors_for_two_by_two() {
        let (a, b, c, d) = (ratio(3, 2), int(5), ratio(-1, 3), int(7));
        let mtx = embed_matrix(
            &RationalMatrix::from_rows(vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]).unwrap(),
        );
        let p = |v: &[usize]| plucker_coordinate(&mtx, &s(v)).unwrap();
        assert_eq!(p(&[1, 3]), a);
        assert_eq!(p(&[2, 4]), d);
        assert_eq!(p(&[1, 4]), b);
        assert_eq!(p(&[2, 3]), c);
        assert_eq!(p(&[1, 2]), &a * &d - &b * &c);
        assert_eq!(p(&[3, 4]), int(1));
        assert_eq!(w0(2), RationalMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap());
    }

    #[test]
    fn plucker_edge_cases() {
        let zero = embed_matrix(&RationalMatrix::zeros(2, 2));
        assert_eq!(plucker_coordinate(&zero, &s(&[3, 4])).unwrap(), int(1));
        assert_eq!(plucker_coordinate(&zero, &s(&[1, 4])).unwrap(), int(0));
        let col = RationalMatrix::from_i64(&[&[4], &[9]]).unwrap();
        assert_eq!(plucker_coordinate(&col, &s(&[2])).unwrap(), int(9));
        let rep = RationalMatrix::from_i64(&[&[1, 2], &[1, 2], &[0, 1]]).unwrap();
        assert_eq!(plucker_coordinate(&rep, &s(&[1, 2])).unwrap(), int(0));
        assert!(plucker_coordinate(&rep, &s(&[1])).is_err());
    }

    #[test]
    fn tp_generator_examples() {
        let a = generate_tp_matrix(2, &BidiagonalWeights::unit(2)).unwrap();
        assert_eq!(a, RationalMatrix::from_i64(&[&[1, 1], &[1, 2]]).unwrap());
        let mut w = BidiagonalWeights::unit(3);
        w.lower[0] = int(0);
        assert!(generate_tp_matrix(3, &w).is_err());
        assert!(generate_tnn_matrix(3, &w).is_ok());
        w.diag[1] = int(0);
        assert!(generate_tnn_matrix(3, &w).is_err());
    }

    #[test]
    fn unit_weight_embedded_point() {
        let ctx = GrassmannContext::new(2, 2).unwrap();
        let pt = generate_test_point(ctx, SampleMode::Embedded, 123, 1);
        let a = RationalMatrix::from_i64(&[&[1, 1], &[1, 2]]).unwrap();
        assert_eq!(pt.matrix, embed_matrix(&a));
        assert_eq!(trial_bound(0), 1);
    }

    #[test]
    fn evaluation_examples() {
        let ctx = GrassmannContext::new(2, 2).unwrap();
        let t = |c: i64, i: &[usize], j: &[usize]| QuadTerm::new(int(c), s(i), s(j));
        let pt = generate_test_point(ctx, SampleMode::Embedded, 0, 1);
        let lsm = QuadExpression::new(ctx, vec![t(1, &[1, 3], &[2, 4]), t(-1, &[1, 4], &[2, 3])]).unwrap();
        assert_eq!(evaluate_expression(&lsm, &pt).unwrap(), int(1));
        let bad = QuadExpression::new(ctx, vec![t(1, &[1, 2], &[3, 4]), t(-1, &[1, 3], &[2, 4])]).unwrap();
        assert_eq!(evaluate_expression(&bad, &pt).unwrap(), int(-1));
        let other = generate_test_point(GrassmannContext::new(2, 3).unwrap(), SampleMode::Embedded, 0, 1);
        assert!(evaluate_expression(&bad, &other).is_err());

        let found = falsify(&bad, &FalsifyOptions { samples: 100, seed: 5 }).unwrap().unwrap();
        assert_eq!(found.trial, 0);
        assert_eq!(found.value, int(-1));
        assert!(falsify(&lsm, &FalsifyOptions { samples: 200, seed: 5 }).unwrap().is_none());
    }

    #[test]
    fn structured_basepoint() {
        let rows = s(&[1, 2]);
        let one = vec![int(1), int(1)];
        let base = structured_matrix(2, 2, &[], &rows, &one, &one);
        let expected = RationalMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 1], &[-1, 0]]).unwrap();
        assert_eq!(base, expected);
        let nonzero = |m: &RationalMatrix| {
            subsets(4, 2)
                .iter()
                .filter(|x| {
                    let v = plucker_coordinate(m, x).unwrap();
                    assert!(!v.is_negative());
                    !v.is_zero()
                })
                .count()
        };
        let moved = structured_matrix(2, 2, &[(2, 1, int(1))], &rows, &one, &one);
        assert!(nonzero(&moved) > nonzero(&base));
    }

    #[test]
    fn subset_ranks_are_lexicographic() {
        for (k, set) in subsets(7, 3).iter().enumerate() {
            assert_eq!(subset_rank(set, 7), k);
        }
    }

    #[test]
    fn integer_sign_evaluation_agrees() {
        let ctx = GrassmannContext::new(2, 3).unwrap();
        let t = |c: Rational, i: &[usize], j: &[usize]| QuadTerm::new(c, s(i), s(j));
        let e = QuadExpression::new(
            ctx,
            vec![t(ratio(1, 3), &[1, 3], &[2, 4]), t(ratio(-1, 2), &[1, 4], &[2, 3]), t(int(1), &[1, 2], &[3, 4])],
        )
        .unwrap();
        let compiled = CompiledExpression::new(&e);
        for seed in 0..50 {
            let mode = if seed % 2 == 0 { SampleMode::Embedded } else { SampleMode::Structured };
            let pt = generate_test_point(ctx, mode, seed, 9);
            let exact = evaluate_expression(&e, &pt).unwrap();
            let sign = if exact.is_positive() { 1 } else if exact.is_negative() { -1 } else { 0 };
            assert_eq!(compiled.sign(&IntegerPlucker::new(&pt)), sign);
        }
    }
}
