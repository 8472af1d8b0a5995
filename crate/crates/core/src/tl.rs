//! The Temperley–Lieb algebra `T_n(2)`, its diagram basis, the map
//! `σ: s_i ↦ t_i - 1` from the symmetric group, and Temperley–Lieb
//! immanants.
//!
//! Basis elements are Kauffman diagrams on `n` top and `n` bottom points;
//! a product `a·b` places `a` above `b` and every closed loop contributes
//! a factor 2. Words are reported in Jones normal form
//! `(t_{a_1} t_{a_1-1} … t_{b_1}) (t_{a_2} … t_{b_2}) …` with
//! `a_1 < a_2 < …`, `b_1 < b_2 < …` and `b_i <= a_i`.
//!
//! Boundary labels used for matchings on `[2n]`: bottom point `i` is `i`
//! and top point `i` is `2n + 1 - i`. So matrix rows sit on the bottom and
//! columns on the top; with the other orientation the identity
//! `Δ_I(x̄) Δ_{I^c}(x̄) = Σ_τ b_τ(I) Imm_τ(x)` fails from `n = 3` on.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index_set::{subsets, IndexSet};
use crate::matching::Matching;
use crate::numeric::RationalMatrix;
use crate::Rational;

/// Partner table of a Kauffman diagram: indices `0..n` are top points,
/// `n..2n` bottom points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Diagram(Vec<usize>);

impl Diagram {
    fn identity(n: usize) -> Self {
        Self((0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect())
    }

    /// `t_i`, `1 <= i < n`.
    fn generator(n: usize, i: usize) -> Self {
        let mut d = Self::identity(n);
        let (a, b) = (i - 1, i);
        d.0[a] = b;
        d.0[b] = a;
        d.0[n + a] = n + b;
        d.0[n + b] = n + a;
        d
    }

    /// `self` stacked above `other`; returns the diagram and the number of
    /// closed loops.
    fn compose(&self, other: &Self) -> (Self, usize) {
        let n = self.0.len() / 2;
        let (a, b) = (&self.0, &other.0);
        let mut out = vec![usize::MAX; 2 * n];
        let mut seen_middle = vec![false; n];
        // Follow a strand entering the middle row at `mid`, having arrived
        // from `a` (`from_a`) or from `b`. Returns the outer endpoint.
        let follow = |mut mid: usize, mut from_a: bool, seen: &mut Vec<bool>| -> usize {
            loop {
                seen[mid] = true;
                if from_a {
                    let k = b[mid];
                    if k >= n {
                        return k;
                    }
                    mid = k;
                } else {
                    let k = a[n + mid];
                    if k < n {
                        return k;
                    }
                    mid = k - n;
                }
                from_a = !from_a;
            }
        };
        for p in 0..2 * n {
            if out[p] != usize::MAX {
                continue;
            }
            let end = if p < n {
                let k = a[p];
                if k < n { k } else { follow(k - n, true, &mut seen_middle) }
            } else {
                let k = b[p];
                if k >= n { k } else { follow(k, false, &mut seen_middle) }
            };
            out[p] = end;
            out[end] = p;
        }
        let mut loops = 0;
        for start in 0..n {
            if seen_middle[start] {
                continue;
            }
            loops += 1;
            let mut mid = start;
            loop {
                seen_middle[mid] = true;
                let k = b[mid];
                seen_middle[k] = true;
                mid = a[n + k] - n;
                if mid == start {
                    break;
                }
            }
        }
        (Self(out), loops)
    }

    fn to_matching(&self) -> Matching {
        let n = self.0.len() / 2;
        let label = |p: usize| if p < n { 2 * n - p } else { p - n + 1 };
        let pairs = (0..2 * n)
            .filter(|&p| p < self.0[p])
            .map(|p| (label(p), label(self.0[p])));
        Matching::new(pairs, IndexSet::range(1, 2 * n)).expect("Kauffman diagrams are noncrossing")
    }
}

/// A basis word in Jones normal form; each entry is a generator index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLWord(Vec<usize>);

impl TLWord {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn generators(&self) -> &[usize] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "t{g}")?;
        }
        Ok(())
    }
}

/// Every Jones normal form word for `T_n`.
pub fn jones_normal_forms(n: usize) -> Vec<TLWord> {
    fn extend(n: usize, last_a: usize, last_b: usize, cur: &mut Vec<usize>, out: &mut Vec<TLWord>) {
        out.push(TLWord(cur.clone()));
        for a in last_a + 1..n {
            for b in last_b + 1..=a {
                let len = cur.len();
                cur.extend((b..=a).rev());
                extend(n, a, b, cur, out);
                cur.truncate(len);
            }
        }
    }
    let mut out = Vec::new();
    extend(n, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// A linear combination of basis words with nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TLElement {
    coeffs: BTreeMap<TLWord, Rational>,
}

impl TLElement {
    pub fn coefficient(&self, w: &TLWord) -> Rational {
        self.coeffs.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLWord, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, w: TLWord, c: Rational) {
        let entry = self.coeffs.entry(w).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::default();
        for (w, c) in &self.coeffs {
            out.add_term(w.clone(), c * k);
        }
        out
    }
}

impl fmt::Display for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·{w}")?;
        }
        Ok(())
    }
}

/// A permutation of `[n]` in one-line notation, `w(i) = self.0[i-1]`.
/// Products compose right to left: `(u·w)(i) = u(w(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; one_line.len()];
        for &x in &one_line {
            if x == 0 || x > one_line.len() || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::TemperleyLieb(format!("{one_line:?} is not a permutation")));
            }
        }
        Ok(Self(one_line))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    /// The adjacent transposition `s_i`.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x - 1] = i + 1;
        }
        Self(out)
    }

    pub fn inversions(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
            .sum()
    }

    pub fn sign(&self) -> i64 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// A reduced word `[i_1, …, i_k]` with `self = s_{i_1} ⋯ s_{i_k}`,
    /// peeling off the rightmost descent each time.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.0.clone();
        let mut word = Vec::new();
        while let Some(i) = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            word.push(i + 1);
        }
        word.reverse();
        word
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Permutation>) {
            if left.is_empty() {
                out.push(Permutation(cur.clone()));
                return;
            }
            for k in 0..left.len() {
                let x = left.remove(k);
                cur.push(x);
                rec(left, cur, out);
                cur.pop();
                left.insert(k, x);
            }
        }
        let mut out = Vec::new();
        rec(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `T_n(2)` with its basis tables.
#[derive(Debug, Clone)]
pub struct TemperleyLieb {
    n: usize,
    basis: Vec<TLWord>,
    diagrams: Vec<Diagram>,
    index: HashMap<Diagram, usize>,
    positions: HashMap<TLWord, usize>,
    f_cache: OnceLock<Vec<Vec<Rational>>>,
}

impl TemperleyLieb {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TemperleyLieb("n must be positive".into()));
        }
        let basis = jones_normal_forms(n);
        let diagrams: Vec<Diagram> = basis
            .iter()
            .map(|w| {
                w.0.iter().fold(Diagram::identity(n), |acc, &g| {
                    let (d, loops) = acc.compose(&Diagram::generator(n, g));
                    debug_assert_eq!(loops, 0, "normal forms are loop-free");
                    d
                })
            })
            .collect();
        let index: HashMap<Diagram, usize> =
            diagrams.iter().cloned().enumerate().map(|(k, d)| (d, k)).collect();
        if index.len() != basis.len() {
            return Err(Error::TemperleyLieb("normal forms are not distinct diagrams".into()));
        }
        let positions = basis.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        Ok(Self {
            n,
            basis,
            diagrams,
            index,
            positions,
            f_cache: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Basis words in generation order.
    pub fn basis(&self) -> &[TLWord] {
        &self.basis
    }

    /// Index of `w` in [`Self::basis`].
    pub fn position(&self, w: &TLWord) -> Result<usize> {
        self.positions
            .get(w)
            .copied()
            .ok_or_else(|| Error::TemperleyLieb(format!("{w} is not a normal-form word of T_{}", self.n)))
    }

    pub fn unit(&self) -> TLElement {
        self.basis_element(&TLWord::unit())
    }

    pub fn basis_element(&self, w: &TLWord) -> TLElement {
        let mut e = TLElement::default();
        e.add_term(w.clone(), Rational::one());
        e
    }

    pub fn generator(&self, i: usize) -> Result<TLElement> {
        self.word(&[i])
    }

    /// The product `t_{i_1} ⋯ t_{i_k}` reduced to normal form.
    pub fn word(&self, generators: &[usize]) -> Result<TLElement> {
        if let Some(&g) = generators.iter().find(|&&g| g == 0 || g >= self.n) {
            return Err(Error::TemperleyLieb(format!("generator t{g} outside 1..{}", self.n - 1)));
        }
        let mut d = Diagram::identity(self.n);
        let mut loops = 0;
        for &g in generators {
            let (next, l) = d.compose(&Diagram::generator(self.n, g));
            d = next;
            loops += l;
        }
        let mut e = TLElement::default();
        e.add_term(self.basis[self.index[&d]].clone(), Rational::from_integer((1i64 << loops).into()));
        Ok(e)
    }

    pub fn multiply(&self, a: &TLElement, b: &TLElement) -> Result<TLElement> {
        let mut out = TLElement::default();
        for (wa, ca) in &a.coeffs {
            let da = &self.diagrams[self.position(wa)?];
            for (wb, cb) in &b.coeffs {
                let db = &self.diagrams[self.position(wb)?];
                let (d, loops) = da.compose(db);
                let c = ca * cb * Rational::from_integer((1i64 << loops).into());
                out.add_term(self.basis[self.index[&d]].clone(), c);
            }
        }
        Ok(out)
    }

    /// `σ(w) = ∏ (t_{i_j} - 1)` along a reduced word of `w`.
    pub fn sigma(&self, w: &Permutation) -> Result<TLElement> {
        self.sigma_of_word(&w.reduced_word())
    }

    /// `∏ (t_{i_j} - 1)` for an arbitrary word.
    pub fn sigma_of_word(&self, word: &[usize]) -> Result<TLElement> {
        let minus_one = self.unit().scale(&-Rational::one());
        let mut acc = self.unit();
        for &i in word {
            let factor = self.generator(i)?.add(&minus_one);
            acc = self.multiply(&acc, &factor)?;
        }
        Ok(acc)
    }

    /// `f_τ(w)` for every basis word `τ` (outer, basis order) and every
    /// permutation (inner, lexicographic order). Computed once.
    pub fn f_table(&self) -> Result<&[Vec<Rational>]> {
        if let Some(t) = self.f_cache.get() {
            return Ok(t);
        }
        let perms = Permutation::all(self.n);
        let sigmas = perms.iter().map(|w| self.sigma(w)).collect::<Result<Vec<_>>>()?;
        let table = self
            .basis
            .iter()
            .map(|tau| sigmas.iter().map(|s| s.coefficient(tau)).collect())
            .collect();
        Ok(self.f_cache.get_or_init(|| table))
    }

    /// The noncrossing matching of `[2n]` drawn by `tau`.
    pub fn to_matching(&self, tau: &TLWord) -> Result<Matching> {
        Ok(self.diagrams[self.position(tau)?].to_matching())
    }

    /// `b_τ(I) = 1` iff every edge of `τ` joins `I` and its complement.
    pub fn b_vector(&self, set: &IndexSet) -> Result<Vec<(TLWord, bool)>> {
        let n = self.n;
        if set.len() != n || set.max().is_some_and(|x| x > 2 * n) {
            return Err(Error::SizeMismatch(format!("{set} is not an {n}-subset of [{}]", 2 * n)));
        }
        Ok(self
            .basis
            .iter()
            .zip(&self.diagrams)
            .map(|(w, d)| {
                let m = d.to_matching();
                let ok = m.pairs().iter().all(|&(u, v)| set.contains(u) != set.contains(v));
                (w.clone(), ok)
            })
            .collect())
    }

    /// `Imm_τ(A) = Σ_w f_τ(w) ∏ A_{i, w(i)}`.
    pub fn immanant(&self, tau: &TLWord, a: &RationalMatrix) -> Result<Rational> {
        let k = self.position(tau)?;
        Ok(self.immanants(a)?.swap_remove(k))
    }

    /// `Imm_τ(A)` for every basis word, in basis order.
    pub fn immanants(&self, a: &RationalMatrix) -> Result<Vec<Rational>> {
        let n = self.n;
        if a.rows() != n || a.cols() != n {
            return Err(Error::SizeMismatch(format!("immanant of T_{n} needs an {n}x{n} matrix")));
        }
        let products: Vec<Rational> = Permutation::all(n)
            .iter()
            .map(|w| (1..=n).fold(Rational::one(), |acc, i| acc * a.get(i - 1, w.apply(i) - 1)))
            .collect();
        Ok(self
            .f_table()?
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&products)
                    .filter(|(f, _)| !f.is_zero())
                    .map(|(f, p)| f * p)
                    .sum()
            })
            .collect())
    }
}

/// Coefficients of `∏_i x_{i, w(i)}` in `Δ_I(x̄) Δ_{I^c}(x̄)`, where `x̄` is
/// the generic `n × n` matrix stacked on `W0`, indexed like
/// [`Permutation::all`]. Errors if the product has a monomial that is not
/// of this form.
pub fn product_coefficients(set: &IndexSet, n: usize) -> Result<Vec<Rational>> {
    if set.len() != n || set.max().is_some_and(|x| x > 2 * n) {
        return Err(Error::SizeMismatch(format!("{set} is not an {n}-subset of [{}]", 2 * n)));
    }
    let left = leibniz_monomials(set, n);
    let right = leibniz_monomials(&set.complement(2 * n), n);
    let perms = Permutation::all(n);
    let slot: HashMap<&Permutation, usize> = perms.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut out = vec![Rational::zero(); perms.len()];
    for (cols_l, sign_l) in &left {
        for (cols_r, sign_r) in &right {
            let mut one_line = vec![0; n];
            for &(r, c) in cols_l.iter().chain(cols_r) {
                if one_line[r - 1] != 0 {
                    return Err(Error::TemperleyLieb("monomial repeats a row".into()));
                }
                one_line[r - 1] = c;
            }
            let w = Permutation::new(one_line)
                .map_err(|_| Error::TemperleyLieb("monomial is not a permutation monomial".into()))?;
            out[slot[&w]] += Rational::from_integer((sign_l * sign_r).into());
        }
    }
    Ok(out)
}

/// Nonzero terms of the Leibniz expansion of `Δ_I(x̄)`: the `x` variables
/// used, as `(row, column)` pairs, and the accumulated sign.
fn leibniz_monomials(set: &IndexSet, n: usize) -> Vec<(Vec<(usize, usize)>, i64)> {
    let rows: Vec<usize> = set.iter().collect();
    let mut out = Vec::new();
    for pi in Permutation::all(n) {
        let mut sign = pi.sign();
        let mut vars = Vec::new();
        let mut zero = false;
        for (k, &r) in rows.iter().enumerate() {
            let c = pi.apply(k + 1);
            if r <= n {
                vars.push((r, c));
            } else {
                let i = r - n;
                if c != n + 1 - i {
                    zero = true;
                    break;
                }
                if i.is_multiple_of(2) {
                    sign = -sign;
                }
            }
        }
        if !zero {
            out.push((vars, sign));
        }
    }
    out
}

/// Checks `Δ_I(x̄) Δ_{I^c}(x̄) = Σ_τ b_τ(I) Imm_τ(x)` coefficientwise for
/// every `n`-subset `I` of `[2n]`.
pub fn verify_decomposition(n: usize) -> Result<bool> {
    let alg = TemperleyLieb::new(n)?;
    let f = alg.f_table()?;
    for set in subsets(2 * n, n) {
        let lhs = product_coefficients(&set, n)?;
        let b = alg.b_vector(&set)?;
        for (k, value) in lhs.iter().enumerate() {
            let rhs: Rational = b
                .iter()
                .zip(f)
                .filter(|((_, on), _)| *on)
                .map(|(_, row)| &row[k])
                .sum();
            if &rhs != value {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::catalan;
    use crate::int;

    fn word(v: &[usize]) -> TLWord {
        TLWord(v.to_vec())
    }

    #[test]
    fn basis_counts() {
        for n in 1..=8 {
            assert_eq!(TemperleyLieb::new(n).unwrap().basis().len() as u128, catalan(n), "n = {n}");
        }
    }

    #[test]
    fn relations() {
        let alg = TemperleyLieb::new(4).unwrap();
        let t = |i| alg.generator(i).unwrap();
        assert_eq!(alg.multiply(&t(1), &t(1)).unwrap(), t(1).scale(&int(2)));
        assert_eq!(alg.word(&[1, 2, 1]).unwrap(), t(1));
        assert_eq!(alg.word(&[2, 1, 2]).unwrap(), t(2));
        assert_eq!(alg.word(&[1, 3]).unwrap(), alg.word(&[3, 1]).unwrap());
        assert!(alg.generator(4).is_err());
    }

    #[test]
    fn sigma_examples() {
        let alg = TemperleyLieb::new(2).unwrap();
        assert_eq!(alg.sigma(&Permutation::identity(2)).unwrap(), alg.unit());
        let s1 = alg.sigma(&Permutation::simple(2, 1)).unwrap();
        assert_eq!(s1.coefficient(&TLWord::unit()), int(-1));
        assert_eq!(s1.coefficient(&word(&[1])), int(1));

        let alg = TemperleyLieb::new(3).unwrap();
        let e = alg.sigma_of_word(&[1, 2]).unwrap();
        assert_eq!(e.coefficient(&word(&[1, 2])), int(1));
        assert_eq!(e.coefficient(&word(&[1])), int(-1));
        assert_eq!(e.coefficient(&word(&[2])), int(-1));
        assert_eq!(e.coefficient(&TLWord::unit()), int(1));
    }

    #[test]
    fn matchings_for_two_strands() {
        let alg = TemperleyLieb::new(2).unwrap();
        assert_eq!(alg.to_matching(&TLWord::unit()).unwrap().pairs(), &[(1, 4), (2, 3)]);
        assert_eq!(alg.to_matching(&word(&[1])).unwrap().pairs(), &[(1, 2), (3, 4)]);
        let alg = TemperleyLieb::new(3).unwrap();
        let ms: std::collections::BTreeSet<Matching> =
            alg.basis().iter().map(|w| alg.to_matching(w).unwrap()).collect();
        assert_eq!(ms.len(), 5);
    }

    #[test]
    fn b_vector_examples() {
        let alg = TemperleyLieb::new(2).unwrap();
        let b = |v: &[usize]| -> Vec<bool> {
            alg.b_vector(&IndexSet::new(v.iter().copied()).unwrap())
                .unwrap()
                .into_iter()
                .map(|(_, x)| x)
                .collect()
        };
        assert_eq!(b(&[1, 2]), vec![true, false]);
        assert_eq!(b(&[1, 3]), vec![true, true]);
        assert_eq!(b(&[1, 4]), vec![false, true]);
    }

    #[test]
    fn product_coefficient_examples() {
        let set = |v: &[usize]| IndexSet::new(v.iter().copied()).unwrap();
        assert_eq!(product_coefficients(&set(&[1, 2]), 2).unwrap(), vec![int(1), int(-1)]);
        assert_eq!(product_coefficients(&set(&[1, 3]), 2).unwrap(), vec![int(1), int(0)]);
        assert_eq!(product_coefficients(&set(&[1, 4]), 2).unwrap(), vec![int(0), int(1)]);
    }

    #[test]
    fn decomposition_holds() {
        for n in 1..=4 {
            assert!(verify_decomposition(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn reduced_words() {
        for w in Permutation::all(4) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.inversions());
            let back = word
                .iter()
                .fold(Permutation::identity(4), |acc, &i| acc.compose(&Permutation::simple(4, i)));
            assert_eq!(back, w);
        }
    }
}
