//! Exact decision procedures for inequalities that are homogeneous and
//! quadratic in Plücker coordinates over the totally nonnegative
//! Grassmannian `Gr≥0(m, m+n)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`index_set`], [`matching`], [`cluster`]: index-set combinatorics,
//!   noncrossing matchings and the initial-cluster reduction demo.
//! * [`expr`]: quadratic expressions and the Chevalley rewriting operations.
//! * [`decide`]: the certificate engine, the involution certificate for
//!   principal expressions and the recursive Chevalley reduction.
//! * [`numeric`]: exact rational test points of `Gr≥0` and a falsifier.
//! * [`families`]: constructors for well-known inequality families.
//! * [`tl`]: the Temperley–Lieb algebra `T_n(2)` and its immanants.
//!
//! All arithmetic is exact; there is no floating point in any decision path.

#![forbid(unsafe_code)]

pub mod cluster;
pub mod decide;
pub mod error;
pub mod expr;
pub mod families;
pub mod index_set;
pub mod matching;
pub mod numeric;
pub mod tl;

pub use decide::{
    certificate_sums, decide, decide_principal, decide_recursive, decide_recursive_with,
    decide_with, filter_terms, CertificateRow, DecideOptions, RecursionOptions, RecursionStats,
    Status, Verdict,
};
pub use error::{Error, Result};
pub use expr::{GrassmannContext, QuadExpression, QuadTerm};
pub use index_set::{IndexSet, OrderPreservingMap};
pub use matching::{enumerate_matchings, Matching, MatchingMode, StarMap};
pub use numeric::{RationalMatrix, TestPoint};

/// Exact rational scalar used for coefficients, matrix entries and sums.
pub type Rational = num_rational::BigRational;

/// Builds an exact rational from a numerator and denominator.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Builds an exact integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(value.into())
}
