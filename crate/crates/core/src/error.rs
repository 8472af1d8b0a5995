use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index set must contain distinct positive integers, got {0:?}")]
    InvalidIndexSet(Vec<usize>),

    #[error("invalid Grassmannian context Gr({m},{ambient}): need 1 <= m <= n", ambient = m + n)]
    InvalidContext { m: usize, n: usize },

    #[error("term {term}: index set has {found} elements, expected m = {expected}")]
    TermSize {
        term: usize,
        expected: usize,
        found: usize,
    },

    #[error("term {term}: index {index} lies outside [1, {ambient}]")]
    IndexOutOfRange {
        term: usize,
        index: usize,
        ambient: usize,
    },

    #[error("term {term}: inhomogeneous, multiset union differs from term 0")]
    Inhomogeneous { term: usize },

    #[error("({u}, {v}) is not a pair of adjacent integers")]
    NotAdjacent { u: usize, v: usize },

    #[error("({u}, {v}) is outside the ambient range [1, {ambient}]")]
    PairOutOfRange { u: usize, v: usize, ambient: usize },

    #[error("{u} and {v} are not consecutive elements of the symmetric difference")]
    NotConsecutive { u: usize, v: usize },

    #[error("odd ground set of size {0}")]
    OddGroundSet(usize),

    #[error("ground set is not invariant under the star map u -> {reflect} - u", reflect = 2 * half + 1)]
    NotStarInvariant { half: usize },

    #[error("not a noncrossing perfect matching of the ground set: {0}")]
    InvalidMatching(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("principal form requires Gr(n,2n), got Gr({m},{ambient})", ambient = m + n)]
    PrincipalContext { m: usize, n: usize },

    #[error("expression is not principal; use the general decision procedure")]
    NotPrincipal,

    #[error("context mismatch: expression over Gr({0},{1}), point over Gr({2},{3})")]
    ContextMismatch(usize, usize, usize, usize),

    #[error("parameter must be positive: {0}")]
    NonPositiveParameter(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("Temperley-Lieb: {0}")]
    TemperleyLieb(String),
}
