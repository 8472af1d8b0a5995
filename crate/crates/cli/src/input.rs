//! The JSON input format:
//!
//! ```json
//! {"m": 2, "n": 2, "terms": [{"c": "1", "I": [1, 3], "J": [2, 4]}]}
//! ```
//!
//! Coefficients are strings holding an integer or a fraction `p/q`.
//! Indices are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use tnngrass::{GrassmannContext, IndexSet, QuadExpression, QuadTerm, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<InputTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputTerm {
    pub c: String,
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { line: usize, column: usize, message: String },
    Field { path: String, message: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, column, message } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            ParseError::Field { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn field(path: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field {
        path: path.into(),
        message: message.into(),
    }
}

/// Parses a coefficient string: `"3"`, `"-2"`, `"1/3"`, `"-4/6"`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let bad = || format!("{text:?} is not an integer or a fraction p/q");
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (text, None),
    };
    let int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse::<num_bigint::BigInt>().ok()
    };
    let p = int(num).ok_or_else(bad)?;
    let q = match den {
        Some(q) => int(q).ok_or_else(bad)?,
        None => 1.into(),
    };
    if q == 0.into() {
        return Err(format!("{text:?} has a zero denominator"));
    }
    Ok(Rational::new(p, q))
}

/// `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Parses and validates an input document.
pub fn parse_input(bytes: &[u8]) -> Result<QuadExpression, ParseError> {
    let doc: InputDocument = serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    document_to_expression(&doc)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

pub fn document_to_expression(doc: &InputDocument) -> Result<QuadExpression, ParseError> {
    let (m, n) = (doc.m, doc.n);
    let ctx = GrassmannContext::new(m, n).map_err(|_| field("m", format!("need 1 <= m <= n, got m = {m}, n = {n}")))?;
    let mut terms = Vec::with_capacity(doc.terms.len());
    let mut first: Option<Vec<usize>> = None;
    for (k, t) in doc.terms.iter().enumerate() {
        let coeff = parse_rational(&t.c).map_err(|e| field(format!("terms[{k}].c"), e))?;
        let left = index_set(&t.i, m, n, &format!("terms[{k}].I"), "I")?;
        let right = index_set(&t.j, m, n, &format!("terms[{k}].J"), "J")?;
        let mut multiset: Vec<usize> = left.iter().chain(right.iter()).collect();
        multiset.sort_unstable();
        match &first {
            None => first = Some(multiset),
            Some(f) if *f != multiset => {
                return Err(field(
                    format!("terms[{k}]"),
                    "I ⊎ J differs from terms[0]; the expression must be homogeneous",
                ))
            }
            Some(_) => {}
        }
        terms.push(QuadTerm::new(coeff, left, right));
    }
    QuadExpression::new(ctx, terms).map_err(|e| field("terms", e.to_string()))
}

fn index_set(v: &[usize], m: usize, n: usize, path: &str, name: &str) -> Result<IndexSet, ParseError> {
    if v.len() != m {
        return Err(field(path, format!("|{name}| != m ({} indices, m = {m})", v.len())));
    }
    if let Some(&x) = v.iter().find(|&&x| x == 0 || x > m + n) {
        return Err(field(path, format!("index {x} outside [1, {}]", m + n)));
    }
    IndexSet::new(v.iter().copied()).map_err(|_| field(path, "indices must be distinct"))
}

/// The canonical document of an expression: sorted index arrays and
/// coefficients in lowest terms.
pub fn format_input(expr: &QuadExpression) -> InputDocument {
    let ctx = expr.ctx();
    InputDocument {
        m: ctx.m(),
        n: ctx.n(),
        terms: expr
            .terms()
            .iter()
            .map(|t| InputTerm {
                c: format_rational(&t.coeff),
                i: t.left.iter().collect(),
                j: t.right.iter().collect(),
            })
            .collect(),
    }
}

pub fn to_json(doc: &InputDocument) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}
