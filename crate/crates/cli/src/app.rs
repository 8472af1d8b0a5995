//! Argument definitions and command dispatch.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use tnngrass::cluster::{initial_cluster, r_reduce};
use tnngrass::families::{bj_expression, logsupmod_expression, lpp_expression};
use tnngrass::numeric::{falsify, generate_test_point, FalsifyOptions, SampleMode};
use tnngrass::tl::{verify_decomposition, TemperleyLieb, Permutation};
use tnngrass::{
    decide_recursive_with, decide_with, enumerate_matchings, DecideOptions, GrassmannContext,
    IndexSet, MatchingMode, QuadExpression, RationalMatrix, RecursionOptions, Status,
};

use crate::input::{format_input, format_rational, parse_input, parse_rational, to_json, ParseError};
use crate::report::{pairs, Report, Timing};

#[derive(Debug, Parser)]
#[command(name = "tnngrass", version, about = "Decide quadratic Plücker inequalities on the totally nonnegative Grassmannian")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an inequality read from a JSON file (`-` reads stdin).
    Check {
        file: PathBuf,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Principal-minor inequality comparing size-k and size-(k+1) sums.
    Bj {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        action: FamilyArgs,
    },
    /// `Δ_min Δ_max - Δ_I Δ_J` over Gr(m, m+n).
    Logsupmod {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "I", value_parser = parse_list, allow_hyphen_values = true)]
        i: List,
        #[arg(long = "J", value_parser = parse_list, allow_hyphen_values = true)]
        j: List,
        #[command(flatten)]
        action: FamilyArgs,
    },
    /// Minor inequality for an n × n matrix, rows P, R and columns Q, S.
    Lpp {
        #[arg(long)]
        n: usize,
        #[arg(long = "P", value_parser = parse_list)]
        p: List,
        #[arg(long = "Q", value_parser = parse_list)]
        q: List,
        #[arg(long = "R", value_parser = parse_list)]
        r: List,
        #[arg(long = "S", value_parser = parse_list)]
        s: List,
        #[command(flatten)]
        action: FamilyArgs,
    },
    /// List the noncrossing perfect matchings of [2η].
    Matchings {
        #[arg(long)]
        eta: usize,
        /// Only matchings invariant under u ↦ 2η+1-u.
        #[arg(long)]
        symmetric: bool,
    },
    /// The rectangular initial cluster of Gr(m, m+n).
    Cluster {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Reduce by the pair (m, m+1) and compare with the cluster of Gr(m-1, m+n-2).
        #[arg(long)]
        reduce: bool,
    },
    /// Temperley–Lieb algebra T_n(2).
    Tl {
        #[command(subcommand)]
        command: TlCommand,
    },
    /// Print a seeded point of the totally nonnegative Grassmannian.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Embedded)]
        mode: Mode,
        /// Weights are drawn from {p/q : 1 <= p, q <= bound}.
        #[arg(long, default_value_t = 3)]
        bound: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TlCommand {
    /// Check the product expansion of Δ_I Δ_{I^c} for every I.
    Verify {
        #[arg(long)]
        n: usize,
    },
    /// Coefficients of an immanant and optionally its value on a matrix.
    Immanant {
        #[arg(long)]
        n: usize,
        /// Generator indices, as `t1t2` or `1,2`; empty for the unit.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Rows separated by `;`, entries by `,`.
        #[arg(long)]
        matrix: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Embedded,
    Structured,
}

#[derive(Debug, Clone, Args)]
pub struct DecisionArgs {
    /// Use the star-symmetric certificate (principal inputs only; a
    /// necessary condition for validity from η = 3 on).
    #[arg(long)]
    pub principal: bool,
    /// Decide by Chevalley reduction instead of enumerating matchings.
    #[arg(long)]
    pub recursive: bool,
    /// Report every certificate row, not just up to the first violation.
    #[arg(long)]
    pub full_certificate: bool,
    /// Search for a numeric counterexample when the verdict is invalid.
    #[arg(long)]
    pub falsify: bool,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include elapsed decision time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Print the expression as an input document.
    #[arg(long, conflicts_with = "check")]
    pub emit: bool,
    /// Decide the expression (the default).
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub decision: DecisionArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Engine(#[from] tnngrass::Error),
    #[error("{0}")]
    Usage(String),
}

/// What a command prints and the exit code it requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
    pub notes: Vec<String>,
}

impl Outcome {
    fn json(value: &impl Serialize, ok: bool) -> Self {
        Self {
            stdout: serde_json::to_string(value).expect("outputs serialize"),
            code: if ok { 0 } else { 1 },
            notes: Vec::new(),
        }
    }
}

/// A comma-separated index list; the empty string is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List(pub Vec<usize>);

fn parse_list(text: &str) -> Result<List, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|e| format!("{s:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

fn index_set(name: &str, elems: &List) -> Result<IndexSet, CliError> {
    IndexSet::new(elems.0.iter().copied()).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { file, decision } => {
            let bytes = read_input(file)?;
            let expr = parse_input(&bytes)?;
            check(&expr, decision)
        }
        Command::Bj { n, k, action } => family(bj_expression(*n, *k)?, action),
        Command::Logsupmod { m, n, i, j, action } => {
            let ctx = GrassmannContext::new(*m, *n)?;
            family(logsupmod_expression(&index_set("I", i)?, &index_set("J", j)?, ctx)?, action)
        }
        Command::Lpp { n, p, q, r, s, action } => {
            let e = lpp_expression(
                &index_set("P", p)?,
                &index_set("Q", q)?,
                &index_set("R", r)?,
                &index_set("S", s)?,
                *n,
            )?;
            family(e, action)
        }
        Command::Matchings { eta, symmetric } => matchings(*eta, *symmetric),
        Command::Cluster { m, n, reduce } => cluster(*m, *n, *reduce),
        Command::Tl { command } => match command {
            TlCommand::Verify { n } => tl_verify(*n),
            TlCommand::Immanant { n, tau, matrix } => tl_immanant(*n, tau, matrix.as_deref()),
        },
        Command::Sample { m, n, seed, mode, bound } => sample(*m, *n, *seed, *mode, *bound),
    }
}

fn read_input(file: &PathBuf) -> Result<Vec<u8>, CliError> {
    let io = |source| CliError::Io {
        path: file.display().to_string(),
        source,
    };
    if file.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(io)?;
        Ok(buf)
    } else {
        std::fs::read(file).map_err(io)
    }
}

fn family(expr: QuadExpression, action: &FamilyArgs) -> Result<Outcome, CliError> {
    if action.emit {
        return Ok(Outcome {
            stdout: to_json(&format_input(&expr)),
            code: 0,
            notes: Vec::new(),
        });
    }
    check(&expr, &action.decision)
}

/// Decides `expr` with the selected method and builds the report.
pub fn check(expr: &QuadExpression, args: &DecisionArgs) -> Result<Outcome, CliError> {
    let mut notes = Vec::new();
    if args.principal && !expr.is_principal()? {
        return Err(CliError::Usage("--principal needs an expression in principal coordinates".into()));
    }
    let start = Instant::now();
    let opts = DecideOptions {
        full_certificate: args.full_certificate,
        falsify: None,
    };
    let mut verdict = if args.recursive {
        let ropts = RecursionOptions {
            principal_fast_path: args.principal,
            full: args.full_certificate,
        };
        decide_recursive_with(expr, ropts).0
    } else if args.principal {
        tnngrass::decide::decide_principal_with(expr, &opts)?
    } else {
        decide_with(expr, &opts)?
    };
    if args.falsify && verdict.status == Status::Invalid {
        let fopts = FalsifyOptions {
            samples: args.samples,
            seed: args.seed,
        };
        verdict.counterexample = falsify(expr, &fopts)?;
        if verdict.counterexample.is_none() {
            notes.push(format!("no counterexample in {} samples", args.samples));
        }
    }
    let elapsed = start.elapsed();
    if args.principal && verdict.is_valid() && expr.eta() >= 3 {
        notes.push("the symmetric certificate is necessary but not sufficient here; run without --principal for a complete decision".into());
    }
    let mut report = Report::from_verdict(&verdict);
    if args.falsify {
        report.seed = Some(args.seed);
    }
    if args.timing {
        report.timing = Some(Timing {
            elapsed_us: elapsed.as_micros().try_into().unwrap_or(u64::MAX),
        });
    }
    Ok(Outcome {
        stdout: report.to_json(),
        code: if report.is_valid() { 0 } else { 1 },
        notes,
    })
}

#[derive(Serialize)]
struct MatchingList {
    eta: usize,
    symmetric: bool,
    count: usize,
    matchings: Vec<Vec<[usize; 2]>>,
}

fn matchings(eta: usize, symmetric: bool) -> Result<Outcome, CliError> {
    let mode = if symmetric {
        MatchingMode::Symmetric(tnngrass::StarMap::new(eta))
    } else {
        MatchingMode::Plain
    };
    let all = enumerate_matchings(&IndexSet::range(1, 2 * eta), mode)?;
    let list = MatchingList {
        eta,
        symmetric,
        count: all.len(),
        matchings: all.iter().map(pairs).collect(),
    };
    Ok(Outcome::json(&list, true))
}

#[derive(Serialize)]
struct ClusterOutput {
    m: usize,
    n: usize,
    sets: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

fn set_list<'a>(sets: impl IntoIterator<Item = &'a IndexSet>) -> Vec<Vec<usize>> {
    sets.into_iter().map(|s| s.as_slice().to_vec()).collect()
}

fn cluster(m: usize, n: usize, reduce: bool) -> Result<Outcome, CliError> {
    let c = initial_cluster(m, n)?;
    let mut out = ClusterOutput {
        m,
        n,
        sets: set_list(&c.sets),
        reduced: None,
        expected: None,
        matches: None,
    };
    if reduce {
        if m < 2 {
            return Err(CliError::Usage("--reduce needs m >= 2".into()));
        }
        let reduced = r_reduce(&c.sets, m, m + 1, m + n)?;
        let expected = initial_cluster(m - 1, n - 1)?;
        out.matches = Some(reduced == expected.sets);
        out.reduced = Some(set_list(&reduced));
        out.expected = Some(set_list(&expected.sets));
    }
    let ok = out.matches.unwrap_or(true) && c.duplicates.is_empty();
    Ok(Outcome::json(&out, ok))
}

#[derive(Serialize)]
struct TlVerify {
    n: usize,
    basis_size: usize,
    verified: bool,
}

fn tl_verify(n: usize) -> Result<Outcome, CliError> {
    let tl = TemperleyLieb::new(n)?;
    let out = TlVerify {
        n,
        basis_size: tl.basis().len(),
        verified: verify_decomposition(n)?,
    };
    let ok = out.verified;
    Ok(Outcome::json(&out, ok))
}

#[derive(Serialize)]
struct ImmanantOutput {
    n: usize,
    tau: String,
    coefficients: Vec<PermutationCoefficient>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize)]
struct PermutationCoefficient {
    permutation: Vec<usize>,
    f: String,
}

fn parse_word(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("--tau: cannot read {text:?} as a generator word"));
    let text = text.trim();
    if text.is_empty() || text == "1" {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = if text.starts_with('t') {
        text.split('t').skip(1).collect()
    } else {
        text.split(',').collect()
    };
    parts.iter().map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect()
}

fn parse_matrix(text: &str) -> Result<RationalMatrix, CliError> {
    let rows = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| parse_rational(x.trim()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--matrix: {e}")))?;
    Ok(RationalMatrix::from_rows(rows)?)
}

fn tl_immanant(n: usize, tau: &str, matrix: Option<&str>) -> Result<Outcome, CliError> {
    let tl = TemperleyLieb::new(n)?;
    let element = tl.word(&parse_word(tau)?)?;
    // A monomial reduces to a power of 2 times one basis word.
    let word = match element.terms().next() {
        Some((w, _)) => w.clone(),
        None => return Err(CliError::Usage("--tau reduces to zero".into())),
    };
    let k = tl.position(&word)?;
    let row = &tl.f_table()?[k];
    let coefficients = Permutation::all(n)
        .iter()
        .zip(row)
        .map(|(w, f)| PermutationCoefficient {
            permutation: w.one_line().to_vec(),
            f: format_rational(f),
        })
        .collect();
    let value = match matrix {
        Some(text) => Some(format_rational(&tl.immanant(&word, &parse_matrix(text)?)?)),
        None => None,
    };
    let out = ImmanantOutput {
        n,
        tau: word.to_string(),
        coefficients,
        value,
    };
    Ok(Outcome::json(&out, true))
}

#[derive(Serialize)]
struct SampleOutput {
    m: usize,
    n: usize,
    seed: u64,
    matrix: Vec<Vec<String>>,
    plucker: Vec<PluckerValue>,
}

#[derive(Serialize)]
struct PluckerValue {
    set: Vec<usize>,
    value: String,
}

fn sample(m: usize, n: usize, seed: u64, mode: Mode, bound: u64) -> Result<Outcome, CliError> {
    if bound == 0 {
        return Err(CliError::Usage("--bound must be positive".into()));
    }
    let ctx = GrassmannContext::new(m, n)?;
    let mode = match mode {
        Mode::Embedded => SampleMode::Embedded,
        Mode::Structured => SampleMode::Structured,
    };
    let pt = generate_test_point(ctx, mode, seed, bound);
    let plucker = tnngrass::index_set::subsets(m + n, m)
        .into_iter()
        .map(|s| {
            let value = format_rational(&pt.plucker(&s)?);
            Ok(PluckerValue {
                set: s.as_slice().to_vec(),
                value,
            })
        })
        .collect::<Result<Vec<_>, tnngrass::Error>>()?;
    let out = SampleOutput {
        m,
        n,
        seed,
        matrix: pt
            .matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect(),
        plucker,
    };
    Ok(Outcome::json(&out, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_words() {
        assert_eq!(parse_list("1,4").unwrap(), List(vec![1, 4]));
        assert_eq!(parse_list("").unwrap(), List(Vec::new()));
        assert!(parse_list("1,x").is_err());
        assert_eq!(parse_word("t1t2").unwrap(), vec![1, 2]);
        assert_eq!(parse_word("2,1").unwrap(), vec![2, 1]);
        assert_eq!(parse_word("").unwrap(), Vec::<usize>::new());
        assert!(parse_word("t1x").is_err());
    }

    #[test]
    fn matrices() {
        let a = parse_matrix("1,1;1,2").unwrap();
        assert_eq!(a, RationalMatrix::from_i64(&[&[1, 1], &[1, 2]]).unwrap());
        assert!(parse_matrix("1,1;1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
