//! Command-line front end. `run_cli` does all the work and returns the text
//! and exit code, so it can be driven from tests without a process.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;

use crate::construct::{
    build_certificate, compute_bounds, find_params, prime_search, serialize, SearchWindow,
};
use crate::error::{Error, ErrorClass, Result};
use crate::ff_core::{factor, make_field};
use crate::verify_oracle::{
    brute_force_min_powers, check_multivariate_identity, least_degree_with_roots, verify_text,
    BruteForce, DEFAULT_SEED, DEFAULT_TRIALS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "waring",
    about = "Explicit Waring certificates for F_q[t]",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every available upper bound on the number of k-th powers needed for t
    Bound { p: u64, k: BigUint },
    /// Build, self-check and write a certificate
    Construct {
        p: u64,
        k: BigUint,
        /// force the digit base p^n
        #[arg(long)]
        n: Option<u32>,
        /// force the number of roots-of-unity slots
        #[arg(long = "M", value_name = "M")]
        m: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// replace scalars by k-th roots where they exist
        #[arg(long)]
        absorb_scalars: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Re-check a certificate file from scratch
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Expand the root-of-unity sum identity for one exponent vector
    Identity {
        #[arg(value_name = "M")]
        slots: u64,
        /// comma-separated exponents, e.g. 1,2
        exponents: String,
        #[arg(long)]
        p: Option<u64>,
        /// field degree over GF(p)
        #[arg(long)]
        m: Option<usize>,
    },
    /// Bound table for a range of k
    Table {
        p: u64,
        kmin: u64,
        kmax: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exhaustive search for the least number of k-th powers summing to t
    Oracle {
        p: u64,
        k: u64,
        #[arg(long)]
        field_degree: usize,
        #[arg(long)]
        max_terms: usize,
        #[arg(long)]
        max_degree: usize,
    },
    /// Least prime in (L, (2+eps)L] not dividing r
    PrimeSearch {
        r: u64,
        p: u64,
        /// decimal or fraction such as 1/2
        epsilon: Epsilon,
    },
}

#[derive(Debug, Clone, Copy)]
struct Epsilon(f64);

impl FromStr for Epsilon {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let value = match s.split_once('/') {
            Some((a, b)) => {
                let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
                let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
                a / b
            }
            None => s.trim().parse().map_err(|e| format!("{e}"))?,
        };
        Ok(Epsilon(value))
    }
}

fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Verification => EXIT_VERIFICATION,
        ErrorClass::Hypothesis => EXIT_HYPOTHESIS,
        ErrorClass::Resource => EXIT_RESOURCE,
        ErrorClass::Usage => EXIT_USAGE,
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => CommandOutcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => CommandOutcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(command: Command) -> Result<(i32, String)> {
    match command {
        Command::Bound { p, k } => Ok((EXIT_OK, compute_bounds(p, &k)?.to_string())),
        Command::Construct {
            p,
            k,
            n,
            m,
            out,
            absorb_scalars,
            trials,
            seed,
        } => construct(p, &k, n, m, out, absorb_scalars, trials, seed),
        Command::Verify { file, trials, seed } => {
            let text = std::fs::read_to_string(&file)?;
            let report = verify_text(&text, trials, seed)?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            };
            Ok((code, format!("{report}\n")))
        }
        Command::Identity {
            slots,
            exponents,
            p,
            m,
        } => identity(slots, &exponents, p, m),
        Command::Table { p, kmin, kmax, csv } => table(p, kmin, kmax, csv),
        Command::Oracle {
            p,
            k,
            field_degree,
            max_terms,
            max_degree,
        } => {
            let result = brute_force_min_powers(p, k, field_degree, max_terms, max_degree)?;
            let code = match result {
                BruteForce::Found(_) => EXIT_OK,
                BruteForce::NotFound { .. } => EXIT_VERIFICATION,
            };
            Ok((code, format!("{result}\n")))
        }
        Command::PrimeSearch { r, p, epsilon } => {
            let s = prime_search(r, p, epsilon.0)?;
            let mut text = format!("interval: ({:.6}, {:.6}]\n", s.lower, s.upper);
            match s.ell {
                Some(l) => writeln!(text, "least prime not dividing r: {l}").unwrap(),
                None => writeln!(text, "no prime in the interval avoids r").unwrap(),
            }
            let code = if s.ell.is_some() {
                EXIT_OK
            } else {
                EXIT_HYPOTHESIS
            };
            Ok((code, text))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn construct(
    p: u64,
    k: &BigUint,
    n: Option<u32>,
    m: Option<u64>,
    out: Option<PathBuf>,
    absorb: bool,
    trials: u32,
    seed: u64,
) -> Result<(i32, String)> {
    let window = SearchWindow {
        force_n: n,
        force_m: m,
        ..SearchWindow::default()
    };
    let params = find_params(p, k, &window)?;
    let cert = build_certificate(&params, absorb)?;
    let text = serialize(&cert);
    let report = verify_text(&text, trials, seed)?;

    let mut msg = String::new();
    writeln!(
        msg,
        "p = {}, k = {}, k' = {}, route {}, n = {}, M = {}, u = {}, field GF({}^{})",
        p,
        k,
        params.kprime,
        params.route,
        params.n,
        params.m,
        params.u,
        p,
        params.field.degree()
    )
    .unwrap();
    writeln!(msg, "terms: {} (bound {})", cert.len(), params.bound()).unwrap();
    writeln!(msg, "{report}").unwrap();
    if !report.passed() {
        return Ok((EXIT_VERIFICATION, msg));
    }
    match out {
        Some(path) => {
            std::fs::write(&path, &text)?;
            writeln!(msg, "certificate written to {}", path.display()).unwrap();
        }
        None => msg.push_str(&text),
    }
    Ok((EXIT_OK, msg))
}

fn least_prime_not_dividing(d: u64) -> u64 {
    (2..)
        .find(|&l| factor::is_prime(l) && !d.is_multiple_of(l))
        .expect("infinitely many primes")
}

fn identity(
    slots: u64,
    exponents: &str,
    p: Option<u64>,
    m: Option<usize>,
) -> Result<(i32, String)> {
    let k_vec = exponents
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| Error::InvalidArgument(format!("exponent {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = slots.max(2) - 1;
    let p = p.unwrap_or_else(|| least_prime_not_dividing(d));
    let m = match m {
        Some(m) => m,
        None => least_degree_with_roots(p, d).ok_or_else(|| {
            Error::Hypothesis(format!(
                "no field of characteristic {p} has a primitive {d}-th root of unity"
            ))
        })?,
    };
    let field = make_field(p, m)?;
    let holds = check_multivariate_identity(slots, &k_vec, &field)?;
    let text = format!(
        "M = {slots}, exponents {k_vec:?}, field GF({p}^{m}): identity {}\n",
        if holds { "holds" } else { "FAILS" }
    );
    Ok((if holds { EXIT_OK } else { EXIT_VERIFICATION }, text))
}

struct Row {
    k: u64,
    gamma: BigUint,
    digit_product: BigUint,
    best: BigUint,
    source: &'static str,
    terms: Option<usize>,
}

fn table_row(p: u64, k: u64) -> Result<Row> {
    let kb = BigUint::from(k);
    let b = compute_bounds(p, &kb)?;
    let terms = find_params(p, &kb, &SearchWindow::default())
        .and_then(|params| build_certificate(&params, false))
        .map(|c| c.len())
        .ok();
    Ok(Row {
        k,
        gamma: b.gamma,
        digit_product: b.vaserstein,
        best: b.best,
        source: b.best_source,
        terms,
    })
}

fn table(p: u64, kmin: u64, kmax: u64, csv: Option<PathBuf>) -> Result<(i32, String)> {
    if !factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if kmin > kmax {
        return Err(Error::InvalidArgument(format!(
            "empty range {kmin}..={kmax}"
        )));
    }
    let rows = (kmin.max(2)..=kmax)
        .into_par_iter()
        .filter(|k| k.gcd(&p) == 1)
        .map(|k| table_row(p, k))
        .collect::<Result<Vec<_>>>()?;

    let cell = |t: Option<usize>| t.map_or("-".to_string(), |s| s.to_string());
    let mut text = format!(
        "{:>8} {:>6} {:>14} {:>8} {:>12} {:>6}\n",
        "k", "gamma", "digit-product", "best", "source", "terms"
    );
    let mut csv_text =
        String::from("k,gamma,digit_product_bound,best_bound,best_source,certificate_terms\n");
    for r in &rows {
        writeln!(
            text,
            "{:>8} {:>6} {:>14} {:>8} {:>12} {:>6}",
            r.k,
            r.gamma,
            r.digit_product,
            r.best,
            r.source,
            cell(r.terms)
        )
        .unwrap();
        writeln!(
            csv_text,
            "{},{},{},{},{},{}",
            r.k,
            r.gamma,
            r.digit_product,
            r.best,
            r.source,
            r.terms.map_or(String::new(), |s| s.to_string())
        )
        .unwrap();
    }
    if let Some(path) = csv {
        std::fs::write(&path, csv_text)?;
        writeln!(text, "csv written to {}", path.display()).unwrap();
    }
    Ok((EXIT_OK, text))
}
