//! Command-line surface: one subcommand per computational area, shared
//! output plumbing, and deterministic reports. All randomness is seeded and
//! every worker derives its own stream, so a fixed invocation produces
//! byte-identical output regardless of the thread count.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::equidist::{error_table, fit_decay, star_count};
use crate::error::{Error, Result};
use crate::expsums::{decomposition_bound, mirror_product_log, pal_exp_sum};
use crate::lemmas::run_suite;
use crate::moments::{farey_moment_sum, moment_exact, moment_ratio};
use crate::numeric::Angle;
use crate::palindromes::{class_counts, Filter, PalConfig, PalindromeStream};
use crate::sieve::{census_with, hypothesis_check};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    All,
    Odd,
    Star,
}

impl From<FilterArg> for Filter {
    fn from(f: FilterArg) -> Filter {
        match f {
            FilterArg::All => Filter::All,
            FilterArg::Odd => Filter::OddDigits,
            FilterArg::Star => Filter::Star,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "palinsieve",
    version,
    about = "Digit palindromes at desk scale: enumeration, exponential sums, \
             moments, residue-class equidistribution, and an almost-prime census"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Digit base b >= 2.
    #[arg(long, global = true, default_value_t = 10)]
    base: u32,
    /// Root seed for every randomized suite; fixed by default so runs are
    /// reproducible unless a new seed is asked for.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 keeps the library default). Reports do not depend
    /// on this value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format; each subcommand documents its default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List b-palindromes up to a bound, optionally filtered to odd digit
    /// length or to coprimality with b^3-b; with --mod, tally them by
    /// residue class instead. Exercises the exact block counts: palindromes
    /// with 2N+1 digits number (b-1)b^N.
    Enumerate {
        /// Upper bound (inclusive).
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// Tally by residue class modulo this instead of listing values.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Evaluate the exponential sum over odd-length palindromes at the
    /// rational angle h/q + k/(b^3-b), next to its mirror-product
    /// decomposition bound; or report one mirror product on its own.
    /// Exercises the inequality |sum e(a n)| <= decomposition bound.
    Expsum {
        /// Angle numerator h.
        #[arg(long)]
        num: i64,
        /// Angle denominator q.
        #[arg(long)]
        den: u64,
        /// Twist numerator k over b^3-b.
        #[arg(long = "shift-num", default_value_t = 0)]
        shift_num: i64,
        /// Sum over palindromes up to this bound.
        #[arg(long, conflicts_with = "prod", required_unless_present = "prod")]
        max: Option<u64>,
        /// Instead, report the log of the width-2N mirror product.
        #[arg(long)]
        prod: Option<u32>,
    },
    /// Exact 2K-th moment of the mirror product over the circle, its
    /// envelope normalization, and optionally the same moment summed over
    /// Farey fractions. Exercises the identity between the coefficient
    /// count and the quadrature of |Phi_N|^2K.
    Moments {
        /// Half-width N of the mirror product.
        #[arg(long = "N")]
        n: u32,
        /// Moment order parameter K (the moment is the 2K-th).
        #[arg(long = "K")]
        k: u32,
        /// Also sum the moment over reduced fractions with denominator at
        /// most this.
        #[arg(long)]
        farey: Option<u64>,
    },
    /// Worst-case deviation of coprime-filtered palindromes across residue
    /// classes for every admissible modulus up to x^(theta-eps), plus the
    /// decay fit over a sweep. Exercises the claim that the aggregate error
    /// shrinks like exp(-c sqrt(ln x)) relative to the palindrome count.
    Equidist {
        /// Upper bound (inclusive).
        #[arg(long, required_unless_present = "sweep")]
        max: Option<u64>,
        /// Modulus-cap exponent theta.
        #[arg(long, default_value_t = 0.2)]
        theta: f64,
        /// Exponent safety margin eps.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Comma-separated x values; fits the decay exponent across them.
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<u64>>,
    },
    /// Census of palindromes with at most r prime factors, none below
    /// x^(1/theta_inv); optionally also the remainder sum over levels up to
    /// x^(4/21) and the Mertens grid constant. Exercises the count behind
    /// "infinitely many palindromes with few prime factors" at desk scale.
    Sieve {
        /// Upper bound (inclusive).
        #[arg(long)]
        max: u64,
        /// Cap on the number of prime factors with multiplicity.
        #[arg(long, default_value_t = 6)]
        r: u32,
        /// The smallest-factor threshold is x^(1/theta_inv).
        #[arg(long = "theta-inv", default_value_t = 21)]
        theta_inv: u32,
        /// Also evaluate the remainder and Mertens hypotheses.
        #[arg(long)]
        hypothesis: bool,
    },
    /// Seeded inequality suite: large sieve, Koksma-Hlawka, Vinogradov,
    /// ergodic integral, smooth sums, pairing, Gaussian envelope and
    /// monotonicity of phi, plus ratio reports for Erdos-Turan and Weyl
    /// products. One JSON report per line; exits 1 if an explicit-constant
    /// check fails.
    Lemmas {
        /// Run a single family instead of all of them.
        #[arg(long)]
        only: Option<String>,
        /// Instances per family.
        #[arg(long, default_value_t = 100)]
        instances: u32,
    },
    /// Residue-class error sweep over a geometric range x = 2^a .. 2^c with
    /// the decay fit; the orchestrated form of `equidist --sweep`.
    Sweep {
        /// Smallest exponent a.
        #[arg(long = "min-exp", default_value_t = 7)]
        min_exp: u32,
        /// Largest exponent c.
        #[arg(long = "max-exp", default_value_t = 29)]
        max_exp: u32,
        #[arg(long, default_value_t = 0.2)]
        theta: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
}

/// Parse the process arguments, execute, and map errors to exit codes:
/// 0 success, 1 a checked inequality failed, 2 usage or domain errors.
pub fn run() -> i32 {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // a second pool build in the same process is fine to ignore
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match execute(&cli) {
        Ok((report, code)) => {
            let done = match &cli.out {
                Some(path) => fs::write(path, report).map_err(Error::from),
                None => {
                    print!("{report}");
                    Ok(())
                }
            };
            match done {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value).map_err(|e| Error::domain(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_f64(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    if cli.format == Some(Format::Plain) && !matches!(cli.cmd, Cmd::Enumerate { .. }) {
        return Err(Error::domain(
            "plain format is only available for enumerate; use json or csv",
        ));
    }
    match &cli.cmd {
        Cmd::Enumerate {
            max,
            filter,
            modulus,
        } => enumerate(cli, *max, (*filter).into(), *modulus),
        Cmd::Expsum {
            num,
            den,
            shift_num,
            max,
            prod,
        } => expsum(cli, *num, *den, *shift_num, *max, *prod),
        Cmd::Moments { n, k, farey } => moments(cli, *n, *k, *farey),
        Cmd::Equidist {
            max,
            theta,
            eps,
            sweep,
        } => equidist(cli, *max, *theta, *eps, sweep.as_deref()),
        Cmd::Sieve {
            max,
            r,
            theta_inv,
            hypothesis,
        } => sieve(cli, *max, *r, *theta_inv, *hypothesis),
        Cmd::Lemmas { only, instances } => lemmas(cli, only.as_deref(), *instances),
        Cmd::Sweep {
            min_exp,
            max_exp,
            theta,
            eps,
        } => sweep(cli, *min_exp, *max_exp, *theta, *eps),
    }
}

#[derive(Serialize)]
struct EnumerateReport {
    base: u32,
    max: u64,
    filter: &'static str,
    count: u64,
    values: Option<Vec<u64>>,
    modulus: Option<u64>,
    class_counts: Option<Vec<u64>>,
}

fn filter_name(f: Filter) -> &'static str {
    match f {
        Filter::All => "all",
        Filter::OddDigits => "odd",
        Filter::Star => "star",
    }
}

fn enumerate(cli: &Cli, max: u64, filter: Filter, modulus: Option<u64>) -> Result<(String, i32)> {
    let cfg = PalConfig::new(cli.base, filter)?;
    let mut out = String::new();
    match modulus {
        None => {
            let values: Vec<u64> = PalindromeStream::new(cfg, max).collect();
            match cli.format.unwrap_or(Format::Plain) {
                Format::Plain => {
                    for v in &values {
                        writeln!(out, "{v}").unwrap();
                    }
                }
                Format::Csv => {
                    out.push_str("n\n");
                    for v in &values {
                        writeln!(out, "{v}").unwrap();
                    }
                }
                Format::Json => {
                    out = json_line(&EnumerateReport {
                        base: cli.base,
                        max,
                        filter: filter_name(filter),
                        count: values.len() as u64,
                        values: Some(values),
                        modulus: None,
                        class_counts: None,
                    })?;
                }
            }
        }
        Some(q) => {
            let counts = class_counts(cfg, max, q)?;
            match cli.format.unwrap_or(Format::Plain) {
                Format::Plain | Format::Csv => {
                    if cli.format == Some(Format::Csv) {
                        out.push_str("class,count\n");
                    }
                    for (c, n) in counts.iter().enumerate() {
                        writeln!(out, "{c},{n}").unwrap();
                    }
                }
                Format::Json => {
                    out = json_line(&EnumerateReport {
                        base: cli.base,
                        max,
                        filter: filter_name(filter),
                        count: counts.iter().sum(),
                        values: None,
                        modulus: Some(q),
                        class_counts: Some(counts),
                    })?;
                }
            }
        }
    }
    Ok((out, 0))
}

#[derive(Serialize)]
struct ExpsumReport {
    re: f64,
    im: f64,
    bound: f64,
}

#[derive(Serialize)]
struct ProdReport {
    /// Natural log of the mirror product; null when the product is exactly 0.
    logphi: Option<f64>,
}

fn expsum(
    cli: &Cli,
    num: i64,
    den: u64,
    shift_num: i64,
    max: Option<u64>,
    prod: Option<u32>,
) -> Result<(String, i32)> {
    let b = cli.base as u64;
    let star_mod = b * b * b - b;
    let angle = Angle::new(num, den)?.try_add(&Angle::new(shift_num, star_mod)?)?;
    let out = match (max, prod) {
        (Some(x), None) => {
            let s = pal_exp_sum(cli.base, x, angle)?;
            let bound = decomposition_bound(cli.base, x, angle)?;
            let report = ExpsumReport {
                re: s.re,
                im: s.im,
                bound,
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Csv => format!("re,im,bound\n{},{},{}\n", s.re, s.im, bound),
                _ => json_line(&report)?,
            }
        }
        (None, Some(n)) => {
            let logphi = mirror_product_log(cli.base, n, angle)?.ln();
            match cli.format.unwrap_or(Format::Json) {
                Format::Csv => format!("logphi\n{}\n", csv_f64(logphi)),
                _ => json_line(&ProdReport { logphi })?,
            }
        }
        _ => return Err(Error::domain("pass exactly one of --max or --prod")),
    };
    Ok((out, 0))
}

#[derive(Serialize)]
struct MomentsReport {
    base: u32,
    n: u32,
    k: u32,
    /// Exact moment as a decimal string; it routinely exceeds f64 range.
    moment: String,
    /// Envelope b^(2(K-1)N+2) used to normalize the moment; null if it
    /// overflows f64.
    bound_base: Option<f64>,
    /// Normalized growth rate of the moment against its envelope.
    rho: Option<f64>,
    farey_sum: Option<f64>,
}

fn moments(cli: &Cli, n: u32, k: u32, farey: Option<u64>) -> Result<(String, i32)> {
    let moment = moment_exact(cli.base, n, k)?;
    let exponent = 2.0 * (k as f64 - 1.0) * n as f64 + 2.0;
    let envelope = (cli.base as f64).powf(exponent);
    let bound_base = envelope.is_finite().then_some(envelope);
    let rho = if n >= 2 {
        Some(moment_ratio(cli.base, n, k)?)
    } else {
        None
    };
    let farey_sum = match farey {
        Some(q) => Some(farey_moment_sum(cli.base, n, k, q, Angle::ZERO)?),
        None => None,
    };
    let report = MomentsReport {
        base: cli.base,
        n,
        k,
        moment: moment.to_string(),
        bound_base,
        rho,
        farey_sum,
    };
    let out = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => format!(
            "base,n,k,moment,bound_base,rho,farey_sum\n{},{},{},{},{},{},{}\n",
            report.base,
            report.n,
            report.k,
            report.moment,
            csv_f64(report.bound_base),
            csv_f64(report.rho),
            csv_f64(report.farey_sum),
        ),
        _ => json_line(&report)?,
    };
    Ok((out, 0))
}

#[derive(Serialize)]
struct EquidistRow {
    q: u64,
    err: f64,
}

#[derive(Serialize)]
struct SweepRow {
    x: u64,
    stars: u64,
    aggregate: f64,
}

#[derive(Serialize)]
struct EquidistReport {
    base: u32,
    theta: f64,
    eps: f64,
    x: Option<u64>,
    rows: Vec<EquidistRow>,
    aggregate: Option<f64>,
    total_pal: Option<u64>,
    sweep: Vec<SweepRow>,
    sigma_hat: Option<f64>,
}

fn sweep_rows(base: u32, xs: &[u64], theta: f64, eps: f64) -> Result<Vec<SweepRow>> {
    xs.par_iter()
        .map(|&x| {
            Ok(SweepRow {
                x,
                stars: star_count(base, x)?,
                aggregate: error_table(base, x, theta, eps)?.aggregate(),
            })
        })
        .collect()
}

fn equidist(
    cli: &Cli,
    max: Option<u64>,
    theta: f64,
    eps: f64,
    sweep: Option<&[u64]>,
) -> Result<(String, i32)> {
    let mut report = EquidistReport {
        base: cli.base,
        theta,
        eps,
        x: max,
        rows: Vec::new(),
        aggregate: None,
        total_pal: None,
        sweep: Vec::new(),
        sigma_hat: None,
    };
    if let Some(x) = max {
        let table = error_table(cli.base, x, theta, eps)?;
        report.aggregate = Some(table.aggregate());
        report.total_pal = Some(star_count(cli.base, x)?);
        report.rows = table
            .rows
            .iter()
            .map(|&(q, err)| EquidistRow { q, err })
            .collect();
    }
    if let Some(xs) = sweep {
        report.sweep = sweep_rows(cli.base, xs, theta, eps)?;
        report.sigma_hat = Some(fit_decay(cli.base, xs, theta, eps)?);
    }
    let out = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::new();
            if sweep.is_some() {
                s.push_str("x,stars,aggregate\n");
                for row in &report.sweep {
                    writeln!(s, "{},{},{}", row.x, row.stars, row.aggregate).unwrap();
                }
            } else {
                s.push_str("q,err\n");
                for row in &report.rows {
                    writeln!(s, "{},{}", row.q, row.err).unwrap();
                }
            }
            s
        }
        _ => json_line(&report)?,
    };
    Ok((out, 0))
}

fn sieve(cli: &Cli, max: u64, r: u32, theta_inv: u32, hypothesis: bool) -> Result<(String, i32)> {
    let want_csv = cli.format.unwrap_or(Format::Json) == Format::Csv;
    let mut rows = String::new();
    if want_csv {
        rows.push_str("n,omega,pminus,qualifies\n");
    }
    let mut report = census_with(cli.base, max, r, theta_inv, |n, f, ok| {
        if want_csv {
            writeln!(rows, "{n},{},{},{ok}", f.omega(), f.p_min().unwrap_or(0)).unwrap();
        }
    })?;
    if hypothesis {
        let (remainder, mertens) = hypothesis_check(cli.base, max)?;
        report.remainder_sum = Some(remainder);
        report.mertens_k = Some(mertens);
    }
    let out = if want_csv { rows } else { json_line(&report)? };
    Ok((out, 0))
}

fn lemmas(cli: &Cli, only: Option<&str>, instances: u32) -> Result<(String, i32)> {
    let reports = run_suite(cli.seed, instances, only)?;
    let failed_explicit = reports
        .iter()
        .any(|r| r.threshold.is_none() && !r.passed);
    let mut out = String::new();
    match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            out.push_str("lemma,digest,lhs,rhs,passed,ratio,threshold\n");
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.lemma,
                    r.digest,
                    r.lhs,
                    r.rhs,
                    r.passed,
                    csv_f64(r.ratio),
                    csv_f64(r.threshold),
                )
                .unwrap();
            }
        }
        _ => {
            for r in &reports {
                out.push_str(&json_line(r)?);
            }
        }
    }
    Ok((out, if failed_explicit { 1 } else { 0 }))
}

#[derive(Serialize)]
struct SweepReport {
    base: u32,
    theta: f64,
    eps: f64,
    rows: Vec<SweepRow>,
    sigma_hat: f64,
}

fn sweep(cli: &Cli, min_exp: u32, max_exp: u32, theta: f64, eps: f64) -> Result<(String, i32)> {
    if min_exp >= max_exp || max_exp >= 64 {
        return Err(Error::domain("need min-exp < max-exp < 64"));
    }
    let xs: Vec<u64> = (min_exp..=max_exp).map(|e| 1u64 << e).collect();
    let rows = sweep_rows(cli.base, &xs, theta, eps)?;
    let sigma_hat = fit_decay(cli.base, &xs, theta, eps)?;
    let report = SweepReport {
        base: cli.base,
        theta,
        eps,
        rows,
        sigma_hat,
    };
    let out = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("x,stars,aggregate\n");
            for row in &report.rows {
                writeln!(s, "{},{},{}", row.x, row.stars, row.aggregate).unwrap();
            }
            s
        }
        _ => json_line(&report)?,
    };
    Ok((out, 0))
}
