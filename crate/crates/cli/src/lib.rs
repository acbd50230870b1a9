//! Command dispatch, worker pool and exit-code policy for the `sumlab` binary.
//!
//! Exit codes: 0 all checks passed, 1 some check failed, 2 usage error,
//! 3 a power mean missed the integrality tolerance (takes precedence over 1).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;
use sumlab_core::arith::{self, Modulus};
use sumlab_core::conjecture::conjecture_report;
use sumlab_core::exp_sums::{kloosterman, twisted_sum, two_term_sum};
use sumlab_core::identities::{NChoice, Registry};
use sumlab_core::report::{emit_csv, emit_json, emit_text, Report, Value};
use sumlab_core::search::search_constant_pairs;

pub mod args;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable that overrides the worker count.
pub const WORKERS_ENV: &str = "SUMLAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Kloosterman,
    TwoTerm,
    Twisted,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Kloosterman => "kloosterman",
            Family::TwoTerm => "two-term",
            Family::Twisted => "twisted",
        }
    }
}

/// Inclusive modulus range; `explicit` marks a single `--q` value, which is
/// evaluated even when it is not prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusRange {
    pub lo: u64,
    pub hi: u64,
    pub explicit: bool,
}

impl ModulusRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self {
            lo,
            hi,
            explicit: false,
        }
    }

    pub fn single(q: u64) -> Self {
        Self {
            lo: q,
            hi: q,
            explicit: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Verify {
        identity: String,
        range: ModulusRange,
        n: Vec<NChoice>,
    },
    VerifyAll {
        range: ModulusRange,
        n: Vec<NChoice>,
    },
    Conjecture {
        k: u32,
        range: ModulusRange,
    },
    Search {
        max_degree: usize,
        coeff_bound: i64,
        range: ModulusRange,
    },
    Sum {
        family: Family,
        m: i64,
        n: NChoice,
        k: u32,
        q: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::VerifyAll { .. } => "verify-all",
            Command::Conjecture { .. } => "conjecture",
            Command::Search { .. } => "search",
            Command::Sum { .. } => "sum",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub workers: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sumlab_core::Error> for CliError {
    fn from(e: sumlab_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn n_choice_label(n: NChoice) -> String {
    match n {
        NChoice::Value(v) => v.to_string(),
        NChoice::SmallestUnitAboveOne => "next-unit".into(),
    }
}

/// Default grid for identities with a free unit: `1`, the smallest unit
/// above 1, and `q - 1`.
pub fn default_n_grid() -> Vec<NChoice> {
    vec![
        NChoice::Value(1),
        NChoice::SmallestUnitAboveOne,
        NChoice::Value(-1),
    ]
}

fn validate(config: &RunConfig) -> Result<(), CliError> {
    if config.workers == 0 {
        return Err(CliError::Usage("worker count must be at least 1".into()));
    }
    let range = match &config.command {
        Command::Verify { range, .. }
        | Command::VerifyAll { range, .. }
        | Command::Conjecture { range, .. }
        | Command::Search { range, .. } => Some(range),
        Command::Sum { q, .. } if *q == 0 => {
            return Err(CliError::Usage("--q must be positive".into()));
        }
        Command::Sum { .. } => None,
    };
    if let Some(r) = range {
        if r.lo > r.hi {
            return Err(CliError::Usage(format!("empty range [{}, {}]", r.lo, r.hi)));
        }
        if r.lo == 0 {
            return Err(CliError::Usage("moduli start at 1".into()));
        }
    }
    Ok(())
}

fn range_echo(range: &ModulusRange) -> Vec<(String, Value)> {
    if range.explicit {
        vec![("q".into(), range.lo.into())]
    } else {
        vec![
            ("min".into(), range.lo.into()),
            ("max".into(), range.hi.into()),
        ]
    }
}

fn n_echo(n: &[NChoice]) -> Value {
    Value::Array(n.iter().map(|&c| n_choice_label(c).into()).collect())
}

/// Builds the report for `command` against `registry`. The worker count is
/// deliberately absent from the echoed configuration.
pub fn build_report(command: &Command, registry: &Registry) -> Result<Report, CliError> {
    match command {
        Command::Verify { identity, range, n } => {
            let descriptor = registry.descriptor(identity)?;
            let sweep = if range.explicit {
                registry.sweep_moduli(identity, &[range.lo], n)?
            } else {
                registry.sweep(identity, range.lo, range.hi, n)?
            };
            let mut echo = vec![("identity".to_string(), identity.as_str().into())];
            echo.extend(range_echo(range));
            echo.push(("n".into(), n_echo(n)));
            Ok(Report::verify("verify", echo, &[(descriptor, sweep)]))
        }
        Command::VerifyAll { range, n } => {
            let mut sweeps = Vec::new();
            for descriptor in registry.list() {
                let sweep = if range.explicit {
                    registry.sweep_moduli(descriptor.id, &[range.lo], n)?
                } else {
                    registry.sweep(descriptor.id, range.lo, range.hi, n)?
                };
                sweeps.push((descriptor, sweep));
            }
            let mut echo = range_echo(range);
            echo.push(("n".into(), n_echo(n)));
            Ok(Report::verify("verify-all", echo, &sweeps))
        }
        Command::Conjecture { k, range } => {
            let conj = conjecture_report(*k, range.lo, range.hi)?;
            let mut echo = vec![("k".to_string(), (*k).into())];
            echo.extend(range_echo(range));
            Ok(Report::conjecture(echo, &conj))
        }
        Command::Search {
            max_degree,
            coeff_bound,
            range,
        } => {
            let primes = arith::odd_primes_in_range(range.lo, range.hi);
            let search = search_constant_pairs(*max_degree, *coeff_bound, &primes)?;
            let mut echo = vec![
                ("max_degree".to_string(), (*max_degree).into()),
                ("coeff_bound".to_string(), (*coeff_bound).into()),
            ];
            echo.extend(range_echo(range));
            Ok(Report::search(echo, &search))
        }
        Command::Sum { family, m, n, k, q } => {
            let modulus = Modulus::new(*q)?;
            let n_val = n
                .resolve(*q)
                .ok_or_else(|| CliError::Usage(format!("no unit above 1 modulo {q}")))?;
            let (value, n_out, k_out): (Complex64, Option<i64>, Option<u32>) = match family {
                Family::Kloosterman => (kloosterman(*m, n_val, &modulus), Some(n_val), None),
                Family::TwoTerm => {
                    if *k == 0 {
                        return Err(CliError::Usage("--k must be at least 1".into()));
                    }
                    (two_term_sum(*m, n_val, *k, &modulus), Some(n_val), Some(*k))
                }
                Family::Twisted => (twisted_sum(*m, *k, *q)?, None, Some(*k)),
            };
            let mut echo = vec![
                ("family".to_string(), family.name().into()),
                ("q".to_string(), (*q).into()),
                ("m".to_string(), (*m).into()),
            ];
            if let Some(n) = n_out {
                echo.push(("n".into(), n.into()));
            }
            if let Some(k) = k_out {
                echo.push(("k".into(), k.into()));
            }
            Ok(Report::sum(
                echo,
                family.name(),
                *q,
                *m,
                n_out,
                k_out,
                value,
            ))
        }
    }
}

/// Exit code implied by a finished report.
pub fn exit_code(report: &Report) -> i32 {
    if report.summary.numeric_failures > 0 {
        EXIT_NUMERIC
    } else if report.summary.fail > 0 {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

pub fn render(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => emit_json(report),
        Format::Csv => emit_csv(report),
        Format::Text => emit_text(report),
    }
}

/// Runs `config` on a dedicated pool and returns the rendered bytes and exit code.
pub fn execute(config: &RunConfig, registry: &Registry) -> Result<(Vec<u8>, i32), CliError> {
    validate(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let report = pool.install(|| build_report(&config.command, registry))?;
    let s = &report.summary;
    eprintln!(
        "sumlab {}: {} pass, {} fail, {} skip, max residual {:e}",
        report.command, s.pass, s.fail, s.skip, s.max_residual
    );
    Ok((render(&report, config.format), exit_code(&report)))
}

pub fn run(config: &RunConfig) -> i32 {
    run_with_registry(config, &Registry::standard())
}

pub fn run_with_registry(config: &RunConfig, registry: &Registry) -> i32 {
    let (bytes, code) = match execute(config, registry) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("sumlab: {e}");
            return match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Io(_) => EXIT_FAIL,
            };
        }
    };
    let written = match &config.output {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("sumlab: cannot write output: {e}");
        return EXIT_FAIL;
    }
    code
}
