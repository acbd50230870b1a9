//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sumlab_core::identities::NChoice;

use crate::{default_n_grid, Command, Family, Format, ModulusRange, RunConfig, WORKERS_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "sumlab",
    version,
    about = "Exponential and character sum identity checker"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,

    /// Output format (default: text for `sum`, json otherwise)
    #[arg(long, value_enum, global = true)]
    pub format: Option<FormatArg>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Kloosterman,
    TwoTerm,
    Twisted,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Smallest modulus
    #[arg(long, visible_alias = "qmin", default_value_t = 3)]
    pub pmin: u64,
    /// Largest modulus
    #[arg(long, visible_alias = "qmax", default_value_t = 199)]
    pub pmax: u64,
    /// A single modulus (overrides the range)
    #[arg(long)]
    pub q: Option<u64>,
}

impl RangeArgs {
    fn range(&self) -> ModulusRange {
        match self.q {
            Some(q) => ModulusRange::single(q),
            None => ModulusRange::new(self.pmin, self.pmax),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Sweep one identity
    Verify {
        #[arg(long)]
        identity: String,
        #[command(flatten)]
        range: RangeArgs,
        /// Values of the free unit n: integers or `next-unit`
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_n)]
        n: Vec<NChoice>,
    },
    /// Sweep every registered identity
    VerifyAll {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_n)]
        n: Vec<NChoice>,
    },
    /// Compare the cubic power mean with its Catalan main term
    Conjecture {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Look for polynomial pairs with a constant character-sum difference
    Search {
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        coeff_bound: i64,
        /// Evidence primes are the odd primes in [pmin, pmax]
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Evaluate one sum
    Sum {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        m: i64,
        #[arg(long, allow_negative_numbers = true, value_parser = parse_n, default_value = "1")]
        n: NChoice,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        q: u64,
    },
}

pub fn parse_n(s: &str) -> Result<NChoice, String> {
    match s.trim() {
        "next-unit" => Ok(NChoice::SmallestUnitAboveOne),
        t => t
            .parse()
            .map(NChoice::Value)
            .map_err(|_| format!("expected an integer or `next-unit`, got `{t}`")),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let grid = |n: Vec<NChoice>| if n.is_empty() { default_n_grid() } else { n };
        let command = match self.command {
            CliCommand::Verify { identity, range, n } => Command::Verify {
                identity,
                range: range.range(),
                n: grid(n),
            },
            CliCommand::VerifyAll { range, n } => Command::VerifyAll {
                range: range.range(),
                n: grid(n),
            },
            CliCommand::Conjecture { k, range } => Command::Conjecture {
                k,
                range: range.range(),
            },
            CliCommand::Search {
                max_degree,
                coeff_bound,
                range,
            } => Command::Search {
                max_degree,
                coeff_bound,
                range: range.range(),
            },
            CliCommand::Sum { family, m, n, k, q } => Command::Sum {
                family: match family {
                    FamilyArg::Kloosterman => Family::Kloosterman,
                    FamilyArg::TwoTerm => Family::TwoTerm,
                    FamilyArg::Twisted => Family::Twisted,
                },
                m,
                n,
                k,
                q,
            },
        };
        let format = match (self.format, &command) {
            (Some(FormatArg::Json), _) => Format::Json,
            (Some(FormatArg::Csv), _) => Format::Csv,
            (Some(FormatArg::Text), _) | (None, Command::Sum { .. }) => Format::Text,
            (None, _) => Format::Json,
        };
        RunConfig {
            command,
            format,
            output: self.output,
            workers: self.workers.unwrap_or_else(default_workers),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        Cli::try_parse_from(args).unwrap().into_config()
    }

    #[test]
    fn n_list() {
        let c = parse(&[
            "sumlab",
            "verify",
            "--identity",
            "salie_4th",
            "--n",
            "1,next-unit,-1",
        ]);
        match c.command {
            Command::Verify { n, .. } => assert_eq!(
                n,
                vec![
                    NChoice::Value(1),
                    NChoice::SmallestUnitAboveOne,
                    NChoice::Value(-1)
                ]
            ),
            other => panic!("{other:?}"),
        }
        assert!(parse_n("x").is_err());
    }

    #[test]
    fn format_defaults() {
        let c = parse(&["sumlab", "sum", "--family", "kloosterman", "--q", "5"]);
        assert_eq!(c.format, Format::Text);
        let c = parse(&["sumlab", "conjecture", "--k", "3"]);
        assert_eq!(c.format, Format::Json);
        let c = parse(&["sumlab", "search", "--format", "csv", "--workers", "3"]);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.workers, 3);
    }

    #[test]
    fn single_modulus() {
        let c = parse(&[
            "sumlab",
            "verify",
            "--identity",
            "zhang_composite_4th",
            "--q",
            "4",
        ]);
        match c.command {
            Command::Verify { range, .. } => assert_eq!(range, ModulusRange::single(4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_required_flag() {
        assert!(Cli::try_parse_from(["sumlab", "verify"]).is_err());
        assert!(Cli::try_parse_from(["sumlab", "sum", "--family", "nope", "--q", "5"]).is_err());
    }
}
