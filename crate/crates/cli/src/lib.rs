//! Argument types, command runners and the report format behind `liekv`.

pub mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liekv::concrete_lie::BUNDLED;

#[derive(Parser, Debug)]
#[command(
    name = "liekv",
    version,
    about = "Campbell-Hausdorff series and Kashiwara-Vergne checks"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print Z(X, Y) = log(e^X e^Y) on the Lyndon basis.
    Bch {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=16))]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = BchMethod::Dynkin)]
        method: BchMethod,
    },
    /// Build (F⁰, G⁰) and run a symbolic check.
    Kv {
        #[arg(long, value_enum)]
        check: KvCheck,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=12))]
        max_degree: u32,
    },
    /// Finite-difference and matrix-function checks on a concrete algebra.
    Numeric {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_enum)]
        check: NumericCheck,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative error tolerance; defaults depend on the check.
        #[arg(long)]
        tol: Option<f64>,
        /// Truncation degree of the series; defaults depend on the check.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        max_degree: Option<u32>,
    },
    /// Enveloping algebra checks: Duflo multiplicativity, star associativity.
    Duflo {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_enum)]
        check: DufloCheck,
        /// Highest degree of invariant polynomials used for multiplicativity.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=6))]
        invariant_degree: u32,
        /// Number of random triples for star-assoc.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct AlgebraArgs {
    /// A bundled algebra.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUNDLED))]
    pub algebra: Option<String>,
    /// Structure constants file: a line `d`, then lines `i j k p/q`.
    #[arg(long)]
    pub algebra_file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BchMethod {
    Dynkin,
    Log,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KvCheck {
    F0,
    Eq7,
    Eq8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NumericCheck {
    Eq10,
    Eq11,
    Eq19,
    Density,
    Jq,
    /// exp(ad Z) = exp(ad X) exp(ad Y)
    Exp,
    /// Universal trace residual against numeric traces, degree by degree.
    Bridge,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DufloCheck {
    Multiplicativity,
    StarAssoc,
}
