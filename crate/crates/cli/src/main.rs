//! `tiltwall`: exact tilt-stability wall computations from a TOML config.
//!
//! Exit codes: 0 success, 2 usage error, 3 precondition violation,
//! 4 malformed or inconsistent input.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tiltwall_core::{parse_rational, Charge, ErrorKind, Rational};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tiltwall_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 4,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Precondition => 3,
                ErrorKind::Input => 4,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tiltwall",
    version,
    about = "Exact tilt-stability walls and D4-D2-D0 bookkeeping"
)]
pub struct Cli {
    /// Render exact outputs as fixed-point decimals with this many digits.
    #[arg(long, global = true, value_name = "P")]
    pub decimal: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// TOML run configuration.
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Candidate walls for v(n) and the filters that eliminate them.
    FirstWall {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Scan candidates in (1/k)Z.
        #[arg(long, value_name = "K")]
        denominator: Option<u64>,
    },
    /// Smallest n from which the first wall is unique up to n_max.
    MinN {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_name = "K")]
        denominator: Option<u64>,
    },
    /// The numerical wall between two charges.
    Wall {
        #[command(flatten)]
        cfg: ConfigArg,
        /// First charge as "ch0,ch1.H^2,ch2.H,ch3".
        #[arg(long, value_parser = parse_charge, allow_hyphen_values = true)]
        u: Charge,
        /// Second charge as "ch0,ch1.H^2,ch2.H,ch3".
        #[arg(long, value_parser = parse_charge, allow_hyphen_values = true)]
        v: Charge,
    },
    /// Bogomolov-Gieseker inequality for a charge at (b, w).
    BgCheck {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, value_parser = parse_charge, allow_hyphen_values = true)]
        charge: Charge,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        w: Rational,
    },
    /// Membership of (b, w) in the quintic Li region.
    LiRegion {
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        w: Rational,
    },
    /// chi(v(n)), or the Euler characteristic of an explicit charge.
    Chi {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, value_parser = parse_charge, allow_hyphen_values = true)]
        charge: Option<Charge>,
    },
    /// The multiplicity e_n.
    En {
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// D4-D2-D0 count from a curve-count value.
    Dt {
        #[command(flatten)]
        cfg: ConfigArg,
        /// The curve-counting invariant I at the configured charge.
        #[arg(long, allow_hyphen_values = true)]
        i_value: i64,
    },
    /// Toda's sum compared with e_n * I at (betaH, m) and (betaH, -m).
    Toda {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Table of I invariants (TOML or JSON).
        #[arg(long, value_name = "FILE")]
        i_table: PathBuf,
        /// Table of P invariants (TOML or JSON).
        #[arg(long, value_name = "FILE")]
        p_table: PathBuf,
    },
    /// The twist-invariant combination m-hat.
    Mhat {
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// The charge after tensoring by O(a).
    Twist {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// Goettsche series for one Noether-Lefschetz discriminant.
    Goettsche {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        d: Rational,
        #[arg(long)]
        order: Option<u64>,
    },
    /// Vector-valued series assembled from Noether-Lefschetz numbers.
    NlSeries {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, value_name = "FILE")]
        nl_table: PathBuf,
        #[arg(long)]
        order: Option<u64>,
    },
    /// T-transformation support check of the assembled series.
    TCheck {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, value_name = "FILE")]
        nl_table: PathBuf,
        #[arg(long)]
        order: Option<u64>,
    },
    /// S-matrix of Z/N, from --modulus or from n*H^3 of the config.
    SMatrix {
        #[arg(
            long,
            value_name = "FILE",
            conflicts_with = "modulus",
            required_unless_present = "modulus"
        )]
        config: Option<PathBuf>,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// SVG diagram of the (b, w)-plane with the surviving walls.
    Plot {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// "b_min,b_max,w_min,w_max"; fitted to the scene when absent.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
    },
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_list(s: &str, len: usize) -> Result<Vec<Rational>, String> {
    let parts: Vec<_> = s.split(',').map(parse_rat).collect::<Result<_, _>>()?;
    if parts.len() != len {
        return Err(format!(
            "expected {len} comma-separated values, got {}",
            parts.len()
        ));
    }
    Ok(parts)
}

fn parse_charge(s: &str) -> Result<Charge, String> {
    let mut v = parse_list(s, 4)?.into_iter();
    let mut next = || v.next().expect("length checked");
    Ok(Charge::new(next(), next(), next(), next()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tiltwall: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
