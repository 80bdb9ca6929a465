//! The `tomofix` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use tomofix_core::Error;

pub mod commands;
pub mod golden;
pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tomofix", version, about = "Fixed points of window-sum operators on 2-D arrays")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print arrays as text grids.
    #[arg(long, global = true)]
    pub grid: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Write a run manifest (parameters, timing, output digest) to this path.
    #[arg(long, global = true)]
    pub manifest: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Zero locus of the characteristic polynomial of S(n)* on the torus.
    ZeroLocus {
        #[arg(long)]
        n: u32,
        /// Also compare against exhaustive enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Rational basis of the bounded fixed arrays of S(n).
    BoundedBasis {
        #[arg(long)]
        n: u32,
    },
    /// Polynomial solutions at one zero of S(n)*.
    Poly {
        #[arg(long)]
        n: u32,
        /// Index into the zero locus.
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Degree bound N.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Side of the square region used for --grid.
        #[arg(long, default_value_t = 8)]
        size: usize,
    },
    /// Fixed arrays of S(n) on the p-torus over F_p.
    Modp {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: u32,
        /// Kernel dimension and determinant for every n = 2..p-1.
        #[arg(long)]
        sweep: bool,
    },
    /// Balanced zero-sum arrays with values in Z/n^2.
    Balanced(BalancedArgs),
    /// Seeded randomized invariant suites.
    Verify {
        /// Cases per ring in the linearity suites.
        #[arg(long, default_value_t = 500)]
        ring_cases: usize,
        /// Random expression trees for the cyclotomic zero test.
        #[arg(long, default_value_t = 1000)]
        tree_cases: usize,
    },
    /// Run every golden check and print a pass/fail table.
    ReproducePaper,
}

#[derive(Args, Debug)]
pub struct BalancedArgs {
    /// Torus size for --search (only 3 is supported).
    #[arg(long)]
    pub n: Option<usize>,
    /// Enumerate all balanced zero-sum arrays for S(2)* on T_3.
    #[arg(long)]
    pub search: bool,
    /// Build and certify f_n.
    #[arg(long = "fn", value_name = "N")]
    pub fn_n: Option<usize>,
    /// Budgeted search on T_n for composite n.
    #[arg(long, value_name = "N")]
    pub probe: Option<usize>,
    /// Window size k for S(k)* in --probe and --certificate.
    #[arg(long)]
    pub k: Option<u32>,
    /// Nonexistence certificate on T_p.
    #[arg(long, value_name = "P")]
    pub certificate: Option<u32>,
    /// Dihedral action on the T_3 solutions.
    #[arg(long)]
    pub group: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    /// Output was produced but an asserted identity failed.
    pub fn failed(stdout: String, why: impl Into<String>) -> Self {
        Outcome { code: EXIT_VERIFY, stdout, stderr: why.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }

    pub fn from_error(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::IncompatibleDims(_) | Error::UnsupportedWindow => {
                Outcome::usage(format!("tomofix: {e}\n"))
            }
            _ => Outcome::failed(String::new(), format!("tomofix: {e}\n")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Vec<String>,
    pub exact_arithmetic: bool,
    pub exit_code: i32,
    pub elapsed_ms: u128,
    /// SHA-256 of stdout.
    pub digest: String,
}

pub fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> (Outcome, Option<RunManifest>, Option<std::path::PathBuf>)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    (Outcome::ok(rendered), None, None)
                }
                _ => (Outcome::usage(rendered), None, None),
            };
        }
    };
    let start = Instant::now();
    let outcome = match cli.global.threads {
        Some(0) => Outcome::usage("tomofix: --threads must be at least 1\n"),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli)),
            Err(e) => Outcome::usage(format!("tomofix: cannot start {k} threads: {e}\n")),
        },
        None => commands::dispatch(&cli),
    };
    let manifest = RunManifest {
        subcommand: commands::name(&cli.command).to_string(),
        parameters: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        exact_arithmetic: true,
        exit_code: outcome.code,
        elapsed_ms: start.elapsed().as_millis(),
        digest: digest(&outcome.stdout),
    };
    (outcome, Some(manifest), cli.global.manifest.clone())
}
