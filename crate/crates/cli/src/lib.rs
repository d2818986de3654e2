//! Command-line front end for `hypersplit`: every computation as a
//! subcommand, emitting one JSON output record per run or CSV rows.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 resource cap exceeded.

#![allow(clippy::needless_range_loop)]

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod formats;
pub mod output;
pub mod parallel;
pub mod verify;

use output::Format;
use verify::Suite;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hypersplit",
    version,
    about = "Exact counts of hypercube decompositions"
)]
pub struct Cli {
    /// Output as JSON lines or CSV rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 1 forces the sequential reference path.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Lift the resource caps on input sizes.
    #[arg(long, global = true)]
    pub allow_large: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Moebius values mu_d(n) for n in A..B.
    Mu {
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, value_parser = parse_range)]
        n: Span,
    },
    /// Coefficients of a counting series.
    Seq {
        kind: SeqKind,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        max_n: usize,
    },
    /// Decompositions with a given gcd vector, by region count.
    Refined {
        #[arg(long)]
        d: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u64>,
        #[arg(long)]
        max_n: usize,
    },
    /// Exhaustive enumeration in canonical order.
    Enum {
        kind: EnumKind,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        n: usize,
        /// Write every object as a JSON line to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Map a one-dimensional decomposition (JSON file) to its covering system.
    Phi {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Map a labelled tree (text or JSON file) to its decomposition.
    Psi {
        #[arg(long = "in")]
        input: PathBuf,
        /// Dimension; defaults to the largest label.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Saddle points and growth rates for d in D1..D2.
    Growth {
        #[arg(long, value_parser = parse_range)]
        d: Span,
        #[arg(long, default_value_t = hypersplit::asymptotics::DEFAULT_TOL)]
        tol: f64,
    },
    /// Decompositions refined by the grid r (g) or with lcm exactly r (h).
    LcmCount {
        kind: LcmKind,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        r: Vec<u64>,
    },
    /// Run a verification suite; exits 2 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeqKind {
    /// Decomposition counts s_d(n), n >= 1.
    Sd,
    /// Auxiliary counts a_d(n), n >= 0.
    Ad,
    /// Labelled tree counts t_d(n), n >= 1.
    Td,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumKind {
    Decomp,
    Necs,
    Trees,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LcmKind {
    G,
    H,
}

/// An inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: u64,
    pub end: u64,
}

/// `A..B` or `A..=B` (both inclusive), or a single `A`.
fn parse_range(s: &str) -> Result<Span, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("not an integer: {t:?}"))
    };
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => (num(s)?, num(s)?),
    };
    if start > end {
        return Err(format!("empty range {s}"));
    }
    Ok(Span { start, end })
}

/// An input exceeded a size limit that `--allow-large` lifts.
#[derive(Debug)]
pub struct ResourceCap(pub String);

impl fmt::Display for ResourceCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "resource cap exceeded: {} (pass --allow-large to override)",
            self.0
        )
    }
}

impl std::error::Error for ResourceCap {}

/// What a command produced, beyond its output record.
pub enum Status {
    Ok,
    VerificationFailed,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = if e.use_stderr() {
                e.render().to_string()
            } else {
                e.to_string()
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) if cli.threads != Some(0) => pool,
        _ => {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
    };
    let result = pool
        .install(|| commands::execute(&cli))
        .and_then(|(record, status)| record.write(cli.format, out).map(|()| status));
    match result {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::VerificationFailed) => EXIT_VERIFY,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<ResourceCap>().is_some() {
                EXIT_CAP
            } else {
                EXIT_USAGE
            }
        }
    }
}
