use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{Failure, Output};

/// Exact construction and checking of separating invariants for the basic
/// actions of the additive group.
#[derive(Parser)]
#[command(name = "sepinv", version)]
struct Cli {
    /// Index n of the ring R_n = Q[x0..xn].
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Seed for commands that sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Human-readable output instead of canonical JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the separating set E_n.
    Gen,
    /// Run the symbolic checks on E_n.
    Verify,
    /// Decide whether E_n separates two points.
    Separate {
        /// First point as a JSON array, e.g. '[1, "-3/2", 0]'.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Second point as a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Decide whether two points lie in the same orbit.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Check the alternating binomial sum and its WZ certificate.
    Wz {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = WzMode::All)]
        mode: WzMode,
    },
    /// Basis of the degree-d invariants of R_n by nullspace computation.
    Kernel {
        #[arg(long)]
        d: u32,
        /// Also write the basis JSON to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Sizes of E_n against the reference table.
    Table {
        #[arg(long, default_value_t = 20)]
        max: usize,
    },
    /// Cross-check E_n against the kernel oracle on sampled point pairs.
    Validate {
        /// Largest oracle degree; defaults to 6, 6, 5, 4 for n = 2..5 and 3 beyond.
        #[arg(long)]
        dmax: Option<u32>,
        /// Pairs per sampling strategy.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Compare eps_{s_m}(x_j) with the semitransvectant [x0, f_m^j]^(j).
    Explore {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WzMode {
    Sum,
    Pair,
    Recurrence,
    All,
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let n = || cli.n.ok_or_else(|| Failure::Usage("--n is required for this command".into()));
    match &cli.command {
        Command::Gen => commands::gen(n()?),
        Command::Verify => commands::verify(n()?),
        Command::Separate { v, w } => commands::separate(n()?, v, w),
        Command::Orbit { v, w } => commands::orbit(n()?, v, w),
        Command::Wz { p, mode } => commands::wz(*p, *mode),
        Command::Kernel { d, dump } => commands::kernel(n()?, *d, dump.as_deref()),
        Command::Table { max } => commands::table(*max),
        Command::Validate { dmax, trials } => commands::validate(n()?, *dmax, *trials, cli.seed),
        Command::Explore { m, j } => commands::explore(n()?, *m, *j),
    }
}

fn emit(cli: &Cli, output: &Output) -> io::Result<()> {
    let text = if cli.pretty { &output.pretty } else { &output.json };
    match &cli.out {
        Some(path) => fs::write(path, format!("{text}\n")),
        None => writeln!(io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(output) => output,
        Err(failure) => {
            eprintln!("error: {failure}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &output) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
