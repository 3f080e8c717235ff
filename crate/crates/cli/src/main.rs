use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use endogrow::cli::{self, Flags, Format, Outcome, Suite};
use endogrow::par::Execution;
use endogrow::spec::LengthModeSpec;

/// Growth rates of group endomorphisms.
#[derive(Parser)]
#[command(name = "endogrow", version)]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// K_m table with the root, infimum and ratio columns.
    Estimate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long, value_enum)]
        length_mode: Option<Mode>,
        /// Ball radius for the bfs length mode.
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Exact growth rate from the spectral radius (abelian groups).
    Spectral {
        #[command(flatten)]
        common: Common,
    },
    /// Ball sizes |B(n)| of the Cayley graph.
    Ball {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Distortion of the base in a semidirect product.
    Distortion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// Run the law suite.
    Verify {
        /// `default` or a path to a suite file.
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: OutFormat,
    },
}

#[derive(Args)]
struct Common {
    /// Instance spec file, or `-` for stdin.
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "tsv")]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Quasi,
    Bfs,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Tsv => Format::Tsv,
            OutFormat::Json => Format::Json,
        }
    }
}

impl From<Mode> for LengthModeSpec {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => LengthModeSpec::Exact,
            Mode::Quasi => LengthModeSpec::Quasi,
            Mode::Bfs => LengthModeSpec::Bfs,
        }
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_INPUT as u8 } else { 0 });
        }
    };
    let execution = if args.sequential { Execution::Sequential } else { Execution::default() };
    let flags = |common: &Common| Flags { format: common.format.into(), execution, ..Flags::default() };
    let outcome: Outcome = match args.command {
        Command::Estimate { common, max_m, length_mode, radius } => cli::cmd_estimate(
            &common.spec,
            &Flags { max_m, radius, length_mode: length_mode.map(Into::into), ..flags(&common) },
        ),
        Command::Spectral { common } => cli::cmd_spectral(&common.spec, &flags(&common)),
        Command::Ball { common, radius } => cli::cmd_ball(&common.spec, &Flags { radius, ..flags(&common) }),
        Command::Distortion { common, radius, max_m } => {
            cli::cmd_distortion(&common.spec, &Flags { radius, max_m, ..flags(&common) })
        }
        Command::Verify { suite, seed, format } => {
            let suite = if suite == "default" { Suite::Default } else { Suite::File(suite.into()) };
            cli::cmd_verify(&suite, seed, format.into(), execution)
        }
    };
    let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
