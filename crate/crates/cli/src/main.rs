use std::io::{Read, Write};
use std::process::ExitCode;

use clap::builder::TypedValueParser as _;
use clap::{Parser, Subcommand};

use mseg::{EnumConfig, Error};

mod commands;

use commands::{CmdError, Format};

/// Multi-segment calculus for GL_n: duality, order, traces, Arthur type.
///
/// Inputs are given as arguments; `-` reads the input from stdin.
#[derive(Parser, Debug)]
#[command(name = "mseg", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Maximum number of support points per translation class to enumerate.
    #[arg(long, global = true, env = "MSEG_BOUND", default_value_t = mseg::order::DEFAULT_BOUND,
          value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    bound: usize,

    /// Check candidates in parallel (output is unchanged).
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the dual multi-segment.
    Dual { input: String },
    /// Decide whether B is reachable from A by elementary operations.
    Ge {
        a: String,
        b: String,
        /// Print a chain of single operations from A to B.
        #[arg(long)]
        witness: bool,
    },
    /// Step-by-step report of the algorithm on one label.
    Trace {
        input: String,
        /// Label to trace; defaults to the first label of the input.
        #[arg(long)]
        rho: Option<String>,
    },
    /// Recover the Arthur parameter of a multi-segment, if any.
    Arthur { input: String },
    /// Exhaustively check the main lemma for an Arthur parameter such as `rho:(1,1)`.
    Verify { input: String },
    /// List every multi-segment with the given support.
    Enumerate { input: String },
    /// Covering relation of the poset on a support (or on the support of a multi-segment).
    Hasse { input: String },
}

fn read_input(arg: &str) -> std::io::Result<String> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf)?;
    Ok(buf)
}

fn run(cli: Cli) -> Result<commands::Output, CmdError> {
    let config = EnumConfig {
        bound: cli.bound,
        parallel: cli.parallel,
    };
    let load = |s: &str| read_input(s).map_err(|e| CmdError::Usage(format!("reading stdin: {e}")));
    let f = cli.format;
    match &cli.command {
        Command::Dual { input } => commands::dual(&load(input)?, f),
        Command::Ge { a, b, witness } => commands::ge(&load(a)?, &load(b)?, *witness, f),
        Command::Trace { input, rho } => commands::trace(&load(input)?, rho.as_deref(), f),
        Command::Arthur { input } => commands::arthur(&load(input)?, f),
        Command::Verify { input } => commands::verify(&load(input)?, &config, f),
        Command::Enumerate { input } => commands::enumerate(&load(input)?, &config, f),
        Command::Hasse { input } => commands::hasse(&load(input)?, &config, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => 3,
                Error::Validation(_) => 1,
                _ => 2,
            })
        }
    }
}
