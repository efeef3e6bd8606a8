mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, GeneratorsArg, Overrides, StrategyArg};

#[derive(Parser, Debug)]
#[command(name = "hitcalc", version, about = "Admissible monomial bases of F_2[x_1, ..., x_s] over the Steenrod algebra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, global = true, env = "HITCALC_FORMAT", value_enum)]
    format: Option<Format>,
    /// How dimensions are computed.
    #[arg(long, global = true, env = "HITCALC_STRATEGY", value_enum)]
    strategy: Option<StrategyArg>,
    /// Squares used to generate the hit subspace.
    #[arg(long, global = true, env = "HITCALC_GENERATORS", value_enum)]
    generators: Option<GeneratorsArg>,
    /// Drop monomials below the minimal spike weight before eliminating.
    #[arg(long, global = true, env = "HITCALC_PREFILTER")]
    prefilter: Option<bool>,
    /// Largest degree space (number of monomials) to build.
    #[arg(long, global = true, env = "HITCALC_MAX_SPACE")]
    max_space: Option<u128>,
    /// Worker threads.
    #[arg(long, global = true, env = "HITCALC_THREADS")]
    threads: Option<usize>,
    /// `key=value` file with defaults for the options above.
    #[arg(long, global = true, env = "HITCALC_CONFIG")]
    config: Option<PathBuf>,
    /// No progress messages on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// dim (QP_s)_d with its splitting by weight.
    Dim {
        #[arg(short)]
        s: usize,
        #[arg(short)]
        d: u32,
    },
    /// The admissible monomials of degree d.
    Basis {
        #[arg(short)]
        s: usize,
        #[arg(short)]
        d: u32,
        /// Only monomials of this weight vector, e.g. 3,3,1.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Whether a polynomial such as "[2,2,1,1,7]+[1,2,2,1,7]" is hit.
    HitTest {
        #[arg(short)]
        s: Option<usize>,
        polynomial: String,
    },
    /// Whether a monomial is strictly inadmissible.
    StrictTest {
        #[arg(short)]
        s: Option<usize>,
        monomial: String,
    },
    /// The Kameko map (QP_s)_d -> (QP_s)_{(d-s)/2} and its kernel.
    Kameko {
        #[arg(short)]
        s: usize,
        #[arg(short)]
        d: u32,
    },
    /// Invariants of Sigma_s or GL_s on (QP_s)_d or on a weight subquotient.
    Invariants {
        #[arg(short)]
        s: usize,
        #[arg(short)]
        d: u32,
        #[arg(long, default_value = "Sigma")]
        group: String,
        #[arg(long)]
        weight: Option<String>,
    },
    /// Compares the shipped families in degree 2^{t+2} - 3 with the computed basis.
    Verify {
        #[arg(long)]
        t: u32,
        /// A catalogue file to use instead of the shipped one.
        #[arg(long)]
        catalogue: Option<PathBuf>,
    },
    /// Instantiates the families at t.
    Export {
        #[arg(long)]
        t: u32,
        /// q, b, u or v; all labels when omitted.
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        catalogue: Option<PathBuf>,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

impl Global {
    fn overrides(&self) -> Overrides {
        Overrides {
            format: self.format,
            strategy: self.strategy,
            generators: self.generators,
            prefilter: self.prefilter,
            max_space: self.max_space,
            threads: self.threads,
        }
    }
}
