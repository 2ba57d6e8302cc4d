mod commands;
mod source;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use addcomp::complexity::{ComplexityError, ScanConfig, DEFAULT_PREFIX_CAP};
use addcomp::exec::Execution;
use addcomp::linrep::LinRepError;
use addcomp::powers::PowersError;

use source::WordArgs;

/// Abelian and additive complexity of morphic and automatic sequences.
#[derive(Debug, Parser)]
#[command(name = "addcomp", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Longest prefix any scan may materialize
    #[arg(long, global = true, env = "ADDCOMP_PREFIX_CAP", default_value_t = DEFAULT_PREFIX_CAP)]
    pub cap: usize,
    /// Run on one thread
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl Global {
    pub fn scan(&self) -> ScanConfig {
        let cfg = ScanConfig::with_cap(self.cap);
        if self.sequential {
            cfg.sequential()
        } else {
            cfg
        }
    }

    pub fn exec(&self) -> Execution {
        self.scan().execution
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a prefix of a word
    Generate {
        #[command(flatten)]
        word: WordArgs,
        /// Number of letters
        #[arg(short = 'n', long)]
        len: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Factor, abelian or additive complexity for n = 0..=N
    Profile(commands::ProfileArgs),
    /// Automata with output
    #[command(subcommand)]
    Dfao(commands::DfaoCommand),
    /// Linear representations
    #[command(subcommand)]
    Linrep(commands::LinrepCommand),
    /// Abelian and additive powers
    #[command(subcommand)]
    Powers(commands::PowersCommand),
    /// Largest letter-count gap between same-length factors
    Balance {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 100_000)]
        window: usize,
    },
    /// Valuations and the additive/abelian comparison
    #[command(subcommand)]
    Valuation(commands::ValuationCommand),
    /// Run the built-in reproduction checks
    Verify(verify::VerifyArgs),
}

/// Exit status for an error: 3 when a resource cap stopped the work,
/// 2 for everything else (bad input, unreadable files).
fn exit_code(err: &anyhow::Error) -> u8 {
    let capped = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<ComplexityError>(),
            Some(ComplexityError::CapExceeded { .. })
        ) || matches!(e.downcast_ref::<LinRepError>(), Some(LinRepError::DidNotHalt { .. }))
            || matches!(
                e.downcast_ref::<PowersError>(),
                Some(PowersError::Complexity(ComplexityError::CapExceeded { .. }))
            )
    });
    if capped {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.command {
        Command::Generate { word, len, output } => commands::generate(&word, len, output.as_deref()),
        Command::Profile(args) => commands::profile(g, &args),
        Command::Dfao(cmd) => commands::dfao(g, cmd),
        Command::Linrep(cmd) => commands::linrep(cmd),
        Command::Powers(cmd) => commands::powers(g, cmd),
        Command::Balance { word, n_max, window } => commands::balance(g, &word, n_max, window),
        Command::Valuation(cmd) => commands::valuation_cmd(g, cmd),
        Command::Verify(args) => verify::run(g, &args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
