use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dfakit::ChannelKind;

use crate::commands;
use crate::exit;

#[derive(Debug, Parser)]
#[command(name = "dfakit", version, about = "Decoherence-free algebras of finite-dimensional quantum channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a channel file is unital and trace preserving.
    Validate(ValidateArgs),
    /// Compute the inclusion chain and decoherence-free algebra of a channel.
    Report(ReportArgs),
    /// Write a random unital trace-preserving channel.
    Random(RandomArgs),
    /// Replace the Kraus operators by a linearly independent family.
    Reduce(ReduceArgs),
    /// Run the property suite over a random ensemble.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub path: PathBuf,
    /// Residual threshold for the unital and trace-preserving checks.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Print the flags as JSON on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub path: PathBuf,
    /// Threshold for projector comparisons and channel validation.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Relative singular-value cut for rank decisions.
    #[arg(long, default_value_t = 1e-12)]
    pub rank_rtol: f64,
    /// Include an orthonormal basis of the decoherence-free algebra.
    #[arg(long)]
    pub emit_basis: bool,
    /// Accepted for symmetry; the report is always JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    /// mixed_unitary, luders or padded.
    pub kind: ChannelKind,
    /// Hilbert space dimension.
    pub n: usize,
    /// Number of Kraus operators (padded channels store 2k).
    pub k: usize,
    #[arg(long, env = "DFAKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub path: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest acceptable action residual between input and output.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub rank_rtol: f64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_delimiter = ',', default_values_t = ChannelKind::ALL.to_vec())]
    pub kinds: Vec<ChannelKind>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4])]
    pub dims: Vec<usize>,
    /// Kraus counts, cycled over the channels of each cell.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3, 4])]
    pub counts: Vec<usize>,
    /// Channels per (kind, dimension) cell.
    #[arg(long, default_value_t = 25)]
    pub channels: usize,
    /// Random inputs per channel for the positivity and multiplicativity checks.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, env = "DFAKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Replace every residual threshold by this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub rank_rtol: f64,
    /// Print the summary as JSON on stdout.
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return exit::IO;
            }
            let _ = write!(out, "{}", e.render());
            return exit::SUCCESS;
        }
    };
    match cli.command {
        Command::Validate(a) => commands::validate(&a, out, err),
        Command::Report(a) => commands::report(&a, out, err),
        Command::Random(a) => commands::random(&a, out, err),
        Command::Reduce(a) => commands::reduce(&a, out, err),
        Command::Check(a) => commands::check(&a, out, err),
    }
}
