//! Batch front end for surface-EMG processing: ingest CSV recordings,
//! run the filtering/feature/statistics chain, and write deterministic
//! artifacts. Exit codes: 0 success, 2 validation or ingest error,
//! 3 runtime computation error.
// `!(x > 0.0)` is the deliberate precondition form: unlike `x <= 0.0` it
// also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod error;
mod ingest;
mod output;
mod plot;
mod run;

use clap::{Args, Parser, Subcommand};
use config::{PipelineConfig, Units};
use error::{validation, CliError};
use ingest::IngestOptions;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "semg", version, about = "Surface EMG batch processing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV recording (header row; optional leading time column).
    input: PathBuf,
    /// Pipeline configuration file (TOML); defaults match the standard chain.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sampling rate in Hz for files without a time column.
    #[arg(long)]
    fs: Option<f64>,
    /// Units of the amplitude columns.
    #[arg(long, value_enum)]
    units: Option<Units>,
}

#[derive(Args)]
struct ProcessArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Significance level override.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    /// Pipeline configuration file (TOML); the [synth] section applies.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// RNG seed override.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a recording and print its layout.
    IngestCheck(InputArgs),
    /// Filter a recording and write the cleaned signals and envelopes.
    Preprocess(ProcessArgs),
    /// Compute per-epoch amplitude and spectral features.
    Features(ProcessArgs),
    /// Fit fatigue trends over the per-epoch feature series.
    Fatigue(ProcessArgs),
    /// Compute integrated-EMG coactivation indices across channels.
    Coactivation(ProcessArgs),
    /// Run normality tests over the feature columns.
    Stats(StatsArgs),
    /// Generate a synthetic recording with a ground-truth sidecar.
    Synth(SynthArgs),
    /// Run the whole chain and write every artifact.
    Pipeline(ProcessArgs),
}

/// Loads the config named by the arguments and folds the command-line
/// ingest overrides into effective ingest options (flag beats config
/// beats default).
fn effective(args: &InputArgs) -> Result<(PipelineConfig, IngestOptions), CliError> {
    let config = PipelineConfig::load(args.config.as_deref())?;
    if let Some(fs) = args.fs {
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(validation(format!("--fs must be positive, got {fs}")));
        }
    }
    let options = IngestOptions {
        fs: args.fs.or(config.ingest.fs),
        units: args.units.or(config.ingest.units).unwrap_or(Units::MV),
    };
    Ok((config, options))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::IngestCheck(args) => {
            let (_, options) = effective(&args)?;
            run::ingest_check(&args.input, &options)
        }
        Command::Preprocess(args) => {
            let (config, options) = effective(&args.input)?;
            run::preprocess_cmd(&args.input.input, &options, &config, &args.out)
        }
        Command::Features(args) => {
            let (config, options) = effective(&args.input)?;
            run::features_cmd(&args.input.input, &options, &config, &args.out)
        }
        Command::Fatigue(args) => {
            let (config, options) = effective(&args.input)?;
            run::fatigue_cmd(&args.input.input, &options, &config, &args.out)
        }
        Command::Coactivation(args) => {
            let (config, options) = effective(&args.input)?;
            run::coactivation_cmd(&args.input.input, &options, &config, &args.out)
        }
        Command::Stats(args) => {
            let (mut config, options) = effective(&args.process.input)?;
            if let Some(alpha) = args.alpha {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(validation(format!(
                        "--alpha must lie in (0, 1), got {alpha}"
                    )));
                }
                config.stats.alpha = alpha;
            }
            run::stats_cmd(
                &args.process.input.input,
                &options,
                &config,
                &args.process.out,
            )
        }
        Command::Synth(args) => {
            let mut config = PipelineConfig::load(args.config.as_deref())?;
            if let Some(seed) = args.seed {
                config.synth.seed = seed;
            }
            run::synth_cmd(&config, &args.out)
        }
        Command::Pipeline(args) => {
            let (config, options) = effective(&args.input)?;
            run::pipeline_cmd(&args.input.input, &options, &config, &args.out)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("{}", e.diagnostic());
        std::process::exit(e.exit_code());
    }
}
