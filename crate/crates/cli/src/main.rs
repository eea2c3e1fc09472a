//! `sleepscore`: command-line driver for the sleep-staging pipeline.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 data error, 3 internal
//! error.

mod commands;
mod config;
mod error;
mod run;
mod svg;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sleepscore::dataset::AgeGroup;

use crate::commands::{Experiment, FetchArgs, RunOptions, SynthArgs};
use crate::error::CliError;

const DEFAULT_BASE_URL: &str = "https://physionet.org/files/sleep-edfx/1.0.0/sleep-cassette";

#[derive(Parser)]
#[command(name = "sleepscore", version, about = "Sleep-stage classification from polysomnography")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download subject recordings and hypnograms, verifying checksums.
    Fetch {
        /// Comma-separated subject ids; `ID=STEM` names a differently-stemmed hypnogram.
        #[arg(long, value_delimiter = ',', required = true)]
        subjects: Vec<String>,
        #[arg(long)]
        dest: PathBuf,
        #[arg(long, default_value = DEFAULT_BASE_URL)]
        base_url: String,
        #[arg(long, default_value_t = 3)]
        retries: u32,
        #[arg(long, default_value_t = 4)]
        parallel: usize,
        #[arg(long, default_value_t = 300)]
        timeout_secs: u64,
    },
    /// Write a deterministic synthetic cohort as EDF files.
    Synth {
        /// Number of subjects without an age group.
        #[arg(long, default_value_t = 8, conflicts_with = "groups")]
        subjects: usize,
        /// Grouped cohort instead, e.g. `G1=4,G4=4`.
        #[arg(long, value_parser = commands::parse_groups)]
        groups: Option<BTreeMap<AgeGroup, usize>>,
        #[arg(long, default_value_t = 400)]
        epochs: usize,
        #[arg(long, default_value_t = sleepscore::mlcore::DEFAULT_SEED)]
        seed: u64,
        /// JSON synthesis profile; defaults to the built-in profile.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Load, notch, epoch and trim every subject; report stage counts.
    Preprocess(RunArgs),
    /// Extract and cache the configured feature matrix.
    Extract(RunArgs),
    /// Leave-one-subject-out grid search over the configured grid.
    Gridsearch(RunArgs),
    /// Train one model on every subject in the data directory.
    Train(RunArgs),
    /// Score a saved model, or run LOSO CV of the configured pipeline.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        /// Model file written by `train`.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Run one of the experiments.
    Experiment {
        #[arg(value_enum)]
        name: ExperimentName,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON run config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Data directory; overrides the config's `data_dir`.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Run directory; defaults to `<output_dir>/<command>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bypass the feature cache.
    #[arg(long)]
    no_cache: bool,
    /// Worker threads; overrides the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Also write an SVG summary.
    #[arg(long)]
    svg: bool,
}

impl From<RunArgs> for RunOptions {
    fn from(a: RunArgs) -> Self {
        RunOptions {
            config: a.config,
            data: a.data,
            out: a.out,
            no_cache: a.no_cache,
            workers: a.workers,
            svg: a.svg,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Channels,
    Features,
    Cascade,
    Age,
    Earlylate,
    Methods,
}

impl From<ExperimentName> for Experiment {
    fn from(e: ExperimentName) -> Self {
        match e {
            ExperimentName::Channels => Experiment::Channels,
            ExperimentName::Features => Experiment::Features,
            ExperimentName::Cascade => Experiment::Cascade,
            ExperimentName::Age => Experiment::Age,
            ExperimentName::Earlylate => Experiment::EarlyLate,
            ExperimentName::Methods => Experiment::Methods,
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Fetch {
            subjects,
            dest,
            base_url,
            retries,
            parallel,
            timeout_secs,
        } => commands::fetch(&FetchArgs {
            subjects,
            base_url,
            dest,
            retries,
            parallel,
            timeout_secs,
        }),
        Command::Synth {
            subjects,
            groups,
            epochs,
            seed,
            profile,
            out,
        } => commands::synth(&SynthArgs {
            subjects,
            groups,
            epochs,
            seed,
            profile,
            out,
        }),
        Command::Preprocess(a) => commands::preprocess(&a.into()),
        Command::Extract(a) => commands::extract(&a.into()),
        Command::Gridsearch(a) => commands::gridsearch(&a.into()),
        Command::Train(a) => commands::train(&a.into()),
        Command::Evaluate { run, model } => commands::evaluate_cmd(&run.into(), model.as_deref()),
        Command::Experiment { name, run } => commands::experiment(&run.into(), name.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
