//! `gnss-predict`: prediction, evaluation, outlier simulation and event
//! detection for GNSS position time series.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 numerical failure.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gnss_predict::Error;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self::data(format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidConfig(_)
            | Error::UnknownWavelet(_)
            | Error::NonPositiveF0(_)
            | Error::TooManyFrequencies { .. } => 1,
            Error::DegenerateWindow
            | Error::EmptyWindow
            | Error::UnderdeterminedSystem { .. }
            | Error::NonCausalEpoch { .. }
            | Error::ZeroDenominator => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gnss-predict", version, about = "GNSS position time series prediction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Key-value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "gnss-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Pipeline {
    /// Window length in samples.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m_min: Option<usize>,
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Use exactly this many frequencies instead of searching.
    #[arg(long)]
    pub m_fixed: Option<usize>,
    #[arg(long)]
    pub mse_threshold: Option<f64>,
    /// Fundamental frequency in Hz.
    #[arg(long)]
    pub f0: Option<f64>,
    /// sliding or growing.
    #[arg(long)]
    pub window_policy: Option<String>,
    /// haar, db2, db3 or db4.
    #[arg(long)]
    pub wavelet: Option<String>,
    /// true or false.
    #[arg(long)]
    pub refit_each_step: Option<bool>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert NGL tenv3 or schema-described delimited files to series CSVs.
    Ingest {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// ngl or delimited.
        #[arg(long, default_value = "ngl")]
        format: String,
        /// Key-value schema sidecar for --format delimited.
        #[arg(long)]
        schema: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Forecast a series.
    Predict {
        #[arg(long, required = true)]
        input: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
        #[command(flatten)]
        pipeline: Pipeline,
        #[command(flatten)]
        common: Common,
    },
    /// Score predictions against the observed series.
    Evaluate {
        /// Observed series (training samples followed by the actual values).
        #[arg(long, required = true)]
        input: PathBuf,
        #[arg(long, required = true)]
        predictions: PathBuf,
        /// full or training.
        #[arg(long)]
        mase_scale: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Inject outliers, detect them and score the detection.
    SimulateOutliers {
        /// Series CSVs or directories of them; a synthetic corpus when absent.
        #[arg(long)]
        input: Vec<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        injections: Option<usize>,
        #[arg(long)]
        min_magnitude: Option<f64>,
        #[arg(long)]
        max_magnitude: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        series_count: Option<usize>,
        #[arg(long)]
        series_length: Option<usize>,
        #[command(flatten)]
        pipeline: Pipeline,
        #[command(flatten)]
        common: Common,
    },
    /// Predict event onset and first motion for high-rate series.
    DetectEvent {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        step_threshold: Option<f64>,
        #[arg(long)]
        event_threshold: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
        /// Train on this share of each series instead of up to the departure.
        #[arg(long)]
        training_fraction: Option<f64>,
        #[arg(long)]
        departure_offset: Option<usize>,
        #[arg(long)]
        baseline_len: Option<usize>,
        /// Observed event epoch (absolute seconds) for lead times.
        #[arg(long)]
        reference: Option<f64>,
        /// Comma-separated components to analyse.
        #[arg(long)]
        components: Option<String>,
        #[command(flatten)]
        pipeline: Pipeline,
        #[command(flatten)]
        common: Common,
    },
    /// Time train + one-step prediction over an (n, m) grid.
    Bench {
        /// Comma-separated n:m pairs, e.g. 1024:64,512:32.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        repeats: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Write synthetic series files.
    Synth {
        /// outliers (daily, noisy) or event (1 Hz swing).
        #[arg(long, default_value = "outliers")]
        kind: String,
        #[arg(long)]
        series_count: Option<usize>,
        #[arg(long)]
        series_length: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Ingest { input, format, schema, common } => commands::ingest(&input, &format, schema.as_deref(), &common),
        Command::Predict { input, horizon, pipeline, common } => commands::predict(&input, horizon, &pipeline, &common),
        Command::Evaluate { input, predictions, mase_scale, common } => {
            commands::evaluate(&input, &predictions, mase_scale, &common)
        }
        Command::SimulateOutliers {
            input,
            threshold,
            injections,
            min_magnitude,
            max_magnitude,
            max_iterations,
            series_count,
            series_length,
            pipeline,
            common,
        } => commands::simulate_outliers(
            &input,
            commands::OutlierFlags {
                threshold,
                injections,
                min_magnitude,
                max_magnitude,
                max_iterations,
                series_count,
                series_length,
            },
            &pipeline,
            &common,
        ),
        Command::DetectEvent {
            input,
            step_threshold,
            event_threshold,
            horizon,
            training_fraction,
            departure_offset,
            baseline_len,
            reference,
            components,
            pipeline,
            common,
        } => commands::detect_event(
            &input,
            commands::EventFlags {
                step_threshold,
                event_threshold,
                horizon,
                training_fraction,
                departure_offset,
                baseline_len,
                reference,
                components,
            },
            &pipeline,
            &common,
        ),
        Command::Bench { grid, repeats, common } => commands::bench(grid, repeats, &common),
        Command::Synth { kind, series_count, series_length, common } => {
            commands::synth(&kind, series_count, series_length, &common)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
