//! `scissor-sfwm`: regenerates the SCISSOR photon-pair data sets.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! non-convergence, 1 anything else (I/O).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use log::error;
use scissor_core::config::Config;
use scissor_core::experiments::{run_experiment, Experiment};
use scissor_core::Error;

#[derive(Debug, Parser)]
#[command(name = "scissor-sfwm", version, about = "Photon-pair generation in side-coupled ring arrays")]
struct Cli {
    /// spectrum, efficiency-vs-n, jsd, fwhm-vs-n or coherence-number.
    experiment: String,
    /// JSON configuration; omitted fields take the reference values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Points per JSD axis (odd, at least 33).
    #[arg(long)]
    grid_points: Option<usize>,
    /// Check every |beta|^2 against a run at doubled resolution.
    #[arg(long)]
    refine: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Json(_) => 2,
        Error::NonConvergence { .. } | Error::GridTooSmall(_) => 3,
        Error::Io(_) | Error::Csv(_) => 1,
    }
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, Error> {
    let experiment: Experiment = cli.experiment.parse()?;
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(k) = cli.grid_points {
        config.jsd.grid_points = k;
    }
    config.quadrature.refine |= cli.refine;
    config.validate()?;
    run_experiment(experiment, &config, &cli.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
