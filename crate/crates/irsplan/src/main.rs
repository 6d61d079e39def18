use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use irsplan::config::{ExperimentConfig, SweepParam};
use irsplan::experiment::{self, ExperimentError, RunOutput};
use irsplan::output::{fmt_g9, write_csv, write_json};

const EXIT_CONFIG: u8 = 2;
const EXIT_NONCONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "irsplan", version, about = "IRS deployment, reflection and power optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, zero for one per core.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Deploy from the line-of-sight channel, then optimize every realization.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// One run per value of a parameter, written as one long table.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Outer-approximation bounds over the candidate positions.
    Bound {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("writing {0}: {1}")]
    Output(PathBuf, String),
}

fn load(common: &Common) -> Result<ExperimentConfig, ExperimentError> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.experiment.seed = seed;
    }
    if let Some(w) = common.workers {
        cfg.experiment.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: &RunOutput, k: usize, format: Format, path: &Path) -> Result<(), CliError> {
    let err = |e: &dyn std::fmt::Display| CliError::Output(path.to_path_buf(), e.to_string());
    let file = File::create(path).map_err(|e| err(&e))?;
    let w = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(&out.records, k, w).map_err(|e| err(&e)),
        Format::Json => write_json(&out.records, w).map_err(|e| err(&e)),
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Run { common, out, format } => {
            let cfg = load(&common)?;
            let res = experiment::run(&cfg)?;
            emit(&res, cfg.num_users(), format, &out)?;
            report(&res);
            Ok(if res.nonconverged > 0 { EXIT_NONCONVERGED } else { 0 })
        }
        Command::Sweep {
            common,
            param,
            values,
            out,
            format,
        } => {
            let cfg = load(&common)?;
            let res = experiment::sweep(&cfg, param, &values)?;
            emit(&res, cfg.num_users(), format, &out)?;
            report(&res);
            Ok(if res.nonconverged > 0 { EXIT_NONCONVERGED } else { 0 })
        }
        Command::Bound { common } => {
            let cfg = load(&common)?;
            let cands = experiment::bound(&cfg)?;
            let stdout = io::stdout();
            let mut w = stdout.lock();
            let _ = writeln!(w, "s_x,s_y,s_z,order,bound_bps_hz,achieved_bps_hz");
            for c in &cands {
                let order = c
                    .order
                    .as_ref()
                    .map(|o| o.sequence().iter().map(|u| (u + 1).to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default();
                let _ = writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    fmt_g9(c.position.x),
                    fmt_g9(c.position.y),
                    fmt_g9(c.position.z),
                    order,
                    fmt_g9(c.bound),
                    fmt_g9(c.achieved)
                );
            }
            Ok(0)
        }
    }
}

fn report(res: &RunOutput) {
    eprintln!(
        "deployment ({}, {}, {}), mean wsr {} bps/Hz over {} records",
        fmt_g9(res.deployment.x),
        fmt_g9(res.deployment.y),
        fmt_g9(res.deployment.z),
        fmt_g9(experiment::mean_wsr(&res.records)),
        res.records.len()
    );
    if res.nonconverged > 0 {
        eprintln!("{} runs hit their iteration cap", res.nonconverged);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Experiment(ExperimentError::Config(e))) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
