//! `spring-lp`: spring-electrical link prediction experiments.
//!
//! Exit codes: 0 success, 1 invalid configuration or input, 2 runtime failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Axis;
use config::{ExperimentConfig, OUTPUT_DIR_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0:#}")]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "spring-lp", version, about = "Link prediction with spring-electrical graph embeddings")]
struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Override any configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Edge-list file, or `icosphere:<k>`.
    #[arg(long, global = true)]
    dataset: Option<String>,
    /// undirected, directed or bipartite.
    #[arg(long, global = true)]
    kind: Option<String>,
    /// sfdp, bi-sfdp, di-sfdp, oriented-di-sfdp, cn, aa, aa-log, pa, external or oracle.
    #[arg(long, global = true)]
    scorer: Option<String>,
    /// Score file for the external scorer (`{seed}` is replaced per trial).
    #[arg(long, global = true)]
    scores: Option<String>,
    #[arg(long, global = true)]
    dim: Option<String>,
    /// Fraction of edges hidden per trial.
    #[arg(long, global = true)]
    fraction: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    /// uniform, bipartite_weighted or directed_difficult.
    #[arg(long, global = true)]
    regime: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output directory (also settable through SPRING_LP_OUTPUT_DIR).
    #[arg(long, global = true)]
    output_dir: Option<String>,
    /// More log output (-v info, -vv debug).
    #[arg(long, short, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Take the largest connected component and write a canonical edge list.
    Prepare {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lay the graph out (sfdp, bi-sfdp or di-sfdp) and write the layout.
    Embed {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded trials and append a row to the results CSV.
    Evaluate {
        /// Results file; defaults to `<output_dir>/results.csv`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate once per value of `dim` or `p` and write long-form CSV.
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export train/test splits for external scorers.
    Split {
        /// Directory receiving one `split-<seed>` folder per trial.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Cli {
    fn overrides(&self) -> Result<Vec<(String, String)>, CliError> {
        let flags = [
            ("dataset", &self.dataset),
            ("kind", &self.kind),
            ("scorer", &self.scorer),
            ("scores", &self.scores),
            ("dim", &self.dim),
            ("fraction", &self.fraction),
            ("trials", &self.trials),
            ("regime", &self.regime),
            ("seed", &self.seed),
            ("output_dir", &self.output_dir),
        ];
        let mut out: Vec<(String, String)> =
            flags.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = ExperimentConfig::resolve(cli.config.as_deref(), std::env::var(OUTPUT_DIR_ENV).ok(), &cli.overrides()?)?;
    match cli.command {
        Command::Prepare { out } => commands::prepare(&cfg, out).map(drop),
        Command::Embed { out } => commands::embed(&cfg, out).map(drop),
        Command::Evaluate { csv } => commands::evaluate(&cfg, csv).map(drop),
        Command::Sweep { axis, values, out } => commands::sweep(&cfg, axis, &values, out).map(drop),
        Command::Split { out } => commands::split(&cfg, out).map(drop),
    }
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
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
