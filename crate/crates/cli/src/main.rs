use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use locorun::commands::{
    cmd_eval, cmd_plot, cmd_replay_export, cmd_train, EvalArgs, PlotArgs, ReplayArgs, TrainArgs,
};

/// Sprint-locomotion trainer and evaluation toolkit for a planar biped.
#[derive(Parser)]
#[command(name = "locorun", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a sprint policy into a run directory.
    Train {
        /// Flat key-value config file (environment + trainer keys).
        #[arg(long)]
        config: Option<PathBuf>,
        /// sprint1 (finish line) or sprint2 (fixed 400-step horizon).
        #[arg(long)]
        task: Option<String>,
        /// Parallel rollout workers.
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pooled environment steps to train for.
        #[arg(long)]
        total_steps: Option<usize>,
        /// Run directory to create.
        #[arg(long)]
        out: PathBuf,
        /// Optional checkpoint to resume parameters from.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Evaluate a checkpoint over many episodes and write the report.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        episodes: usize,
        /// Sample the policy instead of using the deterministic mean.
        #[arg(long, default_value_t = false)]
        stochastic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render figures from a training log or an eval directory.
    Plot {
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long)]
        eval: Option<PathBuf>,
        /// Output file; .svg renders a vector graphic, anything else the
        /// tabular backend.
        #[arg(long)]
        out: PathBuf,
    },
    /// Roll one deterministic episode and dump per-cycle body states.
    ReplayExport {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train {
            config,
            task,
            workers,
            seed,
            total_steps,
            out,
            resume,
        } => cmd_train(&TrainArgs {
            config,
            task,
            workers: Some(workers),
            seed: Some(seed),
            total_steps,
            out,
            resume,
        }),
        Command::Eval {
            checkpoint,
            config,
            episodes,
            stochastic,
            seed,
            out,
        } => cmd_eval(&EvalArgs {
            checkpoint,
            config,
            episodes,
            stochastic,
            seed,
            out,
        }),
        Command::Plot { log, eval, out } => cmd_plot(&PlotArgs { log, eval, out }),
        Command::ReplayExport {
            checkpoint,
            config,
            seed,
            out,
        } => cmd_replay_export(&ReplayArgs {
            checkpoint,
            config,
            seed,
            out,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("locorun: {}", err.message());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
