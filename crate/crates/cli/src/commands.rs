use std::io::Write;
use std::path::{Path, PathBuf};

use biped_env::{BipedEnv, Task};
use evalkit::{run_episodes, EvalOptions, EvalReport};
use netcore::{read_checkpoint_file, write_checkpoint_file, ActorCritic, ParamSet};
use ppo::{LogRecord, TrainHooks};
use rollout::{Env, EpisodeStat};

use crate::manifest::RunManifest;
use crate::plotting::Figure;
use crate::runconfig::RunConfig;
use crate::{runtime, usage, CliResult};

pub const BIPED_OBS_DIM: usize = 41;
pub const BIPED_ACT_DIM: usize = 6;

pub struct TrainArgs {
    pub config: Option<PathBuf>,
    pub task: Option<String>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub total_steps: Option<usize>,
    pub out: PathBuf,
    pub resume: Option<PathBuf>,
}

struct RunDirHooks {
    log: std::fs::File,
    checkpoints_dir: PathBuf,
    manifest: RunManifest,
    zero_clock: bool,
}

impl TrainHooks for RunDirHooks {
    fn on_log(&mut self, record: &LogRecord) -> std::io::Result<()> {
        writeln!(self.log, "{}", record.to_line())
    }

    fn on_checkpoint(&mut self, iteration: u64, params: &ParamSet) -> std::io::Result<()> {
        let name = format!("iter_{iteration:06}.ckpt");
        write_checkpoint_file(params, self.checkpoints_dir.join(&name))
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        self.manifest
            .append_checkpoint(&format!("checkpoints/{name}"))
            .map_err(|e| std::io::Error::other(e.message().to_string()))
    }

    fn on_episode(&mut self, _stat: &EpisodeStat) {}

    fn wall_seconds(&mut self) -> Option<f64> {
        self.zero_clock.then_some(0.0)
    }
}

/// `locorun train`: create the run directory (manifest, config snapshot,
/// per-iteration log, periodic checkpoints) and train to completion.
pub fn cmd_train(args: &TrainArgs) -> CliResult<()> {
    let mut run = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(task) = &args.task {
        run.env.task = match task.as_str() {
            "sprint1" => Task::SprintTask1,
            "sprint2" => Task::SprintTask2,
            other => return Err(usage(format!("unknown task {other:?}"))),
        };
    }
    if let Some(workers) = args.workers {
        run.trainer.worker_count = workers;
    }
    if let Some(seed) = args.seed {
        run.trainer.seed = seed;
    }
    if let Some(total) = args.total_steps {
        run.trainer.total_timesteps = total;
    }
    run.trainer.thread_cap = crate::thread_cap_from_env();
    run.env.validate().map_err(usage)?;
    run.trainer.validate().map_err(usage)?;

    let resume = match &args.resume {
        Some(path) => Some(read_checkpoint_file(path).map_err(usage)?),
        None => None,
    };

    std::fs::create_dir_all(args.out.join("checkpoints")).map_err(runtime)?;
    std::fs::write(args.out.join("config.snapshot"), run.snapshot()).map_err(runtime)?;
    let manifest = RunManifest::create(
        &args.out,
        run.trainer.seed,
        run.env.task.as_str(),
        run.trainer.worker_count,
        run.trainer.total_timesteps,
    )?;
    let mut hooks = RunDirHooks {
        log: std::fs::File::create(args.out.join("train.log")).map_err(runtime)?,
        checkpoints_dir: args.out.join("checkpoints"),
        manifest,
        zero_clock: crate::zero_clock_from_env(),
    };

    let env_cfg = run.env.clone();
    let seed = run.trainer.seed;
    let env_factory = move |worker_id: usize| {
        Box::new(BipedEnv::new(env_cfg.clone(), seed + worker_id as u64)) as Box<dyn Env>
    };
    let params =
        ppo::train_from(&run.trainer, env_factory, &mut hooks, resume).map_err(runtime)?;

    write_checkpoint_file(&params, args.out.join("final.ckpt")).map_err(runtime)?;
    hooks.manifest.append_checkpoint("final.ckpt")?;
    hooks.manifest.finish()?;
    Ok(())
}

pub struct EvalArgs {
    pub checkpoint: PathBuf,
    pub config: Option<PathBuf>,
    pub episodes: usize,
    pub stochastic: bool,
    pub seed: u64,
    pub out: PathBuf,
}

fn load_biped_checkpoint(path: &Path) -> CliResult<(ActorCritic, ParamSet)> {
    let params = read_checkpoint_file(path).map_err(usage)?;
    let policy = ActorCritic::new(BIPED_OBS_DIM, BIPED_ACT_DIM);
    policy.check_params(&params).map_err(usage)?;
    Ok((policy, params))
}

/// `locorun eval`: deterministic rollouts plus the statistics report.
/// Nothing is written until the checkpoint has loaded cleanly.
pub fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let run = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let (policy, params) = load_biped_checkpoint(&args.checkpoint)?;
    let opts = EvalOptions {
        episodes: args.episodes,
        deterministic: !args.stochastic,
        seed: args.seed,
        heading_noise_deg: run.heading_noise_deg,
    };
    let records = run_episodes(&policy, &params, &run.env, &opts).map_err(runtime)?;
    let report = EvalReport::from_records(&records, 10_000, args.seed).map_err(runtime)?;
    evalkit::write_report_files(&args.out, &report, &records).map_err(runtime)?;
    Ok(())
}

pub struct PlotArgs {
    pub log: Option<PathBuf>,
    pub eval: Option<PathBuf>,
    pub out: PathBuf,
}

/// `locorun plot`: reward curve from a training log, or the speed
/// evaluation figure (with CI bands) from an eval directory. The output
/// format follows the extension: `.svg` vector graphic, anything else the
/// tabular backend.
pub fn cmd_plot(args: &PlotArgs) -> CliResult<()> {
    let figure = match (&args.log, &args.eval) {
        (Some(log), None) => reward_figure(log)?,
        (None, Some(dir)) => eval_figure(dir)?,
        _ => return Err(usage("pass exactly one of --log or --eval")),
    };
    let rendered = if args.out.extension().is_some_and(|e| e == "svg") {
        figure.to_svg()
    } else {
        figure.to_csv()
    };
    std::fs::write(&args.out, rendered).map_err(runtime)?;
    Ok(())
}

fn reward_figure(log_path: &Path) -> CliResult<Figure> {
    let text = std::fs::read_to_string(log_path).map_err(usage)?;
    let mut points = Vec::new();
    for line in text.lines() {
        let record = LogRecord::parse_line(line)
            .ok_or_else(|| usage(format!("malformed log line: {line}")))?;
        points.push((record.iteration as f64, record.mean_episode_reward));
    }
    if points.is_empty() {
        return Err(usage("no iterations"));
    }
    Ok(Figure {
        title: "Reward curve".into(),
        x_label: "iteration".into(),
        y_label: "mean episode reward (m)".into(),
        series: vec![("mean_episode_reward".into(), points)],
        bands: vec![],
    })
}

fn eval_figure(dir: &Path) -> CliResult<Figure> {
    let report = evalkit::read_report(dir).map_err(usage)?;
    let episodes = std::fs::read_to_string(dir.join("episodes.csv")).map_err(usage)?;
    let mut mean_points = Vec::new();
    let mut top_points = Vec::new();
    for (i, line) in episodes.lines().skip(1).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 7 {
            return Err(usage(format!("malformed episodes.csv line: {line}")));
        }
        let mean: f64 = cols[5].parse().map_err(|_| usage("bad mean_velocity"))?;
        let top: f64 = cols[6].parse().map_err(|_| usage("bad top_velocity"))?;
        mean_points.push((i as f64, mean));
        top_points.push((i as f64, top));
    }
    if mean_points.is_empty() {
        return Err(usage("no episodes"));
    }
    Ok(Figure {
        title: "Forward speed evaluation".into(),
        x_label: "episode".into(),
        y_label: "velocity (m/s)".into(),
        series: vec![
            ("mean_velocity".into(), mean_points),
            ("top_velocity".into(), top_points),
        ],
        bands: vec![
            (
                "ci_mean".into(),
                report.mean_velocity_ci.0,
                report.mean_velocity_ci.1,
            ),
            (
                "ci_top".into(),
                report.top_velocity_ci.0,
                report.top_velocity_ci.1,
            ),
        ],
    })
}

pub struct ReplayArgs {
    pub checkpoint: PathBuf,
    pub config: Option<PathBuf>,
    pub seed: u64,
    pub out: PathBuf,
}

/// `locorun replay-export`: one deterministic episode dumped as
/// line-delimited per-cycle body states for offline inspection.
pub fn cmd_replay_export(args: &ReplayArgs) -> CliResult<()> {
    let run = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let (policy, params) = load_biped_checkpoint(&args.checkpoint)?;
    let mut env = BipedEnv::new(run.env.clone(), args.seed);
    let mut obs = env.reset_env();
    let mut lines = vec![env.world().dump_header()];
    let mut cycle = 0u64;
    loop {
        let action = policy.policy_mean(&params, &obs).map_err(runtime)?;
        let result = env.env_step(&action).map_err(runtime)?;
        cycle += 1;
        lines.push(
            env.world()
                .dump_line(cycle, cycle as f64 * run.env.control_dt),
        );
        if result.done {
            break;
        }
        obs = result.observation;
    }
    std::fs::write(&args.out, lines.join("\n") + "\n").map_err(runtime)?;
    Ok(())
}
