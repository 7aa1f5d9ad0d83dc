use std::sync::Arc;
use std::time::Instant;

use netcore::{ActorCritic, AdamState, ParamSet};
use rollout::{run_iteration, Env, EpisodeStat, IterationConfig, WorkerPool};

use crate::surrogate::SurrogateProvider;
use crate::update::{explained_variance, UpdateStats};
use crate::{Result, TrainerConfig};

/// One per-iteration log record. Field names and order are fixed; `to_line`
/// renders the canonical line-delimited form.
#[derive(Debug, Clone)]
pub struct LogRecord {
    pub iteration: u64,
    pub cumulative_timesteps: usize,
    pub mean_episode_reward: f64,
    pub mean_episode_length: f64,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    pub explained_variance: f64,
    pub wall_seconds: f64,
}

impl LogRecord {
    pub fn to_line(&self) -> String {
        format!(
            "iteration={} cumulative_timesteps={} mean_episode_reward={} \
             mean_episode_length={} policy_loss={} value_loss={} entropy={} \
             clip_fraction={} approx_kl={} explained_variance={} wall_seconds={}",
            self.iteration,
            self.cumulative_timesteps,
            self.mean_episode_reward,
            self.mean_episode_length,
            self.policy_loss,
            self.value_loss,
            self.entropy,
            self.clip_fraction,
            self.approx_kl,
            self.explained_variance,
            self.wall_seconds
        )
    }

    /// Parses a line produced by `to_line`.
    pub fn parse_line(line: &str) -> Option<LogRecord> {
        let mut rec = LogRecord {
            iteration: 0,
            cumulative_timesteps: 0,
            mean_episode_reward: f64::NAN,
            mean_episode_length: f64::NAN,
            policy_loss: f64::NAN,
            value_loss: f64::NAN,
            entropy: f64::NAN,
            clip_fraction: f64::NAN,
            approx_kl: f64::NAN,
            explained_variance: f64::NAN,
            wall_seconds: f64::NAN,
        };
        for field in line.split_whitespace() {
            let (key, value) = field.split_once('=')?;
            match key {
                "iteration" => rec.iteration = value.parse().ok()?,
                "cumulative_timesteps" => rec.cumulative_timesteps = value.parse().ok()?,
                "mean_episode_reward" => rec.mean_episode_reward = value.parse().ok()?,
                "mean_episode_length" => rec.mean_episode_length = value.parse().ok()?,
                "policy_loss" => rec.policy_loss = value.parse().ok()?,
                "value_loss" => rec.value_loss = value.parse().ok()?,
                "entropy" => rec.entropy = value.parse().ok()?,
                "clip_fraction" => rec.clip_fraction = value.parse().ok()?,
                "approx_kl" => rec.approx_kl = value.parse().ok()?,
                "explained_variance" => rec.explained_variance = value.parse().ok()?,
                "wall_seconds" => rec.wall_seconds = value.parse().ok()?,
                _ => return None,
            }
        }
        Some(rec)
    }
}

/// Callbacks the trainer drives. `wall_seconds` may be overridden to pin the
/// clock, which makes log files byte-identical across reruns.
pub trait TrainHooks {
    fn on_log(&mut self, record: &LogRecord) -> std::io::Result<()>;
    fn on_checkpoint(&mut self, iteration: u64, params: &ParamSet) -> std::io::Result<()>;
    fn on_episode(&mut self, stat: &EpisodeStat) {
        let _ = stat;
    }
    /// Return `Some(seconds)` to replace the real clock.
    fn wall_seconds(&mut self) -> Option<f64> {
        None
    }
}

/// Trains from freshly initialized parameters.
pub fn train<F>(cfg: &TrainerConfig, env_factory: F, hooks: &mut dyn TrainHooks) -> Result<ParamSet>
where
    F: FnMut(usize) -> Box<dyn Env>,
{
    train_from(cfg, env_factory, hooks, None)
}

/// Trains until `total_timesteps` pooled steps are consumed, starting from
/// `initial` parameters when given (resume), else from seed-derived init.
///
/// Per iteration: every worker collects `timesteps_per_actorbatch` steps,
/// GAE runs per worker segment, advantages are pooled and normalized
/// globally, and the synchronized minibatch update runs with cross-worker
/// gradient averaging. One log record per iteration; checkpoints every
/// `checkpoint_every` iterations and at the end.
pub fn train_from<F>(
    cfg: &TrainerConfig,
    mut env_factory: F,
    hooks: &mut dyn TrainHooks,
    initial: Option<ParamSet>,
) -> Result<ParamSet>
where
    F: FnMut(usize) -> Box<dyn Env>,
{
    cfg.validate()?;
    let envs: Vec<Box<dyn Env>> = (0..cfg.worker_count).map(&mut env_factory).collect();
    let obs_dim = envs[0].obs_dim();
    let act_dim = envs[0].act_dim();
    let policy = ActorCritic::new(obs_dim, act_dim);

    let params = match initial {
        Some(p) => {
            policy.check_params(&p)?;
            p
        }
        None => policy.init_params(cfg.seed),
    };
    let adam = AdamState::new(params.len());

    let provider = Arc::new(SurrogateProvider {
        policy: policy.clone(),
        config: cfg.clone(),
    });
    let pool = WorkerPool::new(
        envs,
        &policy,
        &params,
        provider,
        cfg.seed,
        cfg.thread_cap.unwrap_or(cfg.worker_count),
    )?;

    run_training_loop(cfg, &pool, params, adam, hooks)
}

fn run_training_loop(
    cfg: &TrainerConfig,
    pool: &WorkerPool,
    mut params: ParamSet,
    mut adam: AdamState,
    hooks: &mut dyn TrainHooks,
) -> Result<ParamSet> {
    let pooled_size = cfg.pooled_batch_size();
    let iterations = cfg.total_timesteps.div_ceil(pooled_size).max(1) as u64;
    let start = Instant::now();
    let mut cumulative = 0usize;
    let mut last_mean_reward = 0.0;
    let mut last_mean_length = 0.0;

    for iteration in 0..iterations {
        let outcome = run_iteration(
            pool,
            &params,
            &adam,
            &IterationConfig {
                segment_len: cfg.timesteps_per_actorbatch,
                gamma: cfg.gamma,
                gae_lambda: cfg.gae_lambda,
                epochs: cfg.optimization_epochs,
                minibatch_size: cfg.minibatch_size,
                learning_rate: cfg.learning_rate,
                run_seed: cfg.seed,
                iteration,
            },
        )?;
        params = outcome.params;
        adam = outcome.adam;
        cumulative += outcome.timesteps;

        if !outcome.episodes.is_empty() {
            let n = outcome.episodes.len() as f64;
            last_mean_reward = outcome.episodes.iter().map(|e| e.total_reward).sum::<f64>() / n;
            last_mean_length = outcome.episodes.iter().map(|e| e.length as f64).sum::<f64>() / n;
        }
        for episode in &outcome.episodes {
            hooks.on_episode(episode);
        }

        let stats = stats_from_iteration(&outcome.final_epoch_stats, &outcome.pooled);
        let wall = hooks
            .wall_seconds()
            .unwrap_or_else(|| start.elapsed().as_secs_f64());
        hooks.on_log(&LogRecord {
            iteration,
            cumulative_timesteps: cumulative,
            mean_episode_reward: last_mean_reward,
            mean_episode_length: last_mean_length,
            policy_loss: stats.policy_loss,
            value_loss: stats.value_loss,
            entropy: stats.entropy,
            clip_fraction: stats.clip_fraction,
            approx_kl: stats.approx_kl,
            explained_variance: stats.explained_variance,
            wall_seconds: wall,
        })?;

        let last = iteration + 1 == iterations;
        if (iteration + 1) % cfg.checkpoint_every as u64 == 0 || last {
            hooks.on_checkpoint(iteration + 1, &params)?;
        }
    }
    Ok(params)
}

fn stats_from_iteration(flat: &[f64], pooled: &rollout::PooledBatch) -> UpdateStats {
    UpdateStats {
        policy_loss: flat.first().copied().unwrap_or(f64::NAN),
        value_loss: flat.get(1).copied().unwrap_or(f64::NAN),
        entropy: flat.get(2).copied().unwrap_or(f64::NAN),
        clip_fraction: flat.get(3).copied().unwrap_or(f64::NAN),
        approx_kl: flat.get(4).copied().unwrap_or(f64::NAN),
        explained_variance: explained_variance(&pooled.returns, &pooled.values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_record_round_trips_through_text() {
        let rec = LogRecord {
            iteration: 12,
            cumulative_timesteps: 49152,
            mean_episode_reward: 1.25,
            mean_episode_length: 333.5,
            policy_loss: -0.002,
            value_loss: 0.41,
            entropy: 8.5136,
            clip_fraction: 0.03125,
            approx_kl: 0.0007,
            explained_variance: 0.62,
            wall_seconds: 0.0,
        };
        let line = rec.to_line();
        let back = LogRecord::parse_line(&line).unwrap();
        assert_eq!(back.iteration, 12);
        assert_eq!(back.cumulative_timesteps, 49152);
        assert_eq!(back.mean_episode_reward, 1.25);
        assert_eq!(back.clip_fraction, 0.03125);
        assert_eq!(back.wall_seconds, 0.0);
    }
}
