use biped_env::{parse_kv_text, BipedConfig};
use ppo::TrainerConfig;

use crate::{usage, CliResult};

/// Everything a run needs, assembled from one flat key-value config file.
/// The file holds the environment keys (owned by the env crate) plus the
/// trainer hyperparameters and evaluation knobs below; CLI flags override
/// task, workers, seed, and total steps afterwards.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub env: BipedConfig,
    pub trainer: TrainerConfig,
    pub heading_noise_deg: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            env: BipedConfig::default(),
            trainer: TrainerConfig::default(),
            heading_noise_deg: 0.05,
        }
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> CliResult<Self> {
        let mut run = RunConfig {
            env: BipedConfig::from_kv_text(text).map_err(usage)?,
            ..RunConfig::default()
        };
        for (key, value) in parse_kv_text(text) {
            if run.env.apply_kv(&key, &value).map_err(usage)? {
                continue;
            }
            run.apply_trainer_kv(&key, &value)?;
        }
        Ok(run)
    }

    pub fn from_file(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    fn apply_trainer_kv(&mut self, key: &str, value: &str) -> CliResult<()> {
        let bad = || usage(format!("bad value {value:?} for {key}"));
        let t = &mut self.trainer;
        match key {
            "timesteps_per_actorbatch" => t.timesteps_per_actorbatch = value.parse().map_err(|_| bad())?,
            "clip_epsilon" => t.clip_epsilon = value.parse().map_err(|_| bad())?,
            "entropy_coef" => t.entropy_coef = value.parse().map_err(|_| bad())?,
            "optimization_epochs" => t.optimization_epochs = value.parse().map_err(|_| bad())?,
            "learning_rate" => t.learning_rate = value.parse().map_err(|_| bad())?,
            "minibatch_size" => t.minibatch_size = value.parse().map_err(|_| bad())?,
            "gamma" => t.gamma = value.parse().map_err(|_| bad())?,
            "gae_lambda" => t.gae_lambda = value.parse().map_err(|_| bad())?,
            "total_timesteps" => t.total_timesteps = value.parse().map_err(|_| bad())?,
            "worker_count" => t.worker_count = value.parse().map_err(|_| bad())?,
            "seed" => t.seed = value.parse().map_err(|_| bad())?,
            "value_loss_coef" => t.value_loss_coef = value.parse().map_err(|_| bad())?,
            "checkpoint_every" => t.checkpoint_every = value.parse().map_err(|_| bad())?,
            "heading_noise_deg" => self.heading_noise_deg = value.parse().map_err(|_| bad())?,
            other => return Err(usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Full snapshot of the effective configuration, rereadable by
    /// `from_text`.
    pub fn snapshot(&self) -> String {
        let t = &self.trainer;
        format!(
            "{}timesteps_per_actorbatch = {}\nclip_epsilon = {}\nentropy_coef = {}\n\
             optimization_epochs = {}\nlearning_rate = {}\nminibatch_size = {}\n\
             gamma = {}\ngae_lambda = {}\ntotal_timesteps = {}\nworker_count = {}\n\
             seed = {}\nvalue_loss_coef = {}\ncheckpoint_every = {}\nheading_noise_deg = {}\n",
            self.env.to_kv_text(),
            t.timesteps_per_actorbatch,
            t.clip_epsilon,
            t.entropy_coef,
            t.optimization_epochs,
            t.learning_rate,
            t.minibatch_size,
            t.gamma,
            t.gae_lambda,
            t.total_timesteps,
            t.worker_count,
            t.seed,
            t.value_loss_coef,
            t.checkpoint_every,
            self.heading_noise_deg,
        )
    }
}
