use crate::{Error, Result};

/// Learning-rate schedule. Training uses a constant rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LrDecay {
    #[default]
    None,
}

/// All trainer hyperparameters plus run controls.
#[derive(Debug, Clone)]
pub struct TrainerConfig {
    pub timesteps_per_actorbatch: usize,
    pub clip_epsilon: f64,
    pub entropy_coef: f64,
    pub optimization_epochs: usize,
    pub learning_rate: f64,
    pub minibatch_size: usize,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub lr_decay: LrDecay,
    pub total_timesteps: usize,
    pub worker_count: usize,
    pub seed: u64,
    pub value_loss_coef: f64,
    /// Checkpoint cadence in iterations.
    pub checkpoint_every: usize,
    /// OS-thread cap for the worker pool; `None` means one thread per worker.
    pub thread_cap: Option<usize>,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            timesteps_per_actorbatch: 4096,
            clip_epsilon: 0.1,
            entropy_coef: 0.0,
            optimization_epochs: 10,
            learning_rate: 0.0001,
            minibatch_size: 64,
            gamma: 0.99,
            gae_lambda: 0.95,
            lr_decay: LrDecay::None,
            total_timesteps: 0,
            worker_count: 4,
            seed: 0,
            value_loss_coef: 1.0,
            checkpoint_every: 50,
            thread_cap: None,
        }
    }
}

impl TrainerConfig {
    pub fn pooled_batch_size(&self) -> usize {
        self.worker_count * self.timesteps_per_actorbatch
    }

    pub fn validate(&self) -> Result<()> {
        if self.clip_epsilon <= 0.0 {
            return Err(Error::InvalidConfig("clip_epsilon must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma) || !(0.0..=1.0).contains(&self.gae_lambda) {
            return Err(Error::InvalidConfig(
                "gamma and gae_lambda must lie in [0, 1]".into(),
            ));
        }
        if self.worker_count == 0 {
            return Err(Error::InvalidConfig("worker_count must be >= 1".into()));
        }
        if self.timesteps_per_actorbatch == 0 || self.minibatch_size == 0 {
            return Err(Error::InvalidConfig("batch sizes must be >= 1".into()));
        }
        if !self.pooled_batch_size().is_multiple_of(self.minibatch_size) {
            return Err(Error::InvalidConfig(format!(
                "minibatch_size {} must divide pooled batch size {}",
                self.minibatch_size,
                self.pooled_batch_size()
            )));
        }
        if !self.minibatch_size.is_multiple_of(self.worker_count) {
            return Err(Error::InvalidConfig(format!(
                "worker_count {} must divide minibatch_size {}",
                self.worker_count, self.minibatch_size
            )));
        }
        if self.optimization_epochs == 0 {
            return Err(Error::InvalidConfig("optimization_epochs must be >= 1".into()));
        }
        if self.learning_rate <= 0.0 {
            return Err(Error::InvalidConfig("learning_rate must be > 0".into()));
        }
        Ok(())
    }
}
