//! Clipped-surrogate policy optimization over minibatch epochs, actor-critic
//! style, plus the top-level training loop that drives rollout collection,
//! advantage estimation, and synchronized parameter updates.

mod config;
mod surrogate;
mod train;
mod update;

pub use config::{LrDecay, TrainerConfig};
pub use surrogate::{surrogate_loss, surrogate_loss_grad, SurrogateProvider, STAT_FIELDS};
pub use train::{train, train_from, LogRecord, TrainHooks};
pub use update::{explained_variance, ppo_update, UpdateStats};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("non-finite loss")]
    NonFiniteLoss,
    #[error("batch size {batch} not divisible by minibatch size {minibatch}")]
    BatchMismatch { batch: usize, minibatch: usize },
    #[error("log sink: {0}")]
    Sink(#[from] std::io::Error),
    #[error(transparent)]
    Net(#[from] netcore::Error),
    #[error(transparent)]
    Rollout(#[from] rollout::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
