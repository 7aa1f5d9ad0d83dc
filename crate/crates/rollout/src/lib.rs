//! Parallel experience collection and synchronized gradient averaging.
//!
//! Workers are isolated replicas: each owns an environment, a seeded RNG
//! stream, a local copy of the parameters, and an Adam-state replica. The
//! master exchanges data with them only at two barriers per iteration:
//! segment collection and per-minibatch gradient averaging. Every exchange
//! is a `(tag, flat float payload)` message, so the same protocol could be
//! backed by sockets instead of the in-process channels used here.
//!
//! The averaging scheme is data-parallel SGD: each worker computes the
//! gradient of its equal-size shard of one (identically shuffled) minibatch,
//! the shard gradients are averaged, and everyone applies the same Adam step
//! — making K workers mathematically equivalent to a single process with
//! K-fold minibatches. Parameter checksums are compared after every
//! iteration and any divergence aborts the run.

mod env;
mod iteration;
mod message;
mod pool;
mod segment;
mod sync;
mod worker;

pub use env::{Env, EnvStep, EpisodeEnd, EpisodeStat};
pub use iteration::{run_iteration, GradProvider, IterationConfig, IterationOutcome};
pub use message::{Message, MsgTag};
pub use pool::WorkerPool;
pub use segment::{PooledBatch, RolloutSegment};
pub use sync::{average_gradients, epoch_permutation};
pub use worker::Worker;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("worker {worker_id}: {message}")]
    WorkerFault { worker_id: usize, message: String },
    #[error("gradient length mismatch: expected {expected}, got {got}")]
    GradLength { expected: usize, got: usize },
    #[error("no gradients to average")]
    NoGradients,
    #[error("worker {worker_id} parameters diverged from master")]
    Divergence { worker_id: usize },
    #[error("minibatch size {minibatch} not divisible by worker count {workers}")]
    ShardMismatch { minibatch: usize, workers: usize },
    #[error("batch size {batch} not divisible by minibatch size {minibatch}")]
    BatchMismatch { batch: usize, minibatch: usize },
    #[error("worker channel closed unexpectedly")]
    ChannelClosed,
    #[error("malformed message payload: {0}")]
    BadPayload(String),
    #[error(transparent)]
    Net(#[from] netcore::Error),
    #[error(transparent)]
    Advantage(#[from] advantage::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
