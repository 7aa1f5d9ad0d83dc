//! Minimal dense-network numerics for the locomotion trainer.
//!
//! Everything here is plain `f64`: feed-forward MLPs with tanh hidden
//! layers, a diagonal-Gaussian policy head with a learned state-independent
//! log-std vector, exact reverse-mode gradients for the fixed loss
//! compositions the trainer uses, and Adam. No external ML dependencies;
//! parameters live in one flat vector with a layout manifest so gradient
//! exchange and checkpointing stay trivial.

mod adam;
mod checkpoint;
mod layout;
mod loss;
mod mlp;
mod params;
mod policy;

pub use adam::{adam_step, AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON};
pub use checkpoint::{
    read_checkpoint, read_checkpoint_file, write_checkpoint, write_checkpoint_file,
};
pub use layout::{Activation, LayerLayout};
pub use loss::{grad, loss_value, LossSpec};
pub use mlp::{backprop, forward, forward_traced, forward_untraced, init_params, ForwardTrace, NetOffsets};
pub use params::{ParamSet, TensorSpec};
pub use policy::{ActorCritic, GaussianPolicyOutput};

/// ln(2π), the constant in the Gaussian log-density.
pub const LN_2PI: f64 = 1.837_877_066_409_345_3;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
