//! Planar biped sprint environment.
//!
//! A 7-body sagittal-plane biped (torso, two thighs, shanks, feet; 6 motored
//! revolute joints) runs toward a finish line on flat ground. Observations
//! follow a fixed 41-feature layout built from joint angles, timing
//! counters, torso state, center of mass, foot pressure, and per-cycle rates
//! of change. Actions are 6 raw values bounded to [-1, 1], projected onto
//! the joint ranges, and tracked by a proportional velocity controller.
//!
//! Task I ends on a fall, the finish line, or a safety cap; Task II runs a
//! fixed 400-step horizon with fall termination kept.
//!
//! The module also ships `PointMassEnv`, a trivially solvable 1-D sprint
//! used as a trainer acceptance fixture; it is not part of the biped MDP.

mod config;
mod env;
mod obs;
mod pointmass;
mod robot;

pub use config::{parse_kv_text, BipedConfig, PhysicsOverrides, Task};
pub use env::{BipedEnv, StepInfo, StepResult};
pub use obs::{Observation, OBS_DIM, RATE_BASE_INDICES};
pub use pointmass::PointMassEnv;
pub use robot::{assemble_biped, joint_limits, BipedLayout, FOOT_BODIES, JOINT_NAMES, TOTAL_MASS};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("episode already finished")]
    EpisodeFinished,
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Physics(#[from] physics2d::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
