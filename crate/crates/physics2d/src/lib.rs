//! Deterministic planar rigid-body dynamics for the biped environment.
//!
//! Bodies are rectangles in the x-z plane (z up) colliding with the ground
//! plane z = 0 only. Articulation is built from revolute joints carrying
//! velocity motors (unbounded force within a substep) and angle limits.
//! Contacts and joints are resolved by sequential impulses with Baumgarte
//! position correction; integration is semi-implicit with a trapezoidal
//! position update so free flight is exact for constant gravity.
//!
//! Everything is `f64` and fully deterministic: identical states and
//! commands produce bitwise-identical successors within one build.

mod body;
mod joint;
mod math;
mod world;

pub use body::Body;
pub use joint::RevoluteJoint;
pub use math::Vec2;
pub use world::{
    Contact, FootPressure, WorldState, BAUMGARTE, PENETRATION_SLOP, SUBSTEP_DT,
    VELOCITY_ITERATIONS,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite state after step: {0}")]
    NonFinite(String),
    #[error("motor command count {got} does not match joint count {expected}")]
    CommandCount { expected: usize, got: usize },
    #[error("body index {0} out of range")]
    BadBodyIndex(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
