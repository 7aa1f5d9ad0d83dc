//! Post-training evaluation: deterministic rollouts, forward-speed
//! statistics with percentile-bootstrap confidence intervals, and
//! trajectory-deviation statistics.
//!
//! The planar dynamics have no lateral axis, so the deviation pipeline runs
//! on a synthesized lateral coordinate: a zero-mean Gaussian heading random
//! walk deflects each cycle's forward progress sideways. With the noise set
//! to zero every trajectory is perfectly straight.

mod episodes;
mod report;
mod stats;

pub use episodes::{run_episodes, velocity_from_positions, EpisodeRecord, EvalOptions};
pub use report::{read_report, write_report_files, EvalReport};
pub use stats::{bootstrap_ci, deviation_stats, DeviationStats};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty sample set")]
    EmptySamples,
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Env(#[from] biped_env::Error),
    #[error(transparent)]
    Net(#[from] netcore::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
