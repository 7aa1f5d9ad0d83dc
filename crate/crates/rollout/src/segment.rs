use advantage::Trajectory;

use crate::env::EpisodeStat;

/// One worker's fixed-length slice of experience, possibly spanning several
/// episodes. `episode_boundaries[i]` is the number of steps completed when
/// the i-th episode ended (strictly increasing).
#[derive(Debug, Clone)]
pub struct RolloutSegment {
    pub trajectory: Trajectory,
    pub episode_boundaries: Vec<usize>,
    /// Episodes completed inside this segment.
    pub episodes: Vec<EpisodeStat>,
}

/// Concatenated worker segments with normalized advantages, laid out flat
/// for minibatch row addressing.
#[derive(Debug, Clone)]
pub struct PooledBatch {
    pub obs: Vec<f64>,
    pub actions: Vec<f64>,
    pub old_logprobs: Vec<f64>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
    /// Critic values at collection time, kept for diagnostics.
    pub values: Vec<f64>,
    pub obs_dim: usize,
    pub act_dim: usize,
}

impl PooledBatch {
    pub fn len(&self) -> usize {
        self.old_logprobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.old_logprobs.is_empty()
    }

    pub fn obs_row(&self, i: usize) -> &[f64] {
        &self.obs[i * self.obs_dim..(i + 1) * self.obs_dim]
    }

    pub fn action_row(&self, i: usize) -> &[f64] {
        &self.actions[i * self.act_dim..(i + 1) * self.act_dim]
    }
}
