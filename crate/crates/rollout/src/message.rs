//! The worker transport contract: every exchange is a tag plus a flat float
//! payload. Integers ride as exact `f64` values (all counts stay far below
//! 2^53); checksums ride bit-for-bit through `f64::from_bits`.

use advantage::Trajectory;

use crate::env::{EpisodeEnd, EpisodeStat};
use crate::segment::{PooledBatch, RolloutSegment};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsgTag {
    /// Master -> workers: replace local parameters. Payload: values.
    SetParams,
    /// Master -> workers: collect a segment. Payload: [segment_len].
    Collect,
    /// Worker -> master: collected segment. Payload: segment codec below.
    Segment,
    /// Master -> workers: pooled batch for this iteration.
    Batch,
    /// Master -> workers: compute one minibatch shard gradient.
    /// Payload: [iteration, epoch, minibatch_index, minibatch_size].
    GradRequest,
    /// Worker -> master: shard gradient. Payload: [stats_len, stats.., grad..].
    Grad,
    /// Master -> workers: averaged gradient. Payload: [lr, grad..].
    ApplyGrad,
    /// Master -> workers: request a parameter checksum. Empty payload.
    ChecksumRequest,
    /// Worker -> master: checksum bits. Payload: [from_bits(checksum)].
    Checksum,
    /// Master -> workers: stop. Empty payload.
    Shutdown,
}

#[derive(Debug, Clone)]
pub struct Message {
    pub tag: MsgTag,
    pub payload: Vec<f64>,
}

impl Message {
    pub fn new(tag: MsgTag, payload: Vec<f64>) -> Self {
        Self { tag, payload }
    }
}

/// Segment payload layout:
/// [t, obs_dim, act_dim, n_bounds, n_episodes,
///  obs (t*obs_dim), actions (t*act_dim), logprobs (t), rewards (t),
///  values (t), terminals (t, 0/1), bootstrap,
///  bounds (n_bounds), episodes (3 per entry: length, reward, end code)]
pub fn encode_segment(seg: &RolloutSegment, obs_dim: usize, act_dim: usize) -> Vec<f64> {
    let t = seg.trajectory.len();
    let mut p = Vec::with_capacity(5 + t * (obs_dim + act_dim + 4) + 1 + seg.episode_boundaries.len() + 3 * seg.episodes.len());
    p.push(t as f64);
    p.push(obs_dim as f64);
    p.push(act_dim as f64);
    p.push(seg.episode_boundaries.len() as f64);
    p.push(seg.episodes.len() as f64);
    for row in &seg.trajectory.observations {
        p.extend_from_slice(row);
    }
    for row in &seg.trajectory.raw_actions {
        p.extend_from_slice(row);
    }
    p.extend_from_slice(&seg.trajectory.logprobs);
    p.extend_from_slice(&seg.trajectory.rewards);
    p.extend_from_slice(&seg.trajectory.values);
    p.extend(seg.trajectory.terminal_flags.iter().map(|&f| f as u8 as f64));
    p.push(seg.trajectory.bootstrap_value);
    p.extend(seg.episode_boundaries.iter().map(|&b| b as f64));
    for e in &seg.episodes {
        p.push(e.length as f64);
        p.push(e.total_reward);
        p.push(e.end.code());
    }
    p
}

pub fn decode_segment(payload: &[f64], worker_id: usize) -> Result<RolloutSegment> {
    let bad = |what: &str| Error::BadPayload(format!("segment: {what}"));
    if payload.len() < 5 {
        return Err(bad("header too short"));
    }
    let t = payload[0] as usize;
    let obs_dim = payload[1] as usize;
    let act_dim = payload[2] as usize;
    let n_bounds = payload[3] as usize;
    let n_eps = payload[4] as usize;
    let expected = 5 + t * (obs_dim + act_dim + 4) + 1 + n_bounds + 3 * n_eps;
    if payload.len() != expected {
        return Err(bad("length mismatch"));
    }
    let mut at = 5;
    let mut take = |n: usize| {
        let s = &payload[at..at + n];
        at += n;
        s
    };
    let observations = take(t * obs_dim)
        .chunks_exact(obs_dim.max(1))
        .map(|c| c.to_vec())
        .take(t)
        .collect();
    let raw_actions = take(t * act_dim)
        .chunks_exact(act_dim.max(1))
        .map(|c| c.to_vec())
        .take(t)
        .collect();
    let logprobs = take(t).to_vec();
    let rewards = take(t).to_vec();
    let values = take(t).to_vec();
    let terminal_flags = take(t).iter().map(|&f| f != 0.0).collect();
    let bootstrap_value = take(1)[0];
    let episode_boundaries = take(n_bounds).iter().map(|&b| b as usize).collect();
    let mut episodes = Vec::with_capacity(n_eps);
    for _ in 0..n_eps {
        let e = take(3);
        episodes.push(EpisodeStat {
            worker_id,
            length: e[0] as usize,
            total_reward: e[1],
            end: EpisodeEnd::from_code(e[2]).ok_or_else(|| bad("episode end code"))?,
        });
    }
    Ok(RolloutSegment {
        trajectory: Trajectory {
            observations,
            raw_actions,
            logprobs,
            rewards,
            values,
            terminal_flags,
            bootstrap_value,
        },
        episode_boundaries,
        episodes,
    })
}

/// Batch payload layout:
/// [len, obs_dim, act_dim, obs.., actions.., old_logprobs.., advantages..,
///  returns.., values..]
pub fn encode_batch(batch: &PooledBatch) -> Vec<f64> {
    let n = batch.len();
    let mut p = Vec::with_capacity(3 + n * (batch.obs_dim + batch.act_dim + 4));
    p.push(n as f64);
    p.push(batch.obs_dim as f64);
    p.push(batch.act_dim as f64);
    p.extend_from_slice(&batch.obs);
    p.extend_from_slice(&batch.actions);
    p.extend_from_slice(&batch.old_logprobs);
    p.extend_from_slice(&batch.advantages);
    p.extend_from_slice(&batch.returns);
    p.extend_from_slice(&batch.values);
    p
}

pub fn decode_batch(payload: &[f64]) -> Result<PooledBatch> {
    let bad = |what: &str| Error::BadPayload(format!("batch: {what}"));
    if payload.len() < 3 {
        return Err(bad("header too short"));
    }
    let n = payload[0] as usize;
    let obs_dim = payload[1] as usize;
    let act_dim = payload[2] as usize;
    if payload.len() != 3 + n * (obs_dim + act_dim + 4) {
        return Err(bad("length mismatch"));
    }
    let mut at = 3;
    let mut take = |count: usize| {
        let s = payload[at..at + count].to_vec();
        at += count;
        s
    };
    Ok(PooledBatch {
        obs: take(n * obs_dim),
        actions: take(n * act_dim),
        old_logprobs: take(n),
        advantages: take(n),
        returns: take(n),
        values: take(n),
        obs_dim,
        act_dim,
    })
}
