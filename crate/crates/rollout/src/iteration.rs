use advantage::{gae, normalize_advantages, AdvantageBatch};
use netcore::{adam_step, AdamState, ParamSet};

use crate::env::EpisodeStat;
use crate::message::{decode_segment, encode_batch, Message, MsgTag};
use crate::pool::WorkerPool;
use crate::segment::{PooledBatch, RolloutSegment};
use crate::sync::average_gradients;
use crate::{Error, Result};

/// Gradient/stat computation over rows of a pooled batch. Implemented by the
/// trainer with its surrogate loss; the pool calls it from worker threads.
pub trait GradProvider: Send + Sync {
    /// Returns the gradient of the mean loss over the given rows plus a flat
    /// vector of diagnostic stats (averaged across workers by the master).
    fn minibatch_grad(
        &self,
        params: &ParamSet,
        batch: &PooledBatch,
        rows: &[usize],
    ) -> std::result::Result<(Vec<f64>, Vec<f64>), String>;
}

#[derive(Debug, Clone)]
pub struct IterationConfig {
    pub segment_len: usize,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub epochs: usize,
    pub minibatch_size: usize,
    pub learning_rate: f64,
    pub run_seed: u64,
    pub iteration: u64,
}

pub struct IterationOutcome {
    pub params: ParamSet,
    pub adam: AdamState,
    pub pooled: PooledBatch,
    pub episodes: Vec<EpisodeStat>,
    /// Mean of the per-minibatch stat vectors over the final epoch.
    pub final_epoch_stats: Vec<f64>,
    pub timesteps: usize,
}

/// One synchronized trainer iteration.
///
/// Barrier 1: all workers collect segments; GAE runs per worker segment and
/// advantages are normalized globally after pooling. Barrier 2: for every
/// minibatch of the identically-shuffled pooled batch, each worker computes
/// the gradient of its shard, the average is broadcast, and every replica
/// (master included) applies the same Adam step. Checksums are verified at
/// the end; divergence aborts.
pub fn run_iteration(
    pool: &WorkerPool,
    params: &ParamSet,
    adam: &AdamState,
    cfg: &IterationConfig,
) -> Result<IterationOutcome> {
    let workers = pool.worker_count();
    if !cfg.minibatch_size.is_multiple_of(workers) {
        return Err(Error::ShardMismatch {
            minibatch: cfg.minibatch_size,
            workers,
        });
    }

    // Barrier 1: segments.
    pool.broadcast(&Message::new(MsgTag::Collect, vec![cfg.segment_len as f64]))?;
    let replies = pool.gather(MsgTag::Segment)?;
    let mut segments = Vec::with_capacity(workers);
    for (worker_id, msg) in replies.iter().enumerate() {
        segments.push(decode_segment(&msg.payload, worker_id)?);
    }

    let pooled = pool_segments(&segments, cfg.gamma, cfg.gae_lambda)?;
    let episodes: Vec<EpisodeStat> = segments
        .iter()
        .flat_map(|s| s.episodes.iter().copied())
        .collect();

    let batch_len = pooled.len();
    if batch_len % cfg.minibatch_size != 0 {
        return Err(Error::BatchMismatch {
            batch: batch_len,
            minibatch: cfg.minibatch_size,
        });
    }
    let minibatches = batch_len / cfg.minibatch_size;

    pool.broadcast(&Message::new(MsgTag::Batch, encode_batch(&pooled)))?;

    // Barrier 2: sharded gradients, one Adam step per minibatch everywhere.
    let mut params = params.clone();
    let mut adam = adam.clone();
    let mut final_epoch_stats = Vec::new();
    for epoch in 0..cfg.epochs {
        let mut epoch_stats: Vec<f64> = Vec::new();
        for mb in 0..minibatches {
            pool.broadcast(&Message::new(
                MsgTag::GradRequest,
                vec![
                    cfg.iteration as f64,
                    epoch as f64,
                    mb as f64,
                    cfg.minibatch_size as f64,
                ],
            ))?;
            let replies = pool.gather(MsgTag::Grad)?;
            let mut grads = Vec::with_capacity(workers);
            let mut stats_sum: Vec<f64> = Vec::new();
            for msg in &replies {
                let stats_len = msg.payload[0] as usize;
                let stats = &msg.payload[1..1 + stats_len];
                let grad = &msg.payload[1 + stats_len..];
                if stats_sum.is_empty() {
                    stats_sum = vec![0.0; stats_len];
                }
                for (acc, s) in stats_sum.iter_mut().zip(stats) {
                    *acc += s;
                }
                grads.push(grad.to_vec());
            }
            let avg = average_gradients(&grads)?;
            for s in &mut stats_sum {
                *s /= workers as f64;
            }

            let mut payload = Vec::with_capacity(1 + avg.len());
            payload.push(cfg.learning_rate);
            payload.extend_from_slice(&avg);
            pool.broadcast(&Message::new(MsgTag::ApplyGrad, payload))?;
            let (next_params, next_adam) = adam_step(&params, &avg, &adam, cfg.learning_rate)?;
            params = next_params;
            adam = next_adam;

            if epoch + 1 == cfg.epochs {
                if epoch_stats.is_empty() {
                    epoch_stats = vec![0.0; stats_sum.len()];
                }
                for (acc, s) in epoch_stats.iter_mut().zip(&stats_sum) {
                    *acc += s;
                }
            }
        }
        if epoch + 1 == cfg.epochs {
            for s in &mut epoch_stats {
                *s /= minibatches as f64;
            }
            final_epoch_stats = epoch_stats;
        }
    }

    // Every replica must now hold bitwise-identical parameters.
    pool.broadcast(&Message::new(MsgTag::ChecksumRequest, Vec::new()))?;
    let master_sum = params.checksum();
    for (worker_id, msg) in pool.gather(MsgTag::Checksum)?.iter().enumerate() {
        if msg.payload[0].to_bits() != master_sum {
            return Err(Error::Divergence { worker_id });
        }
    }

    Ok(IterationOutcome {
        params,
        adam,
        pooled,
        episodes,
        final_epoch_stats,
        timesteps: workers * cfg.segment_len,
    })
}

/// GAE per worker segment, concatenation in worker order, then one global
/// advantage normalization.
pub fn pool_segments(segments: &[RolloutSegment], gamma: f64, lambda: f64) -> Result<PooledBatch> {
    let obs_dim = segments[0].trajectory.observations[0].len();
    let act_dim = segments[0].trajectory.raw_actions[0].len();
    let total: usize = segments.iter().map(|s| s.trajectory.len()).sum();

    let mut pooled = PooledBatch {
        obs: Vec::with_capacity(total * obs_dim),
        actions: Vec::with_capacity(total * act_dim),
        old_logprobs: Vec::with_capacity(total),
        advantages: Vec::with_capacity(total),
        returns: Vec::with_capacity(total),
        values: Vec::with_capacity(total),
        obs_dim,
        act_dim,
    };
    for seg in segments {
        let AdvantageBatch {
            advantages,
            returns,
        } = gae(&seg.trajectory, gamma, lambda)?;
        for row in &seg.trajectory.observations {
            pooled.obs.extend_from_slice(row);
        }
        for row in &seg.trajectory.raw_actions {
            pooled.actions.extend_from_slice(row);
        }
        pooled.old_logprobs.extend_from_slice(&seg.trajectory.logprobs);
        pooled.advantages.extend(advantages);
        pooled.returns.extend(returns);
        pooled.values.extend_from_slice(&seg.trajectory.values);
    }

    let normalized = normalize_advantages(&AdvantageBatch {
        advantages: std::mem::take(&mut pooled.advantages),
        returns: std::mem::take(&mut pooled.returns),
    })?;
    pooled.advantages = normalized.advantages;
    pooled.returns = normalized.returns;
    Ok(pooled)
}
