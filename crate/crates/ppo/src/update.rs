use netcore::{adam_step, ActorCritic, AdamState, ParamSet};
use rollout::{epoch_permutation, PooledBatch};

use crate::surrogate::surrogate_loss_grad;
use crate::{Error, Result, TrainerConfig};

/// Diagnostics of one update.
#[derive(Debug, Clone, Copy, Default)]
pub struct UpdateStats {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    pub explained_variance: f64,
}

/// 1 - Var(returns - values) / Var(returns); zero when returns are constant.
pub fn explained_variance(returns: &[f64], values: &[f64]) -> f64 {
    let n = returns.len() as f64;
    if returns.is_empty() {
        return 0.0;
    }
    let mean_r = returns.iter().sum::<f64>() / n;
    let var_r = returns.iter().map(|r| (r - mean_r) * (r - mean_r)).sum::<f64>() / n;
    if var_r < 1e-12 {
        return 0.0;
    }
    let errs: Vec<f64> = returns.iter().zip(values).map(|(r, v)| r - v).collect();
    let mean_e = errs.iter().sum::<f64>() / n;
    let var_e = errs.iter().map(|e| (e - mean_e) * (e - mean_e)).sum::<f64>() / n;
    1.0 - var_e / var_r
}

/// Single-process clipped-surrogate update: `optimization_epochs` passes of
/// seeded shuffles over the pooled batch, one Adam step per minibatch.
/// Returns the final-epoch mean stats. The shuffle derivation matches what
/// worker replicas use, so one worker reproduces this bitwise.
pub fn ppo_update(
    policy: &ActorCritic,
    params: &ParamSet,
    adam: &AdamState,
    batch: &PooledBatch,
    cfg: &TrainerConfig,
    iteration: u64,
) -> Result<(ParamSet, AdamState, UpdateStats)> {
    let len = batch.len();
    if !len.is_multiple_of(cfg.minibatch_size) {
        return Err(Error::BatchMismatch {
            batch: len,
            minibatch: cfg.minibatch_size,
        });
    }
    let minibatches = len / cfg.minibatch_size;
    let mut params = params.clone();
    let mut adam = adam.clone();
    let mut sums = [0.0; 5];

    for epoch in 0..cfg.optimization_epochs {
        let perm = epoch_permutation(cfg.seed, iteration, epoch as u64, len);
        for mb in 0..minibatches {
            let rows = &perm[mb * cfg.minibatch_size..(mb + 1) * cfg.minibatch_size];
            let (_, grad, stats) = surrogate_loss_grad(policy, &params, batch, rows, cfg)?;
            let (p, a) = adam_step(&params, &grad, &adam, cfg.learning_rate)?;
            params = p;
            adam = a;
            if epoch + 1 == cfg.optimization_epochs {
                sums[0] += stats.policy_loss;
                sums[1] += stats.value_loss;
                sums[2] += stats.entropy;
                sums[3] += stats.clip_fraction;
                sums[4] += stats.approx_kl;
            }
        }
    }

    let m = minibatches as f64;
    let stats = UpdateStats {
        policy_loss: sums[0] / m,
        value_loss: sums[1] / m,
        entropy: sums[2] / m,
        clip_fraction: sums[3] / m,
        approx_kl: sums[4] / m,
        explained_variance: explained_variance(&batch.returns, &batch.values),
    };
    Ok((params, adam, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use netcore::ActorCritic;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn batch_with(
        policy: &ActorCritic,
        params: &ParamSet,
        n: usize,
        seed: u64,
        zeroed: bool,
    ) -> PooledBatch {
        let obs_dim = policy.obs_dim();
        let act_dim = policy.act_dim();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut batch = PooledBatch {
            obs: Vec::new(),
            actions: Vec::new(),
            old_logprobs: Vec::new(),
            advantages: Vec::new(),
            returns: Vec::new(),
            values: Vec::new(),
            obs_dim,
            act_dim,
        };
        for _ in 0..n {
            let obs: Vec<f64> = (0..obs_dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let action: Vec<f64> = (0..act_dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (lp, _) = policy.policy_logprob_entropy(params, &obs, &action).unwrap();
            let v = policy.value(params, &obs).unwrap();
            batch.obs.extend_from_slice(&obs);
            batch.actions.extend_from_slice(&action);
            batch.old_logprobs.push(lp);
            batch.values.push(v);
            if zeroed {
                batch.advantages.push(0.0);
                batch.returns.push(v);
            } else {
                batch.advantages.push(rng.random_range(-1.0..1.0));
                batch.returns.push(v + rng.random_range(-0.5..0.5));
            }
        }
        batch
    }

    #[test]
    fn zero_advantage_batch_leaves_params_fixed() {
        let policy = ActorCritic::with_hidden(3, 2, &[5]);
        let params = policy.init_params(1);
        let adam = AdamState::new(params.len());
        let batch = batch_with(&policy, &params, 16, 2, true);
        let cfg = TrainerConfig {
            minibatch_size: 8,
            worker_count: 1,
            ..TrainerConfig::default()
        };
        let (p2, _, _) = ppo_update(&policy, &params, &adam, &batch, &cfg, 0).unwrap();
        let change: f64 = params
            .values()
            .iter()
            .zip(p2.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(change < 1e-8, "parameter change {change}");
    }

    #[test]
    fn one_epoch_full_batch_equals_single_gradient_step() {
        let policy = ActorCritic::with_hidden(2, 1, &[4]);
        let params = policy.init_params(7);
        let adam = AdamState::new(params.len());
        let batch = batch_with(&policy, &params, 12, 8, false);
        let cfg = TrainerConfig {
            optimization_epochs: 1,
            minibatch_size: 12,
            worker_count: 1,
            ..TrainerConfig::default()
        };
        let (p2, _, _) = ppo_update(&policy, &params, &adam, &batch, &cfg, 3).unwrap();

        let rows = epoch_permutation(cfg.seed, 3, 0, 12);
        let (_, grad, _) = surrogate_loss_grad(&policy, &params, &batch, &rows, &cfg).unwrap();
        let (manual, _) = adam_step(&params, &grad, &adam, cfg.learning_rate).unwrap();
        for (a, b) in p2.values().iter().zip(manual.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stats_fields_are_present_and_finite() {
        let policy = ActorCritic::with_hidden(2, 1, &[4]);
        let params = policy.init_params(11);
        let adam = AdamState::new(params.len());
        let batch = batch_with(&policy, &params, 16, 12, false);
        let cfg = TrainerConfig {
            minibatch_size: 4,
            worker_count: 1,
            ..TrainerConfig::default()
        };
        let (_, _, stats) = ppo_update(&policy, &params, &adam, &batch, &cfg, 0).unwrap();
        for v in [
            stats.policy_loss,
            stats.value_loss,
            stats.entropy,
            stats.clip_fraction,
            stats.approx_kl,
            stats.explained_variance,
        ] {
            assert!(v.is_finite());
        }
        assert!((0.0..=1.0).contains(&stats.clip_fraction));
    }

    #[test]
    fn explained_variance_known_values() {
        assert_eq!(explained_variance(&[1.0, 1.0], &[0.0, 0.0]), 0.0);
        let r = [1.0, 2.0, 3.0, 4.0];
        assert!((explained_variance(&r, &r) - 1.0).abs() < 1e-15);
        let ev = explained_variance(&r, &[2.5, 2.5, 2.5, 2.5]);
        assert!(ev.abs() < 1e-12);
    }
}
