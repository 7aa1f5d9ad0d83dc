use netcore::{ActorCritic, ParamSet};
use rollout::{GradProvider, PooledBatch};

use crate::update::{explained_variance, UpdateStats};
use crate::{Error, Result, TrainerConfig};

/// Order of the flat diagnostic stats exchanged at the gradient barrier.
pub const STAT_FIELDS: [&str; 5] = [
    "policy_loss",
    "value_loss",
    "entropy",
    "clip_fraction",
    "approx_kl",
];

struct Accum {
    policy_loss: f64,
    value_loss: f64,
    clip_count: usize,
    kl_sum: f64,
}

/// Core of the clipped objective over the chosen rows.
///
/// ratio = exp(logprob_new - logprob_old); the policy term is
/// -mean(min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A)); the value term
/// is the mean squared error of the critic against the returns; the total is
/// policy + value_loss_coef * value - entropy_coef * entropy.
fn eval(
    policy: &ActorCritic,
    params: &ParamSet,
    batch: &PooledBatch,
    rows: &[usize],
    cfg: &TrainerConfig,
    mut grad: Option<&mut [f64]>,
) -> Result<(Accum, f64)> {
    let n = rows.len() as f64;
    let eps = cfg.clip_epsilon;
    let act_dim = policy.act_dim();
    let log_std = policy.log_std(params).to_vec();
    let mut acc = Accum {
        policy_loss: 0.0,
        value_loss: 0.0,
        clip_count: 0,
        kl_sum: 0.0,
    };
    let mut d_mean = vec![0.0; act_dim];

    for &i in rows {
        let obs = batch.obs_row(i);
        let action = batch.action_row(i);
        let advantage = batch.advantages[i];

        let (mean, actor_trace) = policy.actor_forward_traced(params, obs);
        let mut logprob = 0.0;
        for j in 0..act_dim {
            let sigma = log_std[j].exp();
            let z = (action[j] - mean[j]) / sigma;
            logprob += -log_std[j] - 0.5 * netcore::LN_2PI - 0.5 * z * z;
        }
        let ratio = (logprob - batch.old_logprobs[i]).exp();
        let unclipped = ratio * advantage;
        let clipped = ratio.clamp(1.0 - eps, 1.0 + eps) * advantage;
        acc.policy_loss += -unclipped.min(clipped) / n;
        if (ratio - 1.0).abs() > eps {
            acc.clip_count += 1;
        }
        acc.kl_sum += (ratio - 1.0) - ratio.ln();

        let (value_out, critic_trace) = policy.critic_forward_traced(params, obs);
        let value_err = value_out[0] - batch.returns[i];
        acc.value_loss += value_err * value_err / n;

        if let Some(g) = grad.as_deref_mut() {
            // d policy / d ratio: the unclipped branch when it is the min,
            // zero when the clipped branch saturates.
            let d_ratio = if unclipped <= clipped { -advantage / n } else { 0.0 };
            let d_logprob = d_ratio * ratio;
            if d_logprob != 0.0 {
                let log_std_off = policy.log_std_offset();
                for j in 0..act_dim {
                    let sigma = log_std[j].exp();
                    let z = (action[j] - mean[j]) / sigma;
                    d_mean[j] = d_logprob * z / sigma;
                    g[log_std_off + j] += d_logprob * (z * z - 1.0);
                }
                policy.actor_backprop(params, &actor_trace, &d_mean, g);
            }
            let d_value = cfg.value_loss_coef * 2.0 * value_err / n;
            policy.critic_backprop(params, &critic_trace, d_value, g);
        }
    }

    let entropy: f64 = log_std
        .iter()
        .map(|ls| ls + 0.5 * (netcore::LN_2PI + 1.0))
        .sum();
    if let Some(g) = grad {
        let log_std_off = policy.log_std_offset();
        for j in 0..act_dim {
            g[log_std_off + j] -= cfg.entropy_coef;
        }
    }
    Ok((acc, entropy))
}

fn stats_from(acc: &Accum, entropy: f64, n: usize, ev: f64) -> UpdateStats {
    UpdateStats {
        policy_loss: acc.policy_loss,
        value_loss: acc.value_loss,
        entropy,
        clip_fraction: acc.clip_count as f64 / n as f64,
        approx_kl: acc.kl_sum / n as f64,
        explained_variance: ev,
    }
}

fn total(acc: &Accum, entropy: f64, cfg: &TrainerConfig) -> Result<f64> {
    let loss = acc.policy_loss + cfg.value_loss_coef * acc.value_loss - cfg.entropy_coef * entropy;
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss);
    }
    Ok(loss)
}

/// Loss value and diagnostics over the given rows.
pub fn surrogate_loss(
    policy: &ActorCritic,
    params: &ParamSet,
    batch: &PooledBatch,
    rows: &[usize],
    cfg: &TrainerConfig,
) -> Result<(f64, UpdateStats)> {
    let (acc, entropy) = eval(policy, params, batch, rows, cfg, None)?;
    let ev = row_explained_variance(batch, rows);
    Ok((
        total(&acc, entropy, cfg)?,
        stats_from(&acc, entropy, rows.len(), ev),
    ))
}

/// Loss, exact reverse-mode gradient, and diagnostics over the given rows.
pub fn surrogate_loss_grad(
    policy: &ActorCritic,
    params: &ParamSet,
    batch: &PooledBatch,
    rows: &[usize],
    cfg: &TrainerConfig,
) -> Result<(f64, Vec<f64>, UpdateStats)> {
    let mut grad = vec![0.0; params.len()];
    let (acc, entropy) = eval(policy, params, batch, rows, cfg, Some(&mut grad))?;
    if grad.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteLoss);
    }
    let ev = row_explained_variance(batch, rows);
    Ok((
        total(&acc, entropy, cfg)?,
        grad,
        stats_from(&acc, entropy, rows.len(), ev),
    ))
}

fn row_explained_variance(batch: &PooledBatch, rows: &[usize]) -> f64 {
    let returns: Vec<f64> = rows.iter().map(|&i| batch.returns[i]).collect();
    let values: Vec<f64> = rows.iter().map(|&i| batch.values[i]).collect();
    explained_variance(&returns, &values)
}

/// Bridges the surrogate gradient into the worker pool's minibatch barrier.
pub struct SurrogateProvider {
    pub policy: ActorCritic,
    pub config: TrainerConfig,
}

impl GradProvider for SurrogateProvider {
    fn minibatch_grad(
        &self,
        params: &ParamSet,
        batch: &PooledBatch,
        rows: &[usize],
    ) -> std::result::Result<(Vec<f64>, Vec<f64>), String> {
        surrogate_loss_grad(&self.policy, params, batch, rows, &self.config)
            .map(|(_, grad, stats)| {
                (
                    grad,
                    vec![
                        stats.policy_loss,
                        stats.value_loss,
                        stats.entropy,
                        stats.clip_fraction,
                        stats.approx_kl,
                    ],
                )
            })
            .map_err(|e| e.to_string())
    }
}
