use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::layout::LayerLayout;
use crate::mlp::{backprop, forward_traced, forward_untraced, push_net_init, ForwardTrace, NetOffsets};
use crate::params::{ParamSet, TensorSpec};
use crate::{Error, Result, LN_2PI};

/// Mean and state-independent log standard deviation of the action
/// distribution at one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolicyOutput {
    pub mean: Vec<f64>,
    pub log_std: Vec<f64>,
}

/// Actor and critic networks over one flat parameter vector.
///
/// Both networks use the same hidden layout (64, 64, tanh by default) but do
/// not share parameters: the manifest holds the actor's layers, the policy
/// log-std vector, then the critic's layers. All offsets are resolved at
/// construction so per-sample calls stay away from the manifest.
#[derive(Debug, Clone)]
pub struct ActorCritic {
    obs_dim: usize,
    act_dim: usize,
    actor_layout: LayerLayout,
    critic_layout: LayerLayout,
    manifest: Vec<TensorSpec>,
    actor_net: NetOffsets,
    critic_net: NetOffsets,
    log_std_offset: usize,
    param_len: usize,
}

impl ActorCritic {
    pub fn new(obs_dim: usize, act_dim: usize) -> Self {
        Self::with_hidden(obs_dim, act_dim, &[64, 64])
    }

    pub fn with_hidden(obs_dim: usize, act_dim: usize, hidden: &[usize]) -> Self {
        let actor_layout = LayerLayout::new(obs_dim, hidden.to_vec(), act_dim);
        let critic_layout = LayerLayout::new(obs_dim, hidden.to_vec(), 1);
        actor_layout.validate().expect("actor layout");
        critic_layout.validate().expect("critic layout");

        let mut manifest = Vec::new();
        let mut offset = 0;
        let push_net = |layout: &LayerLayout, prefix: &str, manifest: &mut Vec<TensorSpec>, offset: &mut usize| {
            let mut layers = Vec::new();
            for (i, (rows, cols)) in layout.layer_dims().into_iter().enumerate() {
                manifest.push(TensorSpec {
                    name: format!("{prefix}l{i}/w"),
                    shape: vec![rows, cols],
                    offset: *offset,
                });
                let w = *offset;
                *offset += rows * cols;
                manifest.push(TensorSpec {
                    name: format!("{prefix}l{i}/b"),
                    shape: vec![rows],
                    offset: *offset,
                });
                let b = *offset;
                *offset += rows;
                layers.push((w, b, rows, cols));
            }
            NetOffsets { layers }
        };

        let actor_net = push_net(&actor_layout, "actor/", &mut manifest, &mut offset);
        let log_std_offset = offset;
        manifest.push(TensorSpec {
            name: "actor/log_std".into(),
            shape: vec![act_dim],
            offset,
        });
        offset += act_dim;
        let critic_net = push_net(&critic_layout, "critic/", &mut manifest, &mut offset);

        Self {
            obs_dim,
            act_dim,
            actor_layout,
            critic_layout,
            manifest,
            actor_net,
            critic_net,
            log_std_offset,
            param_len: offset,
        }
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn act_dim(&self) -> usize {
        self.act_dim
    }

    pub fn param_len(&self) -> usize {
        self.param_len
    }

    pub fn actor_layout(&self) -> &LayerLayout {
        &self.actor_layout
    }

    pub fn critic_layout(&self) -> &LayerLayout {
        &self.critic_layout
    }

    pub fn log_std_offset(&self) -> usize {
        self.log_std_offset
    }

    /// Draws fresh parameters: row-normalized Gaussian weights (norm 1.0
    /// hidden, 0.01 at both output heads), zero biases, zero log-std.
    pub fn init_params(&self, seed: u64) -> ParamSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(self.param_len);
        let mut manifest = Vec::new();
        push_net_init(&self.actor_layout, "actor/", &mut rng, &mut values, &mut manifest);
        manifest.push(TensorSpec {
            name: "actor/log_std".into(),
            shape: vec![self.act_dim],
            offset: values.len(),
        });
        values.extend(std::iter::repeat_n(0.0, self.act_dim));
        push_net_init(&self.critic_layout, "critic/", &mut rng, &mut values, &mut manifest);
        ParamSet::new(values, manifest).expect("manifest consistent by construction")
    }

    pub fn check_params(&self, params: &ParamSet) -> Result<()> {
        if params.len() != self.param_len {
            return Err(Error::LengthMismatch {
                expected: self.param_len,
                got: params.len(),
            });
        }
        Ok(())
    }

    fn check_obs(&self, obs: &[f64]) -> Result<()> {
        if obs.len() != self.obs_dim {
            return Err(Error::WidthMismatch {
                expected: self.obs_dim,
                got: obs.len(),
            });
        }
        Ok(())
    }

    pub fn log_std<'p>(&self, params: &'p ParamSet) -> &'p [f64] {
        &params.values()[self.log_std_offset..self.log_std_offset + self.act_dim]
    }

    pub fn policy_output(&self, params: &ParamSet, obs: &[f64]) -> Result<GaussianPolicyOutput> {
        self.check_params(params)?;
        self.check_obs(obs)?;
        Ok(GaussianPolicyOutput {
            mean: forward_untraced(params, &self.actor_net, obs),
            log_std: self.log_std(params).to_vec(),
        })
    }

    /// Deterministic action: the Gaussian mean.
    pub fn policy_mean(&self, params: &ParamSet, obs: &[f64]) -> Result<Vec<f64>> {
        self.check_params(params)?;
        self.check_obs(obs)?;
        Ok(forward_untraced(params, &self.actor_net, obs))
    }

    pub fn value(&self, params: &ParamSet, obs: &[f64]) -> Result<f64> {
        self.check_params(params)?;
        self.check_obs(obs)?;
        Ok(forward_untraced(params, &self.critic_net, obs)[0])
    }

    /// Samples a raw (unclamped) action and returns its log-probability
    /// under the current diagonal Gaussian.
    pub fn policy_sample(
        &self,
        params: &ParamSet,
        obs: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> Result<(Vec<f64>, f64)> {
        let out = self.policy_output(params, obs)?;
        let mut action = Vec::with_capacity(self.act_dim);
        for j in 0..self.act_dim {
            let z: f64 = rng.sample(StandardNormal);
            action.push(out.mean[j] + out.log_std[j].exp() * z);
        }
        let logprob = diag_gaussian_logprob(&out.mean, &out.log_std, &action);
        Ok((action, logprob))
    }

    /// Log-probability of a given raw action plus the policy entropy.
    /// Entropy depends only on the log-std vector, never on the observation.
    pub fn policy_logprob_entropy(
        &self,
        params: &ParamSet,
        obs: &[f64],
        raw_action: &[f64],
    ) -> Result<(f64, f64)> {
        if raw_action.len() != self.act_dim {
            return Err(Error::WidthMismatch {
                expected: self.act_dim,
                got: raw_action.len(),
            });
        }
        let out = self.policy_output(params, obs)?;
        let logprob = diag_gaussian_logprob(&out.mean, &out.log_std, raw_action);
        let entropy = diag_gaussian_entropy(&out.log_std);
        Ok((logprob, entropy))
    }

    // Traced primitives for the surrogate-loss gradient.

    pub fn actor_forward_traced(&self, params: &ParamSet, obs: &[f64]) -> (Vec<f64>, ForwardTrace) {
        forward_traced(params, &self.actor_net, obs)
    }

    pub fn critic_forward_traced(&self, params: &ParamSet, obs: &[f64]) -> (Vec<f64>, ForwardTrace) {
        forward_traced(params, &self.critic_net, obs)
    }

    pub fn actor_backprop(
        &self,
        params: &ParamSet,
        trace: &ForwardTrace,
        d_mean: &[f64],
        grad: &mut [f64],
    ) {
        backprop(params, &self.actor_net, trace, d_mean, grad);
    }

    pub fn critic_backprop(
        &self,
        params: &ParamSet,
        trace: &ForwardTrace,
        d_value: f64,
        grad: &mut [f64],
    ) {
        backprop(params, &self.critic_net, trace, &[d_value], grad);
    }

    pub fn manifest(&self) -> &[TensorSpec] {
        &self.manifest
    }
}

pub fn diag_gaussian_logprob(mean: &[f64], log_std: &[f64], x: &[f64]) -> f64 {
    let mut lp = 0.0;
    for j in 0..mean.len() {
        let z = (x[j] - mean[j]) / log_std[j].exp();
        lp += -log_std[j] - 0.5 * LN_2PI - 0.5 * z * z;
    }
    lp
}

pub fn diag_gaussian_entropy(log_std: &[f64]) -> f64 {
    log_std.iter().map(|ls| ls + 0.5 * (LN_2PI + 1.0)).sum()
}
