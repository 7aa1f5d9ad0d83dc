use advantage::Trajectory;
use netcore::{ActorCritic, AdamState, ParamSet};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::env::{Env, EpisodeStat};
use crate::segment::RolloutSegment;
use crate::{Error, Result};

/// One rollout replica: environment, sampling RNG (seeded `seed + worker_id`),
/// and local copies of the parameters and optimizer state.
pub struct Worker {
    pub worker_id: usize,
    env: Box<dyn Env>,
    rng: ChaCha8Rng,
    policy: ActorCritic,
    pub params: ParamSet,
    pub adam: AdamState,
    current_obs: Vec<f64>,
    episode_len: usize,
    episode_reward: f64,
}

impl Worker {
    pub fn new(
        worker_id: usize,
        mut env: Box<dyn Env>,
        policy: ActorCritic,
        params: ParamSet,
        run_seed: u64,
    ) -> Self {
        let current_obs = env.reset();
        let adam = AdamState::new(params.len());
        Self {
            worker_id,
            env,
            rng: ChaCha8Rng::seed_from_u64(run_seed.wrapping_add(worker_id as u64)),
            policy,
            params,
            adam,
            current_obs,
            episode_len: 0,
            episode_reward: 0.0,
        }
    }

    pub fn set_params(&mut self, params: ParamSet) {
        self.params = params;
    }

    /// Steps the environment for exactly `len` steps with stochastic policy
    /// samples, resetting on episode ends. Episodes left unfinished at the
    /// cut are bootstrapped with the critic's value of the next state.
    pub fn collect_segment(&mut self, len: usize) -> Result<RolloutSegment> {
        let fault = |worker_id: usize, message: String| Error::WorkerFault { worker_id, message };
        let mut traj = Trajectory {
            observations: Vec::with_capacity(len),
            raw_actions: Vec::with_capacity(len),
            logprobs: Vec::with_capacity(len),
            rewards: Vec::with_capacity(len),
            values: Vec::with_capacity(len),
            terminal_flags: Vec::with_capacity(len),
            bootstrap_value: 0.0,
        };
        let mut boundaries = Vec::new();
        let mut episodes = Vec::new();

        for t in 0..len {
            let obs = self.current_obs.clone();
            let (action, logprob) = self
                .policy
                .policy_sample(&self.params, &obs, &mut self.rng)
                .map_err(|e| fault(self.worker_id, e.to_string()))?;
            let value = self
                .policy
                .value(&self.params, &obs)
                .map_err(|e| fault(self.worker_id, e.to_string()))?;
            let step = self
                .env
                .step(&action)
                .map_err(|message| fault(self.worker_id, message))?;

            self.episode_len += 1;
            self.episode_reward += step.reward;

            traj.observations.push(obs);
            traj.raw_actions.push(action);
            traj.logprobs.push(logprob);
            traj.rewards.push(step.reward);
            traj.values.push(value);
            traj.terminal_flags.push(step.terminal.is_some());

            if let Some(end) = step.terminal {
                boundaries.push(t + 1);
                episodes.push(EpisodeStat {
                    worker_id: self.worker_id,
                    length: self.episode_len,
                    total_reward: self.episode_reward,
                    end,
                });
                self.episode_len = 0;
                self.episode_reward = 0.0;
                self.current_obs = self.env.reset();
            } else {
                self.current_obs = step.obs;
            }
        }

        traj.bootstrap_value = if *traj.terminal_flags.last().unwrap() {
            0.0
        } else {
            self.policy
                .value(&self.params, &self.current_obs)
                .map_err(|e| fault(self.worker_id, e.to_string()))?
        };

        Ok(RolloutSegment {
            trajectory: traj,
            episode_boundaries: boundaries,
            episodes,
        })
    }
}
