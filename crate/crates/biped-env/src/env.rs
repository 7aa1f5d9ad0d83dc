use physics2d::{Vec2, WorldState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rollout::{Env, EnvStep, EpisodeEnd};

use crate::config::{BipedConfig, Task};
use crate::obs::{
    fill_rates, Observation, FORCE_SCALE, IDX_GENERAL_COUNTER, IDX_LEFT_FOOT_COUNTER,
    IDX_RIGHT_FOOT_COUNTER, IDX_TORSO_HEIGHT, IDX_TORSO_PITCH, OBS_DIM,
};
use crate::robot::{assemble_biped, joint_limits, BODY_TORSO, CROUCH_POSE, FOOT_BODIES};
use crate::{Error, Result};

/// Everything a caller may want to know about one control cycle.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub torso_x: f64,
    pub torso_z: f64,
    pub fell: bool,
    pub reached_finish: bool,
    pub episode_step: usize,
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub observation: Observation,
    /// Forward distance traveled this cycle, meters.
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// The planar biped sprint MDP. One `env_step` advances a 20 ms control
/// cycle (four 5 ms physics substeps) with motor commands held.
pub struct BipedEnv {
    config: BipedConfig,
    world: WorldState,
    rng: ChaCha8Rng,
    episode_step: usize,
    steps_since_touch: [usize; 2],
    prev_features: Vec<f64>,
    prev_torso_velocity: Vec2,
    done: bool,
}

impl BipedEnv {
    pub fn new(config: BipedConfig, seed: u64) -> Self {
        let world = assemble_biped(&config, &[CROUCH_POSE, CROUCH_POSE]);
        // Salted so an env seeded with `seed + worker_id` never shares a
        // stream with the worker's sampling RNG seeded the same way.
        Self {
            config,
            world,
            rng: ChaCha8Rng::seed_from_u64(seed ^ 0x0b1_9ed_e27),
            episode_step: 0,
            steps_since_touch: [0, 0],
            prev_features: vec![0.0; OBS_DIM],
            prev_torso_velocity: Vec2::ZERO,
            done: false,
        }
    }

    pub fn config(&self) -> &BipedConfig {
        &self.config
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn torso_x(&self) -> f64 {
        self.world.bodies[BODY_TORSO].position.x
    }

    pub fn torso_z(&self) -> f64 {
        self.world.bodies[BODY_TORSO].position.z
    }

    /// Rebuilds the robot in the declared crouch (optionally jittered),
    /// zeroes all counters, and primes the previous-feature buffer so every
    /// rate-of-change entry starts at zero.
    pub fn reset_env(&mut self) -> Observation {
        let mut pose = [CROUCH_POSE, CROUCH_POSE];
        if self.config.reset_noise_rad > 0.0 {
            let n = self.config.reset_noise_rad;
            for leg in pose.iter_mut() {
                for q in leg.iter_mut() {
                    *q += self.rng.random_range(-n..=n);
                }
            }
        }
        self.world = assemble_biped(&self.config, &pose);
        self.episode_step = 0;
        self.steps_since_touch = [0, 0];
        self.prev_torso_velocity = Vec2::ZERO;
        self.done = false;

        let mut obs = self.base_features();
        self.prev_features.copy_from_slice(&obs);
        fill_rates(&mut obs, &self.prev_features, self.config.control_dt);
        obs
    }

    /// Maps 6 raw network outputs onto motor velocity commands: clamp to
    /// [-1, 1], project linearly onto each joint range, track the target
    /// with the proportional controller, saturate at the motor limit.
    pub fn map_action(&self, raw: &[f64]) -> [f64; 6] {
        let mut commands = [0.0; 6];
        for j in 0..6 {
            let (lo, hi) = joint_limits(j);
            let a = raw[j].clamp(-1.0, 1.0);
            let target = lo + (a + 1.0) / 2.0 * (hi - lo);
            let current = self.world.joint_angle(j);
            let omega = self.config.k_proportional * (target - current);
            commands[j] = omega.clamp(-crate::robot::MAX_MOTOR_VELOCITY, crate::robot::MAX_MOTOR_VELOCITY);
        }
        commands
    }

    pub fn env_step(&mut self, raw_action: &[f64]) -> Result<StepResult> {
        if self.done {
            return Err(Error::EpisodeFinished);
        }
        let commands = self.map_action(raw_action);
        let x_before = self.torso_x();

        self.world.begin_cycle();
        let substeps = 4;
        let sub_dt = self.config.control_dt / substeps as f64;
        for _ in 0..substeps {
            self.world.step_in_place(sub_dt, &commands)?;
        }
        self.episode_step += 1;

        for (side, &foot) in FOOT_BODIES.iter().enumerate() {
            let touched = self.world.cycle_contacts.iter().any(|c| c.body == foot);
            if touched {
                self.steps_since_touch[side] = 0;
            } else {
                self.steps_since_touch[side] += 1;
            }
        }

        let reward = self.torso_x() - x_before;
        let mut obs = self.base_features();
        fill_rates(&mut obs, &self.prev_features, self.config.control_dt);
        self.prev_features.copy_from_slice(&obs);
        self.prev_torso_velocity = self.world.bodies[BODY_TORSO].linear_velocity;

        let fell = self.torso_z() < self.config.fall_height_threshold;
        let reached_finish = self.torso_x() >= self.config.finish_x;
        let horizon = match self.config.task {
            Task::SprintTask1 => self.config.safety_cap_steps,
            Task::SprintTask2 => self.config.task2_horizon,
        };
        let horizon_hit = self.episode_step >= horizon;
        let done = match self.config.task {
            Task::SprintTask1 => fell || reached_finish || horizon_hit,
            Task::SprintTask2 => fell || horizon_hit,
        };
        self.done = done;

        Ok(StepResult {
            observation: obs,
            reward,
            done,
            info: StepInfo {
                torso_x: self.torso_x(),
                torso_z: self.torso_z(),
                fell,
                reached_finish: !fell && reached_finish,
                episode_step: self.episode_step,
            },
        })
    }

    /// Termination cause with the precedence fell > finish > horizon/cap,
    /// so `done` always maps to exactly one cause.
    pub fn episode_end(&self, info: &StepInfo) -> Option<EpisodeEnd> {
        if !self.done {
            return None;
        }
        if info.fell {
            Some(EpisodeEnd::Fell)
        } else if info.reached_finish {
            Some(EpisodeEnd::ReachedFinish)
        } else if self.config.task == Task::SprintTask2 {
            Some(EpisodeEnd::HorizonHit)
        } else {
            Some(EpisodeEnd::SafetyCap)
        }
    }

    fn base_features(&self) -> Vec<f64> {
        let dt = self.config.control_dt;
        let torso = &self.world.bodies[BODY_TORSO];
        let com = self.world.center_of_mass();
        let mut f = vec![0.0; OBS_DIM];
        for (j, slot) in f.iter_mut().enumerate().take(6) {
            *slot = self.world.joint_angle(j);
        }
        f[IDX_GENERAL_COUNTER] = self.episode_step as f64 * dt;
        f[IDX_LEFT_FOOT_COUNTER] = self.steps_since_touch[0] as f64 * dt;
        f[IDX_RIGHT_FOOT_COUNTER] = self.steps_since_touch[1] as f64 * dt;
        f[IDX_TORSO_HEIGHT] = torso.position.z;
        f[IDX_TORSO_PITCH] = torso.angle;
        f[11] = com.x - torso.position.x;
        f[12] = com.z;
        f[13] = torso.angular_velocity;
        f[14] = (torso.linear_velocity.x - self.prev_torso_velocity.x) / dt;
        f[15] = (torso.linear_velocity.z - self.prev_torso_velocity.z) / dt;
        for (side, &foot) in FOOT_BODIES.iter().enumerate() {
            let p = self
                .world
                .foot_pressure(foot, dt)
                .expect("foot body index is valid");
            let base = 16 + side * 3;
            f[base] = p.force.x / FORCE_SCALE;
            f[base + 1] = p.force.z / FORCE_SCALE;
            f[base + 2] = p.center_of_pressure_x;
        }
        f
    }
}

impl Env for BipedEnv {
    fn obs_dim(&self) -> usize {
        OBS_DIM
    }

    fn act_dim(&self) -> usize {
        6
    }

    fn reset(&mut self) -> Vec<f64> {
        self.reset_env()
    }

    fn step(&mut self, action: &[f64]) -> std::result::Result<EnvStep, String> {
        let result = self.env_step(action).map_err(|e| e.to_string())?;
        let terminal = self.episode_end(&result.info);
        Ok(EnvStep {
            obs: result.observation,
            reward: result.reward,
            terminal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obs::IDX_RATE_START;

    fn env() -> BipedEnv {
        BipedEnv::new(BipedConfig::default(), 7)
    }

    /// Raw action whose target equals the current pose, so every motor
    /// command is a zero velocity: the "stationary" input.
    fn hold_action(env: &BipedEnv) -> [f64; 6] {
        let mut raw = [0.0; 6];
        for (j, slot) in raw.iter_mut().enumerate() {
            let (lo, hi) = joint_limits(j);
            let q = env.world.joint_angle(j);
            *slot = 2.0 * (q - lo) / (hi - lo) - 1.0;
        }
        raw
    }

    #[test]
    fn reset_counters_and_rates_are_zero() {
        let mut e = env();
        let obs = e.reset_env();
        assert_eq!(obs.len(), OBS_DIM);
        assert_eq!(obs[IDX_GENERAL_COUNTER], 0.0);
        assert_eq!(obs[IDX_LEFT_FOOT_COUNTER], 0.0);
        assert_eq!(obs[IDX_RIGHT_FOOT_COUNTER], 0.0);
        for (k, v) in obs.iter().enumerate().skip(IDX_RATE_START) {
            assert_eq!(*v, 0.0, "rate slot {k}");
        }
        assert!((0.35..=0.42).contains(&obs[9]), "torso height {}", obs[9]);
    }

    #[test]
    fn holding_still_gives_near_zero_reward() {
        let mut e = env();
        e.reset_env();
        let mut total = 0.0;
        for _ in 0..50 {
            let raw = hold_action(&e);
            let r = e.env_step(&raw).unwrap();
            total += r.reward;
            assert!(!r.done, "fell while holding still");
        }
        assert!(total.abs() < 5e-3, "drifted {total} m while holding");
        let raw = hold_action(&e);
        let r = e.env_step(&raw).unwrap();
        assert!(r.reward.abs() < 1e-4, "per-cycle reward {}", r.reward);
    }

    #[test]
    fn general_counter_is_exact_multiples() {
        let mut e = env();
        e.reset_env();
        let raw = hold_action(&e);
        for n in 1..=10 {
            let r = e.env_step(&raw).unwrap();
            assert_eq!(r.observation[IDX_GENERAL_COUNTER], n as f64 * 0.020);
        }
    }

    #[test]
    fn grounded_feet_keep_zero_counters() {
        let mut e = env();
        e.reset_env();
        let raw = hold_action(&e);
        let r = e.env_step(&raw).unwrap();
        assert_eq!(r.observation[IDX_LEFT_FOOT_COUNTER], 0.0);
        assert_eq!(r.observation[IDX_RIGHT_FOOT_COUNTER], 0.0);
    }

    #[test]
    fn map_action_zero_error_zero_command() {
        let e = env();
        let raw = hold_action(&e);
        let cmds = e.map_action(&raw);
        for (j, c) in cmds.iter().enumerate() {
            assert!(c.abs() < 1e-12, "joint {j} command {c}");
        }
    }

    #[test]
    fn map_action_k7_unsaturated_and_saturated() {
        let e = env();
        // Target 0.5 rad above current on the left hip: omega = 3.5.
        let (lo, hi) = joint_limits(0);
        let current = e.world.joint_angle(0);
        let target = current + 0.5;
        let mut raw = hold_action(&e);
        raw[0] = 2.0 * (target - lo) / (hi - lo) - 1.0;
        let cmds = e.map_action(&raw);
        assert!((cmds[0] - 3.5).abs() < 1e-9, "omega {}", cmds[0]);

        // Error of 2.0 rad saturates at 6.14.
        let target = current + 2.0;
        raw[0] = 2.0 * (target - lo) / (hi - lo) - 1.0;
        let cmds = e.map_action(&raw);
        assert!((cmds[0] - 6.14).abs() < 1e-9, "omega {}", cmds[0]);
    }

    #[test]
    fn map_action_clamp_is_idempotent() {
        let e = env();
        let raw = [3.0f64, -3.0, 0.2, 0.9, -0.9, 0.0];
        let clamped: Vec<f64> = raw.iter().map(|a| a.clamp(-1.0, 1.0)).collect();
        assert_eq!(e.map_action(&raw), e.map_action(&clamped));
    }

    #[test]
    fn task2_stops_at_exactly_400_steps() {
        let cfg = BipedConfig {
            task: Task::SprintTask2,
            ..BipedConfig::default()
        };
        let mut e = BipedEnv::new(cfg, 1);
        e.reset_env();
        let mut steps = 0;
        loop {
            let raw = hold_action(&e);
            let r = e.env_step(&raw).unwrap();
            steps += 1;
            if r.done {
                assert_eq!(steps, 400);
                assert_eq!(r.info.episode_step, 400);
                assert!(e.episode_end(&r.info) == Some(EpisodeEnd::HorizonHit));
                break;
            }
            assert!(steps <= 400, "ran past the horizon");
        }
        let raw = hold_action(&e);
        assert!(matches!(e.env_step(&raw), Err(Error::EpisodeFinished)));
    }

    #[test]
    fn cumulative_reward_telescopes_to_displacement() {
        let mut e = env();
        e.reset_env();
        let start = e.torso_x();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut total = 0.0;
        loop {
            let raw: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r = e.env_step(&raw).unwrap();
            total += r.reward;
            if r.done {
                break;
            }
        }
        assert!((total - (e.torso_x() - start)).abs() < 1e-9);
    }

    #[test]
    fn random_policy_falls_and_reports_fell() {
        let mut e = env();
        e.reset_env();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        loop {
            let raw: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r = e.env_step(&raw).unwrap();
            if r.done {
                assert!(r.info.fell, "random flailing should end in a fall");
                assert_eq!(e.episode_end(&r.info), Some(EpisodeEnd::Fell));
                break;
            }
        }
    }

    #[test]
    fn erect_threshold_terminates_no_later() {
        // Same action stream under both thresholds; 0.33 must cut at or
        // before the 0.27 run's step count.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let actions: Vec<Vec<f64>> = (0..2000)
            .map(|_| (0..6).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let steps_until_done = |threshold: f64| {
            let cfg = BipedConfig {
                fall_height_threshold: threshold,
                ..BipedConfig::default()
            };
            let mut e = BipedEnv::new(cfg, 0);
            e.reset_env();
            for (i, a) in actions.iter().enumerate() {
                if e.env_step(a).unwrap().done {
                    return i + 1;
                }
            }
            panic!("episode never ended");
        };
        assert!(steps_until_done(0.33) <= steps_until_done(0.27));
    }

    #[test]
    fn rate_features_recompute_from_logged_bases() {
        let mut e = env();
        let first = e.reset_env();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut prev = first;
        for _ in 0..5 {
            let raw: Vec<f64> = (0..6).map(|_| rng.random_range(-0.5..0.5)).collect();
            let r = e.env_step(&raw).unwrap();
            for (k, &base) in crate::obs::RATE_BASE_INDICES.iter().enumerate() {
                let expect = (r.observation[base] - prev[base]) / 0.020;
                let got = r.observation[IDX_RATE_START + k];
                assert!(
                    (got - expect).abs() < 1e-12,
                    "rate slot {k}: {got} vs {expect}"
                );
            }
            prev = r.observation;
        }
    }
}
