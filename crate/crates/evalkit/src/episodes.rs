use biped_env::{BipedConfig, BipedEnv};
use netcore::{ActorCritic, ParamSet};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rollout::EpisodeEnd;

use crate::Result;

/// Per-episode evaluation record: torso trace, synthesized lateral trace,
/// and the velocity summary.
#[derive(Debug, Clone)]
pub struct EpisodeRecord {
    /// Torso x per control cycle, starting point included.
    pub xs: Vec<f64>,
    pub zs: Vec<f64>,
    /// Synthesized lateral coordinate per cycle (see crate docs).
    pub ys: Vec<f64>,
    pub length: usize,
    pub terminal: EpisodeEnd,
    pub mean_velocity: f64,
    /// Maximum over a sliding 1.0 s window of windowed displacement per
    /// second; equals the mean for episodes shorter than the window.
    pub top_velocity: f64,
}

impl EpisodeRecord {
    pub fn final_displacement(&self) -> (f64, f64) {
        (
            self.xs.last().unwrap() - self.xs.first().unwrap(),
            self.ys.last().unwrap() - self.ys.first().unwrap(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub episodes: usize,
    /// Use the Gaussian mean instead of sampling.
    pub deterministic: bool,
    pub seed: u64,
    /// Heading-noise std, degrees per control cycle; 0 disables.
    pub heading_noise_deg: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            episodes: 1000,
            deterministic: true,
            seed: 0,
            heading_noise_deg: 0.05,
        }
    }
}

/// Mean and 1 s sliding-window top velocity from a per-cycle position trace.
pub fn velocity_from_positions(xs: &[f64], dt: f64) -> (f64, f64) {
    if xs.len() < 2 {
        return (0.0, 0.0);
    }
    let elapsed = (xs.len() - 1) as f64 * dt;
    let mean = (xs.last().unwrap() - xs.first().unwrap()) / elapsed;
    let window = (1.0 / dt).round() as usize;
    if xs.len() - 1 <= window {
        return (mean, mean);
    }
    let mut top = f64::NEG_INFINITY;
    for t in 0..xs.len() - window {
        top = top.max((xs[t + window] - xs[t]) / (window as f64 * dt));
    }
    (mean, top)
}

/// Rolls the policy for `episodes` full episodes and records trajectories.
pub fn run_episodes(
    policy: &ActorCritic,
    params: &ParamSet,
    env_config: &BipedConfig,
    opts: &EvalOptions,
) -> Result<Vec<EpisodeRecord>> {
    let mut env = BipedEnv::new(env_config.clone(), opts.seed);
    let mut sample_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_5a17);
    let mut heading_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0bad_cafe);
    let normal = rand_distr::Normal::new(0.0, 1.0).expect("unit normal");
    let noise_rad = opts.heading_noise_deg.to_radians();
    let dt = env_config.control_dt;

    let mut records = Vec::with_capacity(opts.episodes);
    for _ in 0..opts.episodes {
        let mut obs = env.reset_env();
        let mut xs = vec![env.torso_x()];
        let mut zs = vec![env.torso_z()];
        let mut ys = vec![0.0];
        let mut heading = 0.0;
        let terminal;
        loop {
            let action = if opts.deterministic {
                policy.policy_mean(params, &obs)?
            } else {
                policy.policy_sample(params, &obs, &mut sample_rng)?.0
            };
            let result = env.env_step(&action)?;
            obs = result.observation;
            if noise_rad > 0.0 {
                heading += noise_rad * normal.sample(&mut heading_rng);
            }
            let dx = result.info.torso_x - xs.last().unwrap();
            ys.push(ys.last().unwrap() + dx * heading.sin());
            xs.push(result.info.torso_x);
            zs.push(result.info.torso_z);
            if result.done {
                terminal = env
                    .episode_end(&result.info)
                    .expect("done step has a cause");
                break;
            }
        }
        let (mean_velocity, top_velocity) = velocity_from_positions(&xs, dt);
        records.push(EpisodeRecord {
            length: xs.len() - 1,
            xs,
            zs,
            ys,
            terminal,
            mean_velocity,
            top_velocity,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_velocity_mean_equals_top() {
        let dt = 0.02;
        let xs: Vec<f64> = (0..=200).map(|i| 2.0 * i as f64 * dt).collect();
        let (mean, top) = velocity_from_positions(&xs, dt);
        assert!((mean - 2.0).abs() < 1e-9);
        assert!((top - 2.0).abs() < 1e-9);
    }

    #[test]
    fn burst_is_caught_by_the_window() {
        // 2 s at 1 m/s, 1 s at 4 m/s, 2 s at 1 m/s.
        let dt = 0.02;
        let mut xs = vec![0.0];
        for step in 0..250 {
            let v = if (100..150).contains(&step) { 4.0 } else { 1.0 };
            xs.push(xs.last().unwrap() + v * dt);
        }
        let (mean, top) = velocity_from_positions(&xs, dt);
        assert!((top - 4.0).abs() < 1e-9, "top {top}");
        assert!(mean < 4.0);
        assert!((mean - (4.0 + 4.0 * 0.5) / 5.0 * 250.0 * 0.02 / 5.0).abs() < 1.0);
    }

    #[test]
    fn velocity_is_invariant_to_translating_the_start_line() {
        let dt = 0.02;
        let xs: Vec<f64> = (0..=300)
            .map(|i| (i as f64 * dt * 1.3) + (i as f64 * 0.11).sin() * 0.02)
            .collect();
        let shifted: Vec<f64> = xs.iter().map(|x| x - 14.0).collect();
        let a = velocity_from_positions(&xs, dt);
        let b = velocity_from_positions(&shifted, dt);
        assert!((a.0 - b.0).abs() < 1e-12);
        assert!((a.1 - b.1).abs() < 1e-12);
    }

    #[test]
    fn short_episode_top_falls_back_to_mean() {
        let dt = 0.02;
        let xs: Vec<f64> = (0..=10).map(|i| 0.5 * i as f64 * dt).collect();
        let (mean, top) = velocity_from_positions(&xs, dt);
        assert_eq!(mean, top);
    }

    #[test]
    fn recorded_velocities_match_the_trace() {
        let policy = ActorCritic::new(41, 6);
        let zeros = policy
            .init_params(0)
            .with_values(vec![0.0; policy.param_len()])
            .unwrap();
        let cfg = BipedConfig::default();
        let opts = EvalOptions {
            episodes: 1,
            deterministic: true,
            seed: 4,
            heading_noise_deg: 0.0,
        };
        let records = run_episodes(&policy, &zeros, &cfg, &opts).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        let (mean, top) = velocity_from_positions(&r.xs, cfg.control_dt);
        assert_eq!(r.mean_velocity, mean);
        assert_eq!(r.top_velocity, top);
        assert_eq!(r.length, r.xs.len() - 1);
        // Heading noise disabled: no lateral motion is synthesized.
        assert!(r.ys.iter().all(|&y| y == 0.0));
    }

    #[test]
    fn deterministic_eval_is_reproducible() {
        let policy = ActorCritic::new(41, 6);
        let params = policy.init_params(9);
        let cfg = BipedConfig::default();
        let opts = EvalOptions {
            episodes: 2,
            deterministic: true,
            seed: 11,
            heading_noise_deg: 0.05,
        };
        let a = run_episodes(&policy, &params, &cfg, &opts).unwrap();
        let b = run_episodes(&policy, &params, &cfg, &opts).unwrap();
        assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.xs, rb.xs);
            assert_eq!(ra.ys, rb.ys);
        }
    }
}
