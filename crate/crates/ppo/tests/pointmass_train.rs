//! The trainer must actually learn: on the point-mass sprint fixture the
//! deterministic policy has a closed-form optimum to hit, and the critic's
//! explained variance should climb during early training.

use biped_env::PointMassEnv;
use netcore::ParamSet;
use ppo::{train, LogRecord, TrainHooks, TrainerConfig};
use rollout::Env;

struct Capture {
    records: Vec<LogRecord>,
}

impl TrainHooks for Capture {
    fn on_log(&mut self, record: &LogRecord) -> std::io::Result<()> {
        self.records.push(record.clone());
        Ok(())
    }
    fn on_checkpoint(&mut self, _: u64, _: &ParamSet) -> std::io::Result<()> {
        Ok(())
    }
    fn wall_seconds(&mut self) -> Option<f64> {
        Some(0.0)
    }
}

fn deterministic_return(policy: &netcore::ActorCritic, params: &ParamSet) -> f64 {
    let mut env = PointMassEnv::new();
    let mut obs = env.reset();
    let mut total = 0.0;
    loop {
        let action = policy.policy_mean(params, &obs).unwrap();
        let step = env.step(&action).unwrap();
        total += step.reward;
        if step.terminal.is_some() {
            return total;
        }
        obs = step.obs;
    }
}

#[test]
fn trainer_reaches_ninety_percent_of_point_mass_optimum() {
    let cfg = TrainerConfig {
        worker_count: 4,
        total_timesteps: 294_912, // 18 iterations of 4 x 4096, under the 300k cap
        seed: 3,
        ..TrainerConfig::default()
    };
    let mut hooks = Capture { records: vec![] };
    let params = train(&cfg, |_| Box::new(PointMassEnv::new()), &mut hooks).unwrap();
    assert_eq!(hooks.records.len(), 18);

    let policy = netcore::ActorCritic::new(2, 1);
    let ret = deterministic_return(&policy, &params);
    let optimum = PointMassEnv::new().optimal_return();
    assert!(
        ret >= 0.9 * optimum,
        "deterministic return {ret} < 90% of optimum {optimum}"
    );
}

#[test]
fn one_pooled_batch_is_exactly_one_iteration() {
    let cfg = TrainerConfig {
        worker_count: 2,
        timesteps_per_actorbatch: 256,
        total_timesteps: 512,
        minibatch_size: 64,
        optimization_epochs: 2,
        seed: 5,
        ..TrainerConfig::default()
    };
    let mut hooks = Capture { records: vec![] };
    train(&cfg, |_| Box::new(PointMassEnv::new()), &mut hooks).unwrap();
    assert_eq!(hooks.records.len(), 1);
    assert_eq!(hooks.records[0].cumulative_timesteps, 512);
}

#[test]
fn explained_variance_rises_over_first_ten_iterations() {
    // Median over 5 seeds of (EV at iteration 10 - EV at iteration 1) > 0.
    let mut increases = Vec::new();
    for seed in 0..5 {
        let cfg = TrainerConfig {
            worker_count: 1,
            timesteps_per_actorbatch: 2048,
            total_timesteps: 2048 * 10,
            seed,
            ..TrainerConfig::default()
        };
        let mut hooks = Capture { records: vec![] };
        train(&cfg, |_| Box::new(PointMassEnv::new()), &mut hooks).unwrap();
        let first = hooks.records.first().unwrap().explained_variance;
        let last = hooks.records.last().unwrap().explained_variance;
        increases.push(last - first);
    }
    increases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = increases[2];
    assert!(median > 0.0, "median EV increase {median}, all {increases:?}");
}

#[test]
fn single_worker_rerun_logs_identically() {
    let run = || {
        let cfg = TrainerConfig {
            worker_count: 1,
            timesteps_per_actorbatch: 512,
            total_timesteps: 1024,
            seed: 11,
            ..TrainerConfig::default()
        };
        let mut hooks = Capture { records: vec![] };
        train(&cfg, |_| Box::new(PointMassEnv::new()), &mut hooks).unwrap();
        hooks
            .records
            .iter()
            .map(LogRecord::to_line)
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(run(), run());
}
