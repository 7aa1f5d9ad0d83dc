//! Parallel-path equivalence: the worker pool with sharded minibatch
//! gradients must reproduce the single-process update — bitwise for one
//! worker, to floating-point reassociation tolerance for four.

use std::sync::Arc;

use biped_env::PointMassEnv;
use netcore::{ActorCritic, AdamState};
use ppo::{ppo_update, SurrogateProvider, TrainerConfig};
use rollout::{run_iteration, Env, IterationConfig, WorkerPool};

fn make_pool(workers: usize, policy: &ActorCritic, params: &netcore::ParamSet, cfg: &TrainerConfig) -> WorkerPool {
    let envs: Vec<Box<dyn Env>> = (0..workers).map(|_| Box::new(PointMassEnv::new()) as Box<dyn Env>).collect();
    let provider = Arc::new(SurrogateProvider {
        policy: policy.clone(),
        config: cfg.clone(),
    });
    WorkerPool::new(envs, policy, params, provider, cfg.seed, workers).unwrap()
}

fn iter_cfg(cfg: &TrainerConfig, iteration: u64) -> IterationConfig {
    IterationConfig {
        segment_len: cfg.timesteps_per_actorbatch,
        gamma: cfg.gamma,
        gae_lambda: cfg.gae_lambda,
        epochs: cfg.optimization_epochs,
        minibatch_size: cfg.minibatch_size,
        learning_rate: cfg.learning_rate,
        run_seed: cfg.seed,
        iteration,
    }
}

#[test]
fn single_worker_matches_ppo_update_bitwise() {
    let cfg = TrainerConfig {
        worker_count: 1,
        timesteps_per_actorbatch: 128,
        minibatch_size: 32,
        optimization_epochs: 3,
        seed: 42,
        ..TrainerConfig::default()
    };
    let policy = ActorCritic::with_hidden(2, 1, &[8]);
    let params = policy.init_params(cfg.seed);
    let adam = AdamState::new(params.len());
    let pool = make_pool(1, &policy, &params, &cfg);

    let outcome = run_iteration(&pool, &params, &adam, &iter_cfg(&cfg, 0)).unwrap();
    let (reference, _, _) =
        ppo_update(&policy, &params, &adam, &outcome.pooled, &cfg, 0).unwrap();

    for (a, b) in outcome.params.values().iter().zip(reference.values()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn four_worker_shards_track_single_process_trajectory() {
    let cfg = TrainerConfig {
        worker_count: 4,
        timesteps_per_actorbatch: 64,
        minibatch_size: 64,
        optimization_epochs: 2,
        seed: 7,
        ..TrainerConfig::default()
    };
    let policy = ActorCritic::with_hidden(2, 1, &[8]);
    let mut params = policy.init_params(cfg.seed);
    let mut adam = AdamState::new(params.len());
    let pool = make_pool(4, &policy, &params, &cfg);

    for iteration in 0..20 {
        let outcome = run_iteration(&pool, &params, &adam, &iter_cfg(&cfg, iteration)).unwrap();
        let (reference, _, _) =
            ppo_update(&policy, &params, &adam, &outcome.pooled, &cfg, iteration).unwrap();

        let scale = reference
            .values()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-12);
        let worst = outcome
            .params
            .values()
            .iter()
            .zip(reference.values())
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "iteration {iteration}: relative error {worst}");

        params = outcome.params;
        adam = outcome.adam;
    }
}

#[test]
fn mean_of_shard_gradients_equals_full_batch_gradient() {
    // 50 random instances of the real loss: the average of equal-size shard
    // gradients of a mean-reduced minibatch equals the full-batch gradient
    // up to floating-point reassociation.
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rollout::{average_gradients, GradProvider, PooledBatch};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
    for case in 0..50 {
        let obs_dim = rng.random_range(2..4usize);
        let act_dim = rng.random_range(1..3usize);
        let policy = ActorCritic::with_hidden(obs_dim, act_dim, &[5]);
        let params = policy.init_params(rng.random::<u64>());
        let cfg = TrainerConfig::default();
        let n = 64;
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
            let (lp, _) = policy.policy_logprob_entropy(&params, &obs, &action).unwrap();
            let v = policy.value(&params, &obs).unwrap();
            batch.obs.extend_from_slice(&obs);
            batch.actions.extend_from_slice(&action);
            batch.old_logprobs.push(lp + rng.random_range(-0.05..0.05));
            batch.advantages.push(rng.random_range(-1.0..1.0));
            batch.values.push(v);
            batch.returns.push(v + rng.random_range(-0.5..0.5));
        }
        let provider = SurrogateProvider {
            policy: policy.clone(),
            config: cfg.clone(),
        };
        let rows: Vec<usize> = (0..n).collect();
        let (full, _) = provider.minibatch_grad(&params, &batch, &rows).unwrap();
        let shards: Vec<Vec<f64>> = rows
            .chunks(16)
            .map(|shard| provider.minibatch_grad(&params, &batch, shard).unwrap().0)
            .collect();
        let averaged = average_gradients(&shards).unwrap();
        let scale = full.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        let err = full
            .iter()
            .zip(&averaged)
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "case {case}: relative error {err}");
    }
}

#[test]
fn pooled_batch_size_scales_with_workers() {
    let cfg = TrainerConfig {
        worker_count: 3,
        timesteps_per_actorbatch: 32,
        minibatch_size: 24,
        optimization_epochs: 1,
        seed: 1,
        ..TrainerConfig::default()
    };
    let policy = ActorCritic::with_hidden(2, 1, &[4]);
    let params = policy.init_params(0);
    let adam = AdamState::new(params.len());
    let pool = make_pool(3, &policy, &params, &cfg);
    let outcome = run_iteration(&pool, &params, &adam, &iter_cfg(&cfg, 0)).unwrap();
    assert_eq!(outcome.pooled.len(), 3 * 32);
    assert_eq!(outcome.timesteps, 96);
}
