use biped_env::{BipedConfig, BipedEnv};
use netcore::ActorCritic;
use ppo::{SurrogateProvider, TrainerConfig};
use rollout::{Env, GradProvider, PooledBatch};
use std::time::Instant;

fn main() {
    // Env stepping alone.
    let mut env = BipedEnv::new(BipedConfig::default(), 0);
    let mut obs = env.reset();
    let policy = ActorCritic::new(41, 6);
    let params = policy.init_params(0);
    let mut rng = <rand_chacha::ChaCha8Rng as rand_chacha::rand_core::SeedableRng>::seed_from_u64(1);

    let t = Instant::now();
    let n = 20_000;
    for _ in 0..n {
        let (a, _) = policy.policy_sample(&params, &obs, &mut rng).unwrap();
        let _v = policy.value(&params, &obs).unwrap();
        match env.step(&a) {
            Ok(s) => obs = if s.terminal.is_some() { env.reset() } else { s.obs },
            Err(e) => panic!("{e}"),
        }
    }
    let per = t.elapsed().as_secs_f64() / n as f64 * 1e6;
    println!("env step + sample + value: {per:.1} us/step");

    // Pure env step.
    let mut env = BipedEnv::new(BipedConfig::default(), 0);
    env.reset();
    let t = Instant::now();
    let mut hold = [0.0; 6];
    for i in 0..n {
        hold[0] = (i % 7) as f64 / 7.0 - 0.5;
        match env.step(&hold) {
            Ok(s) => {
                if s.terminal.is_some() {
                    env.reset();
                }
            }
            Err(e) => panic!("{e}"),
        }
    }
    println!("env step only: {:.1} us/step", t.elapsed().as_secs_f64() / n as f64 * 1e6);

    // Sample-gradient throughput on a 64-row minibatch.
    let obs_dim = 41;
    let act_dim = 6;
    let rows: Vec<usize> = (0..64).collect();
    let nbatch = 64;
    let mut batch = PooledBatch {
        obs: vec![0.1; nbatch * obs_dim],
        actions: vec![0.05; nbatch * act_dim],
        old_logprobs: vec![-5.0; nbatch],
        advantages: vec![0.5; nbatch],
        returns: vec![0.3; nbatch],
        values: vec![0.2; nbatch],
        obs_dim,
        act_dim,
    };
    for (i, v) in batch.obs.iter_mut().enumerate() {
        *v = ((i * 2654435761) % 1000) as f64 / 500.0 - 1.0;
    }
    let provider = SurrogateProvider {
        policy: policy.clone(),
        config: TrainerConfig::default(),
    };
    let t = Instant::now();
    let reps = 2000;
    for _ in 0..reps {
        let _ = provider.minibatch_grad(&params, &batch, &rows).unwrap();
    }
    let per = t.elapsed().as_secs_f64() / (reps * 64) as f64 * 1e6;
    println!("sample-grad: {per:.2} us/sample ({:.1} us per 64-minibatch)", per * 64.0);

    // Adam step cost at this parameter count.
    let grad = vec![1e-4; params.len()];
    let adam = netcore::AdamState::new(params.len());
    let t = Instant::now();
    let mut p = params.clone();
    let mut a = adam;
    for _ in 0..20000 {
        let (np, na) = netcore::adam_step(&p, &grad, &a, 1e-4).unwrap();
        p = np;
        a = na;
    }
    println!("adam step ({} params): {:.1} us", p.len(), t.elapsed().as_secs_f64() / 20000.0 * 1e6);
}
