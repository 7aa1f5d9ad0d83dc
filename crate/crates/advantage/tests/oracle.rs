//! Brute-force oracle for GAE: the advantage at t is the explicit double
//! sum of (gamma * lambda)^l * delta_{t+l}, truncated at the first terminal
//! at or after t. Computed without the backward recursion.

use advantage::{gae, Trajectory};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn brute_force(traj: &Trajectory, gamma: f64, lambda: f64) -> Vec<f64> {
    let t_len = traj.len();
    let delta = |t: usize| -> f64 {
        let nonterminal = if traj.terminal_flags[t] { 0.0 } else { 1.0 };
        let next_value = if t + 1 == t_len {
            traj.bootstrap_value
        } else {
            traj.values[t + 1]
        };
        traj.rewards[t] + gamma * next_value * nonterminal - traj.values[t]
    };
    (0..t_len)
        .map(|t| {
            let mut total = 0.0;
            let mut weight = 1.0;
            for l in t..t_len {
                total += weight * delta(l);
                if traj.terminal_flags[l] {
                    break;
                }
                weight *= gamma * lambda;
            }
            total
        })
        .collect()
}

fn random_trajectory(rng: &mut ChaCha8Rng) -> Trajectory {
    let t = rng.random_range(1..=32usize);
    let mut terminals = vec![false; t];
    for flag in terminals.iter_mut() {
        *flag = rng.random_bool(0.15);
    }
    Trajectory {
        observations: vec![vec![]; t],
        raw_actions: vec![vec![]; t],
        logprobs: vec![0.0; t],
        rewards: (0..t).map(|_| rng.random_range(-2.0..2.0)).collect(),
        values: (0..t).map(|_| rng.random_range(-1.0..1.0)).collect(),
        terminal_flags: terminals,
        bootstrap_value: rng.random_range(-1.0..1.0),
    }
}

#[test]
fn gae_matches_brute_force_double_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let gamma = 0.99;
    for lambda in [0.0, 0.5, 0.95, 1.0] {
        for case in 0..1000 {
            let traj = random_trajectory(&mut rng);
            let batch = gae(&traj, gamma, lambda).unwrap();
            let expect = brute_force(&traj, gamma, lambda);
            for (t, (a, e)) in batch.advantages.iter().zip(&expect).enumerate() {
                assert!(
                    (a - e).abs() < 1e-10,
                    "lambda {lambda} case {case} t {t}: {a} vs {e}"
                );
            }
        }
    }
}

#[test]
fn gae_with_internal_terminal_matches_brute_force() {
    // The spec's named example shape: 10 steps, one terminal in the middle.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut traj = random_trajectory(&mut rng);
    while traj.len() < 10 {
        traj = random_trajectory(&mut rng);
    }
    let mut traj = Trajectory {
        terminal_flags: vec![false; traj.len()],
        ..traj
    };
    traj.terminal_flags[4] = true;
    let batch = gae(&traj, 0.99, 0.95).unwrap();
    let expect = brute_force(&traj, 0.99, 0.95);
    for (a, e) in batch.advantages.iter().zip(&expect) {
        assert!((a - e).abs() < 1e-10);
    }
}
