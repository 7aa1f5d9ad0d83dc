//! Generalized Advantage Estimation and return targets over collected
//! trajectories.
//!
//! A `Trajectory` is a fixed-length slice of experience that may span
//! several episodes; terminal flags mark episode ends and the bootstrap
//! value covers the non-terminal cut at the end of the slice. `gae`
//! produces advantages and value-regression targets; `normalize_advantages`
//! standardizes a pooled batch once before the optimization epochs.

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("{name} = {value} out of range [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("trajectory field lengths differ")]
    LengthMismatch,
    #[error("batch of length {0} too short to normalize")]
    TooShort(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Per-step records of one rollout segment.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub observations: Vec<Vec<f64>>,
    pub raw_actions: Vec<Vec<f64>>,
    pub logprobs: Vec<f64>,
    /// Meters of forward progress per step for the sprint tasks.
    pub rewards: Vec<f64>,
    pub values: Vec<f64>,
    /// True where the episode ended at that step.
    pub terminal_flags: Vec<bool>,
    /// Critic value of the state after the final step; used only when the
    /// final step is non-terminal.
    pub bootstrap_value: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        let t = self.len();
        if self.observations.len() != t
            || self.raw_actions.len() != t
            || self.logprobs.len() != t
            || self.values.len() != t
            || self.terminal_flags.len() != t
        {
            return Err(Error::LengthMismatch);
        }
        Ok(())
    }
}

/// Advantages and value-function regression targets for one trajectory.
/// `returns[t] = advantages[t] + values[t]` always.
#[derive(Debug, Clone)]
pub struct AdvantageBatch {
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

/// Generalized Advantage Estimation.
///
/// delta_t = r_t + gamma * V(s_{t+1}) * (1 - terminal_t) - V(s_t), with the
/// value after the final step taken from `bootstrap_value`; the running
/// (gamma * lambda)-discounted sum resets across terminal boundaries.
pub fn gae(traj: &Trajectory, gamma: f64, lambda: f64) -> Result<AdvantageBatch> {
    traj.validate()?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
        });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
        });
    }
    let t_len = traj.len();
    let mut advantages = vec![0.0; t_len];
    let mut acc = 0.0;
    for t in (0..t_len).rev() {
        let nonterminal = if traj.terminal_flags[t] { 0.0 } else { 1.0 };
        let next_value = if t + 1 == t_len {
            traj.bootstrap_value
        } else {
            traj.values[t + 1]
        };
        let delta = traj.rewards[t] + gamma * next_value * nonterminal - traj.values[t];
        acc = delta + gamma * lambda * nonterminal * acc;
        advantages[t] = acc;
    }
    let returns = advantages
        .iter()
        .zip(&traj.values)
        .map(|(a, v)| a + v)
        .collect();
    Ok(AdvantageBatch {
        advantages,
        returns,
    })
}

/// Shifts and scales advantages to empirical mean 0 and standard deviation 1
/// (population moments, std floor 1e-8). Returns are left untouched.
pub fn normalize_advantages(batch: &AdvantageBatch) -> Result<AdvantageBatch> {
    let n = batch.advantages.len();
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    let mean = batch.advantages.iter().sum::<f64>() / n as f64;
    let var = batch
        .advantages
        .iter()
        .map(|a| (a - mean) * (a - mean))
        .sum::<f64>()
        / n as f64;
    let std = var.sqrt().max(1e-8);
    Ok(AdvantageBatch {
        advantages: batch.advantages.iter().map(|a| (a - mean) / std).collect(),
        returns: batch.returns.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(
        rewards: Vec<f64>,
        values: Vec<f64>,
        terminals: Vec<bool>,
        bootstrap: f64,
    ) -> Trajectory {
        let t = rewards.len();
        Trajectory {
            observations: vec![vec![]; t],
            raw_actions: vec![vec![]; t],
            logprobs: vec![0.0; t],
            rewards,
            values,
            terminal_flags: terminals,
            bootstrap_value: bootstrap,
        }
    }

    #[test]
    fn single_step_td_residual() {
        // lambda = 0, one non-terminal step: A = r + gamma * bootstrap - V.
        let t = traj(vec![1.0], vec![0.5], vec![false], 0.2);
        let b = gae(&t, 0.99, 0.0).unwrap();
        assert!((b.advantages[0] - 0.698).abs() < 1e-12);
        assert!((b.returns[0] - (0.698 + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn all_zero_inputs_give_zero_outputs() {
        let t = traj(vec![0.0; 5], vec![0.0; 5], vec![false; 5], 0.0);
        let b = gae(&t, 0.99, 0.95).unwrap();
        assert!(b.advantages.iter().all(|&a| a == 0.0));
        assert!(b.returns.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn lambda_zero_is_one_step_residual() {
        let t = traj(
            vec![1.0, -0.5, 2.0],
            vec![0.3, 0.1, -0.2],
            vec![false, false, false],
            0.4,
        );
        let gamma = 0.9;
        let b = gae(&t, gamma, 0.0).unwrap();
        let expect = [
            1.0 + gamma * 0.1 - 0.3,
            -0.5 + gamma * -0.2 - 0.1,
            2.0 + gamma * 0.4 + 0.2,
        ];
        for (a, e) in b.advantages.iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn terminal_step_ignores_bootstrap() {
        let t = traj(vec![1.0], vec![0.5], vec![true], 99.0);
        let b = gae(&t, 0.99, 0.95).unwrap();
        assert!((b.advantages[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reset_across_terminal_makes_suffix_independent_of_prefix() {
        let suffix_r = [0.7, -0.1, 0.4];
        let suffix_v = [0.2, 0.3, -0.5];
        let make = |prefix_r: Vec<f64>, prefix_v: Vec<f64>| {
            let mut r = prefix_r;
            let mut v = prefix_v;
            let mut term = vec![false; r.len()];
            *term.last_mut().unwrap() = true;
            r.extend(suffix_r);
            v.extend(suffix_v);
            term.extend([false, false, false]);
            traj(r, v, term, 0.25)
        };
        let a = gae(&make(vec![1.0, 2.0], vec![0.1, 0.9]), 0.99, 0.95).unwrap();
        let b = gae(&make(vec![-3.0], vec![5.0]), 0.99, 0.95).unwrap();
        let (a_tail, b_tail) = (&a.advantages[2..], &b.advantages[1..]);
        for (x, y) in a_tail.iter().zip(b_tail) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn lambda_one_no_terminals_is_discounted_return() {
        let t = traj(
            vec![0.5, 1.5, -0.25, 2.0],
            vec![0.1, -0.4, 0.7, 0.2],
            vec![false; 4],
            0.6,
        );
        let gamma = 0.97;
        let b = gae(&t, gamma, 1.0).unwrap();
        for start in 0..4 {
            let mut ret = 0.0;
            let mut disc = 1.0;
            for k in start..4 {
                ret += disc * t.rewards[k];
                disc *= gamma;
            }
            ret += disc * t.bootstrap_value;
            assert!(
                (b.advantages[start] + t.values[start] - ret).abs() < 1e-10,
                "t={start}"
            );
        }
    }

    #[test]
    fn returns_minus_values_equal_advantages() {
        let t = traj(
            vec![1.0, 0.0, -2.0, 0.5],
            vec![0.9, -0.1, 0.3, 0.0],
            vec![false, true, false, false],
            -0.7,
        );
        let b = gae(&t, 0.99, 0.95).unwrap();
        for i in 0..4 {
            assert!((b.returns[i] - t.values[i] - b.advantages[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_two_points() {
        let b = AdvantageBatch {
            advantages: vec![1.0, 3.0],
            returns: vec![5.0, 6.0],
        };
        let n = normalize_advantages(&b).unwrap();
        assert_eq!(n.advantages, vec![-1.0, 1.0]);
        assert_eq!(n.returns, vec![5.0, 6.0]);
    }

    #[test]
    fn normalize_constant_engages_std_floor() {
        let b = AdvantageBatch {
            advantages: vec![2.5; 4],
            returns: vec![0.0; 4],
        };
        let n = normalize_advantages(&b).unwrap();
        assert!(n.advantages.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn normalize_moments_recompute() {
        let b = AdvantageBatch {
            advantages: (0..64).map(|i| ((i * 37) % 11) as f64 - 3.7).collect(),
            returns: vec![0.0; 64],
        };
        let n = normalize_advantages(&b).unwrap();
        let mean = n.advantages.iter().sum::<f64>() / 64.0;
        let var = n
            .advantages
            .iter()
            .map(|a| (a - mean) * (a - mean))
            .sum::<f64>()
            / 64.0;
        assert!(mean.abs() < 1e-12);
        assert!((var.sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors_on_bad_inputs() {
        let empty = traj(vec![], vec![], vec![], 0.0);
        assert!(matches!(gae(&empty, 0.99, 0.95), Err(Error::EmptyTrajectory)));
        let t = traj(vec![1.0], vec![0.0], vec![false], 0.0);
        assert!(gae(&t, 1.5, 0.95).is_err());
        assert!(gae(&t, 0.99, -0.1).is_err());
        let short = AdvantageBatch {
            advantages: vec![1.0],
            returns: vec![1.0],
        };
        assert!(normalize_advantages(&short).is_err());
    }
}
