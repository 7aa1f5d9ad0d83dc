use rollout::{Env, EnvStep, EpisodeEnd};

/// Trivially solvable 1-D sprint: a double integrator with bounded
/// acceleration, reward equal to forward displacement, fixed 400-step
/// horizon, no falling. Exists purely as a trainer acceptance fixture with
/// a closed-form optimum.
pub struct PointMassEnv {
    x: f64,
    v: f64,
    t: usize,
    pub horizon: usize,
    pub dt: f64,
    pub accel_max: f64,
}

impl PointMassEnv {
    pub fn new() -> Self {
        Self {
            x: 0.0,
            v: 0.0,
            t: 0,
            horizon: 400,
            dt: 0.02,
            accel_max: 1.0,
        }
    }

    /// Return of the always-full-throttle policy:
    /// sum_k k * a * dt^2 = a * dt^2 * T(T+1)/2.
    pub fn optimal_return(&self) -> f64 {
        self.accel_max * self.dt * self.dt * (self.horizon * (self.horizon + 1)) as f64 / 2.0
    }

    fn observation(&self) -> Vec<f64> {
        vec![self.v * 0.1, self.t as f64 / self.horizon as f64]
    }
}

impl Default for PointMassEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl Env for PointMassEnv {
    fn obs_dim(&self) -> usize {
        2
    }

    fn act_dim(&self) -> usize {
        1
    }

    fn reset(&mut self) -> Vec<f64> {
        self.x = 0.0;
        self.v = 0.0;
        self.t = 0;
        self.observation()
    }

    fn step(&mut self, action: &[f64]) -> Result<EnvStep, String> {
        let a = action[0].clamp(-1.0, 1.0) * self.accel_max;
        self.v += a * self.dt;
        let dx = self.v * self.dt;
        self.x += dx;
        self.t += 1;
        let terminal = (self.t >= self.horizon).then_some(EpisodeEnd::HorizonHit);
        Ok(EnvStep {
            obs: self.observation(),
            reward: dx,
            terminal,
        })
    }
}
