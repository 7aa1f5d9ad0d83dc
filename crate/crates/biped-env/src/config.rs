use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    SprintTask1,
    SprintTask2,
}

impl Task {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "sprint1" | "sprint_task_1" => Ok(Task::SprintTask1),
            "sprint2" | "sprint_task_2" => Ok(Task::SprintTask2),
            other => Err(Error::Config(format!("unknown task {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::SprintTask1 => "sprint1",
            Task::SprintTask2 => "sprint2",
        }
    }
}

/// Physics settings the environment config file may override.
#[derive(Debug, Clone, Copy)]
pub struct PhysicsOverrides {
    pub friction: f64,
    pub gravity_z: f64,
}

impl Default for PhysicsOverrides {
    fn default() -> Self {
        Self {
            friction: 1.0,
            gravity_z: -9.81,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BipedConfig {
    /// Control cycle, seconds. Four 5 ms physics substeps run per cycle.
    pub control_dt: f64,
    /// Proportional controller gain, 1/s.
    pub k_proportional: f64,
    pub start_x: f64,
    pub finish_x: f64,
    /// Torso-center height below which the robot counts as fallen.
    /// 0.27 default, 0.33 for the erect variant.
    pub fall_height_threshold: f64,
    pub task: Task,
    pub task2_horizon: usize,
    /// Episode cap for Task I so stalled policies cannot run unbounded.
    pub safety_cap_steps: usize,
    /// Uniform joint-angle jitter at reset, radians; 0 disables.
    pub reset_noise_rad: f64,
    pub physics: PhysicsOverrides,
}

impl Default for BipedConfig {
    fn default() -> Self {
        Self {
            control_dt: 0.020,
            k_proportional: 7.0,
            start_x: -14.0,
            finish_x: 14.0,
            fall_height_threshold: 0.27,
            task: Task::SprintTask1,
            task2_horizon: 400,
            safety_cap_steps: 3000,
            reset_noise_rad: 0.0,
            physics: PhysicsOverrides::default(),
        }
    }
}

impl BipedConfig {
    pub fn validate(&self) -> Result<()> {
        if self.start_x >= self.finish_x {
            return Err(Error::Config("start_x must be < finish_x".into()));
        }
        if self.fall_height_threshold <= 0.0 || self.control_dt <= 0.0 {
            return Err(Error::Config("thresholds must be positive".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` pair from a config file. Returns false when
    /// the key does not belong to this module (the CLI owns trainer keys).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<bool> {
        let bad = |k: &str, v: &str| Error::Config(format!("bad value {v:?} for {k}"));
        let parse_f64 = |k: &str, v: &str| v.parse::<f64>().map_err(|_| bad(k, v));
        let parse_usize = |k: &str, v: &str| v.parse::<usize>().map_err(|_| bad(k, v));
        match key {
            "task" => self.task = Task::parse(value)?,
            "control_dt" => self.control_dt = parse_f64(key, value)?,
            "k_proportional" => self.k_proportional = parse_f64(key, value)?,
            "start_x" => self.start_x = parse_f64(key, value)?,
            "finish_x" => self.finish_x = parse_f64(key, value)?,
            "fall_height_threshold" => self.fall_height_threshold = parse_f64(key, value)?,
            "task2_horizon" => self.task2_horizon = parse_usize(key, value)?,
            "safety_cap_steps" => self.safety_cap_steps = parse_usize(key, value)?,
            "reset_noise_rad" => self.reset_noise_rad = parse_f64(key, value)?,
            "friction" => self.physics.friction = parse_f64(key, value)?,
            "gravity_z" => self.physics.gravity_z = parse_f64(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Builds a config from file text, ignoring keys owned by other layers.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (key, value) in parse_kv_text(text) {
            cfg.apply_kv(&key, &value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_kv_text(&self) -> String {
        format!(
            "task = {}\ncontrol_dt = {}\nk_proportional = {}\nstart_x = {}\n\
             finish_x = {}\nfall_height_threshold = {}\ntask2_horizon = {}\n\
             safety_cap_steps = {}\nreset_noise_rad = {}\nfriction = {}\ngravity_z = {}\n",
            self.task.as_str(),
            self.control_dt,
            self.k_proportional,
            self.start_x,
            self.finish_x,
            self.fall_height_threshold,
            self.task2_horizon,
            self.safety_cap_steps,
            self.reset_noise_rad,
            self.physics.friction,
            self.physics.gravity_z,
        )
    }
}

/// Flat `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_kv_text(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(at) => &line[..at],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            out.push((key.trim().to_string(), value.trim().to_string()));
        }
    }
    out
}
