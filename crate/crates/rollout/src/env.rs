/// Why an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpisodeEnd {
    Fell,
    ReachedFinish,
    HorizonHit,
    SafetyCap,
}

impl EpisodeEnd {
    pub fn as_str(&self) -> &'static str {
        match self {
            EpisodeEnd::Fell => "fell",
            EpisodeEnd::ReachedFinish => "reached_finish",
            EpisodeEnd::HorizonHit => "horizon_hit",
            EpisodeEnd::SafetyCap => "safety_cap",
        }
    }

    pub(crate) fn code(&self) -> f64 {
        match self {
            EpisodeEnd::Fell => 0.0,
            EpisodeEnd::ReachedFinish => 1.0,
            EpisodeEnd::HorizonHit => 2.0,
            EpisodeEnd::SafetyCap => 3.0,
        }
    }

    pub(crate) fn from_code(code: f64) -> Option<Self> {
        match code as i64 {
            0 => Some(EpisodeEnd::Fell),
            1 => Some(EpisodeEnd::ReachedFinish),
            2 => Some(EpisodeEnd::HorizonHit),
            3 => Some(EpisodeEnd::SafetyCap),
            _ => None,
        }
    }
}

/// One environment transition. `terminal` is `Some` exactly when the episode
/// ended at this step.
#[derive(Debug, Clone)]
pub struct EnvStep {
    pub obs: Vec<f64>,
    pub reward: f64,
    pub terminal: Option<EpisodeEnd>,
}

/// Minimal contract between the trainer and an environment. Implementations
/// own their RNG; a fresh instance with the same seed replays identically.
pub trait Env: Send {
    fn obs_dim(&self) -> usize;
    fn act_dim(&self) -> usize;
    fn reset(&mut self) -> Vec<f64>;
    fn step(&mut self, action: &[f64]) -> std::result::Result<EnvStep, String>;
}

/// Record of one completed episode, emitted at its terminal step.
#[derive(Debug, Clone, Copy)]
pub struct EpisodeStat {
    pub worker_id: usize,
    pub length: usize,
    pub total_reward: f64,
    pub end: EpisodeEnd,
}
