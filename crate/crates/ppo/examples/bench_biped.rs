use biped_env::{BipedConfig, BipedEnv};
use netcore::ParamSet;
use ppo::{train, LogRecord, TrainHooks, TrainerConfig};
use std::time::Instant;

struct Quiet;
impl TrainHooks for Quiet {
    fn on_log(&mut self, r: &LogRecord) -> std::io::Result<()> {
        eprintln!("{}", r.to_line());
        Ok(())
    }
    fn on_checkpoint(&mut self, _: u64, _: &ParamSet) -> std::io::Result<()> {
        Ok(())
    }
}

fn main() {
    let iters: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let workers: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(4);
    let cfg = TrainerConfig {
        worker_count: workers,
        total_timesteps: iters * workers * 4096,
        seed: 0,
        ..TrainerConfig::default()
    };
    let t = Instant::now();
    let _ = train(
        &cfg,
        |wid| {
            Box::new(BipedEnv::new(BipedConfig::default(), 1000 + wid as u64))
        },
        &mut Quiet,
    )
    .unwrap();
    let dt = t.elapsed().as_secs_f64();
    let steps = cfg.total_timesteps as f64;
    eprintln!(
        "{} iterations, {} workers: {:.1} s total, {:.0} steps/s, projected 10M: {:.0} min",
        iters, workers, dt, steps / dt, 10e6 / (steps / dt) / 60.0
    );
}
