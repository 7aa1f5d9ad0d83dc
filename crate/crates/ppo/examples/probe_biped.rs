use biped_env::{BipedConfig, BipedEnv};
use netcore::ParamSet;
use ppo::{train, LogRecord, TrainHooks, TrainerConfig};
use rollout::{EpisodeEnd, EpisodeStat};

struct Probe {
    log: std::fs::File,
    best_distance: f64,
    nonfall_10m: usize,
}

impl TrainHooks for Probe {
    fn on_log(&mut self, r: &LogRecord) -> std::io::Result<()> {
        use std::io::Write;
        writeln!(self.log, "{}", r.to_line())?;
        if r.iteration.is_multiple_of(20) {
            eprintln!(
                "it {:3} rew {:7.3} len {:6.1} ev {:+.3} kl {:.4} best {:.2} n10 {}",
                r.iteration, r.mean_episode_reward, r.mean_episode_length,
                r.explained_variance, r.approx_kl, self.best_distance, self.nonfall_10m
            );
        }
        Ok(())
    }
    fn on_checkpoint(&mut self, _: u64, _: &ParamSet) -> std::io::Result<()> {
        Ok(())
    }
    fn on_episode(&mut self, e: &EpisodeStat) {
        if e.total_reward > self.best_distance {
            self.best_distance = e.total_reward;
        }
        if e.end != EpisodeEnd::Fell && e.total_reward >= 10.0 {
            self.nonfall_10m += 1;
        }
    }
}

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let steps: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);
    let cfg = TrainerConfig {
        worker_count: 4,
        total_timesteps: steps,
        seed,
        thread_cap: Some(1),
        ..TrainerConfig::default()
    };
    let mut probe = Probe {
        log: std::fs::File::create(format!("/tmp/probe_seed{seed}.log")).unwrap(),
        best_distance: 0.0,
        nonfall_10m: 0,
    };
    let t = std::time::Instant::now();
    let params = train(
        &cfg,
        move |wid| Box::new(BipedEnv::new(BipedConfig::default(), seed + wid as u64)),
        &mut probe,
    )
    .unwrap();
    netcore::write_checkpoint_file(&params, format!("/tmp/probe_seed{seed}.ckpt")).unwrap();
    eprintln!(
        "seed {}: done in {:.0} s; best episode distance {:.2} m; non-fall >=10 m episodes: {}",
        seed, t.elapsed().as_secs_f64(), probe.best_distance, probe.nonfall_10m
    );
}
