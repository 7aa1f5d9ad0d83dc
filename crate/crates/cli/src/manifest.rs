use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::{runtime, CliResult};

/// Run-directory manifest. The header is written before training starts;
/// checkpoint lines and the end timestamp are appended as they happen, one
/// atomic line each, so the directory is self-describing even after a crash.
pub struct RunManifest {
    path: PathBuf,
}

impl RunManifest {
    pub fn create(
        dir: &Path,
        seed: u64,
        task: &str,
        workers: usize,
        total_timesteps: usize,
    ) -> CliResult<Self> {
        let path = dir.join("manifest.txt");
        let header = format!(
            "locorun-run 1\ncode_version = {}\nseed = {seed}\ntask = {task}\n\
             workers = {workers}\ntotal_timesteps = {total_timesteps}\n\
             config = config.snapshot\nlog = train.log\nstarted_unix = {}\n",
            env!("CARGO_PKG_VERSION"),
            unix_now(),
        );
        std::fs::write(&path, header).map_err(runtime)?;
        Ok(Self { path })
    }

    pub fn append_checkpoint(&self, relative: &str) -> CliResult<()> {
        self.append_line(&format!("checkpoint = {relative}"))
    }

    pub fn finish(&self) -> CliResult<()> {
        self.append_line(&format!("ended_unix = {}", unix_now()))
    }

    fn append_line(&self, line: &str) -> CliResult<()> {
        let mut f = std::fs::OpenOptions::new()
            .append(true)
            .open(&self.path)
            .map_err(runtime)?;
        writeln!(f, "{line}").map_err(runtime)?;
        Ok(())
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
