//! Operator entry points behind the `locorun` binary: train, evaluate,
//! plot, and replay-export, with reproducible run directories.

pub mod commands;
pub mod manifest;
pub mod plotting;
pub mod runconfig;

/// Exit codes: 0 success, 2 usage/config error, 3 runtime failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

pub(crate) fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Worker-parallelism cap from the environment, when set.
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var("LOCORUN_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
}

/// With `LOCORUN_ZERO_CLOCK=1` the trainer logs `wall_seconds=0`, making
/// log files byte-identical across reruns.
pub fn zero_clock_from_env() -> bool {
    std::env::var("LOCORUN_ZERO_CLOCK").is_ok_and(|v| v == "1")
}
