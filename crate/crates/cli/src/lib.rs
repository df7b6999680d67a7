//! Parameter sweeps and oracle cross-checks on top of `swapkit-core`.

pub mod config;
pub mod format;
pub mod sweep;
pub mod verify;

use std::path::Path;

use thiserror::Error;

pub use config::{ConfigError, Experiment, GridArg, Range, SweepConfig};
pub use sweep::{run_sweep, SweepOutput};
pub use verify::{run_oracle_suite, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] swapkit_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    /// `2` for configuration and I/O problems, `1` otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Io { .. } => 2,
            Self::Core(_) => 1,
        }
    }
}
