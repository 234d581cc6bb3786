//! Configuration, dispatch and file output for the `rotwave` command.

pub mod config;
pub mod output;
pub mod recipes;
pub mod tasks;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::json;
use thiserror::Error;

pub use config::{parse_config, ConfigErrors, RunConfig, Task};
pub use output::OutputBundle;
pub use recipes::{figure_recipes, recipe, Recipe};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 1,
            RunError::Compute(_) | RunError::Io(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Validation(_) => "validation",
            RunError::Compute(_) => "compute",
            RunError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let messages = match self {
            RunError::Validation(v) => v.clone(),
            RunError::Compute(s) | RunError::Io(s) => vec![s.clone()],
        };
        json!({ "kind": self.kind(), "exit_code": self.exit_code(), "errors": messages })
    }
}

impl From<ConfigErrors> for RunError {
    fn from(e: ConfigErrors) -> Self {
        RunError::Validation(e.0)
    }
}

/// Computes the bundle for a config.
pub fn run(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    tasks::execute(cfg)
}

/// Computes and writes into `dir`, stamping the metadata with wall-clock data.
pub fn run_to_dir(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let start = Instant::now();
    let mut bundle = run(cfg)?;
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    bundle.meta["timestamp"] = json!({
        "unix_seconds": stamp,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
    });
    bundle.write(dir).map_err(|e| RunError::Io(e.to_string()))
}

/// Writes `error.json` into `dir`, best effort.
pub fn write_error(dir: &Path, err: &RunError) {
    if std::fs::create_dir_all(dir).is_ok() {
        let mut text = serde_json::to_string_pretty(&err.to_json()).expect("error serializes");
        text.push('\n');
        let _ = output::write_atomic(&dir.join("error.json"), text.as_bytes());
    }
}
