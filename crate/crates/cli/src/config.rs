//! Solver/timeout configuration with three layers: a `key = value` file,
//! `SODA_*` environment variables overriding it, and command-line flags
//! overriding both.

use std::path::Path;
use std::time::Duration;

use soda_core::maxsat::SolverChoice;
use soda_core::{Error, Result};

use crate::formats::{parse_duration, read_input};

/// Raw settings gathered from one layer; `None` means "not set here".
#[derive(Debug, Default, Clone)]
pub struct Layer {
    pub solver: Option<String>,
    pub solver_cmd: Option<String>,
    pub timeout: Option<String>,
}

impl Layer {
    fn overlay(self, base: Layer) -> Layer {
        Layer {
            solver: self.solver.or(base.solver),
            solver_cmd: self.solver_cmd.or(base.solver_cmd),
            timeout: self.timeout.or(base.timeout),
        }
    }
}

/// Resolved configuration used by the solving commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub solver: SolverChoice,
    pub timeout: Option<Duration>,
}

fn file_layer(path: &Path) -> Result<Layer> {
    let mut layer = Layer::default();
    for (lineno, line) in read_input(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Input(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            )));
        };
        let value = value.trim().to_string();
        match key.trim() {
            "solver" => layer.solver = Some(value),
            "solver-cmd" => layer.solver_cmd = Some(value),
            "timeout" => layer.timeout = Some(value),
            other => {
                return Err(Error::Input(format!(
                    "{}:{}: unknown key {other:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(layer)
}

fn env_layer() -> Layer {
    Layer {
        solver: std::env::var("SODA_SOLVER").ok(),
        solver_cmd: std::env::var("SODA_SOLVER_CMD").ok(),
        timeout: std::env::var("SODA_TIMEOUT").ok(),
    }
}

/// Merges flag settings over the environment over the optional file and
/// validates the result.
pub fn resolve(config_path: Option<&Path>, flags: Layer) -> Result<RunConfig> {
    let mut merged = flags.overlay(env_layer());
    if let Some(path) = config_path {
        merged = merged.overlay(file_layer(path)?);
    }
    let solver = match merged.solver.as_deref() {
        None | Some("internal") => SolverChoice::Internal,
        Some("external") => {
            let command = merged.solver_cmd.clone().ok_or_else(|| {
                Error::Input("external solver selected but no solver command given".into())
            })?;
            SolverChoice::External { command }
        }
        Some(other) => {
            return Err(Error::Input(format!(
                "unknown solver {other:?} (expected internal or external)"
            )))
        }
    };
    let timeout = merged.timeout.as_deref().map(parse_duration).transpose()?;
    Ok(RunConfig { solver, timeout })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("soda-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\nsolver = internal\ntimeout = 5s\n").unwrap();

        let base = resolve(Some(&path), Layer::default()).unwrap();
        assert_eq!(base.solver, SolverChoice::Internal);
        assert_eq!(base.timeout, Some(Duration::from_secs(5)));

        let flags = Layer {
            timeout: Some("250ms".into()),
            ..Layer::default()
        };
        let merged = resolve(Some(&path), flags).unwrap();
        assert_eq!(merged.timeout, Some(Duration::from_millis(250)));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn external_requires_a_command() {
        let flags = Layer {
            solver: Some("external".into()),
            ..Layer::default()
        };
        assert!(resolve(None, flags).is_err());

        let flags = Layer {
            solver: Some("external".into()),
            solver_cmd: Some("minisat".into()),
            ..Layer::default()
        };
        let cfg = resolve(None, flags).unwrap();
        assert_eq!(
            cfg.solver,
            SolverChoice::External {
                command: "minisat".into()
            }
        );
    }

    #[test]
    fn bad_values_are_rejected() {
        let flags = Layer {
            solver: Some("quantum".into()),
            ..Layer::default()
        };
        assert!(resolve(None, flags).is_err());
        let flags = Layer {
            timeout: Some("soon".into()),
            ..Layer::default()
        };
        assert!(resolve(None, flags).is_err());
    }
}
