//! Adapter for external solver processes speaking the standard output
//! protocol: a final `s <STATUS>` line, optional `v <literals>` model
//! lines, and (for optimizers) `o <cost>` lines.

use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

use super::{SolveOutcome, SolveStatus};

/// Outcome of an external run, plus the optimizer cost when one was
/// reported and whether the status line claimed a proven optimum
/// (`OPTIMUM FOUND`) rather than plain satisfiability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalResult {
    pub outcome: SolveOutcome,
    pub cost: Option<u64>,
    pub proved_optimal: bool,
}

fn excerpt(stdout: &str, stderr: &str) -> String {
    let mut s = String::new();
    s.push_str(stdout.trim());
    if !stderr.trim().is_empty() {
        if !s.is_empty() {
            s.push_str(" | stderr: ");
        }
        s.push_str(stderr.trim());
    }
    s.truncate(300);
    s
}

/// Runs `command` (split on whitespace) with `path` appended as its final
/// argument, enforcing `budget` by killing the process. Parses the last
/// `s ` line into a status, `v ` lines into a model, and the last `o `
/// line into a cost.
pub fn run_external(
    path: &Path,
    command: &str,
    budget: Option<Duration>,
) -> Result<ExternalResult> {
    let mut parts = command.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| Error::Environment("empty solver command".into()))?;
    let mut child = Command::new(program)
        .args(parts)
        .arg(path)
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .stdin(Stdio::null())
        .spawn()
        .map_err(|e| Error::Environment(format!("cannot launch {program:?}: {e}")))?;

    let mut stdout_pipe = child.stdout.take().expect("stdout was piped");
    let mut stderr_pipe = child.stderr.take().expect("stderr was piped");
    let out_reader = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout_pipe.read_to_string(&mut buf);
        buf
    });
    let err_reader = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stderr_pipe.read_to_string(&mut buf);
        buf
    });

    let deadline = budget.map(|b| Instant::now() + b);
    let mut timed_out = false;
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) => {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    let _ = child.kill();
                    let _ = child.wait();
                    timed_out = true;
                    break;
                }
                std::thread::sleep(Duration::from_millis(5));
            }
            Err(e) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::Environment(format!(
                    "waiting on {program:?} failed: {e}"
                )));
            }
        }
    }
    let stdout = out_reader.join().unwrap_or_default();
    let stderr = err_reader.join().unwrap_or_default();
    if timed_out {
        return Ok(ExternalResult {
            outcome: SolveOutcome {
                status: SolveStatus::Timeout,
                model: None,
            },
            cost: None,
            proved_optimal: false,
        });
    }

    let mut status_token: Option<String> = None;
    let mut cost: Option<u64> = None;
    let mut lits: Vec<i64> = Vec::new();
    let mut saw_values = false;
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status_token = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("o ") {
            if let Ok(c) = rest.trim().parse::<u64>() {
                cost = Some(c);
            }
        } else if line == "v" || line.starts_with("v ") {
            saw_values = true;
            for tok in line[1..].split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| {
                    Error::Environment(format!("bad model token {tok:?} from {program:?}"))
                })?;
                if l != 0 {
                    lits.push(l);
                }
            }
        }
    }
    let status_token = status_token.ok_or_else(|| {
        Error::Environment(format!(
            "{program:?} produced no status line; output: {}",
            excerpt(&stdout, &stderr)
        ))
    })?;
    let proved_optimal = status_token == "OPTIMUM FOUND";
    let status = match status_token.as_str() {
        "SATISFIABLE" | "OPTIMUM FOUND" => SolveStatus::Sat,
        "UNSATISFIABLE" => SolveStatus::Unsat,
        other => {
            return Err(Error::Environment(format!(
                "unrecognized solver status {other:?}; output: {}",
                excerpt(&stdout, &stderr)
            )))
        }
    };
    let model = match status {
        SolveStatus::Sat => {
            if !saw_values {
                return Err(Error::Environment(format!(
                    "{program:?} reported satisfiable but printed no model lines; output: {}",
                    excerpt(&stdout, &stderr)
                )));
            }
            let max_var = lits.iter().map(|l| l.unsigned_abs() as usize).max();
            let mut m = vec![false; max_var.unwrap_or(0)];
            for &l in &lits {
                m[l.unsigned_abs() as usize - 1] = l > 0;
            }
            Some(m)
        }
        _ => None,
    };
    Ok(ExternalResult {
        outcome: SolveOutcome { status, model },
        cost,
        proved_optimal,
    })
}
