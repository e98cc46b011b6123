//! External solver invocation and output parsing.

use std::fs::File;
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use wait_timeout::ChildExt;

use super::DriverError;
use crate::encoder::Model;

/// Result of reading a solver's standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverOutput {
    Sat(Model),
    Unsat,
    Unknown(String),
}

/// Parses competition-style output: an `s` status line plus `v` literal lines.
pub fn parse_solver_output(text: &str) -> SolverOutput {
    let mut status: Option<&str> = None;
    let mut lits = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            let s = s.trim();
            if status.is_some_and(|prev| prev != s) {
                return SolverOutput::Unknown(format!("conflicting status lines {:?} and {s:?}", status.unwrap()));
            }
            status = Some(s);
        } else if let Some(v) = line.strip_prefix('v') {
            for tok in v.split_whitespace() {
                match tok.parse::<i32>() {
                    Ok(l) => lits.push(l),
                    Err(_) => return SolverOutput::Unknown(format!("bad literal {tok:?} on v line")),
                }
            }
        }
    }
    match status {
        Some("UNSATISFIABLE") if lits.is_empty() => SolverOutput::Unsat,
        Some("UNSATISFIABLE") => SolverOutput::Unknown("v lines after UNSATISFIABLE".into()),
        Some("SATISFIABLE") => {
            if lits.is_empty() {
                return SolverOutput::Unknown("SATISFIABLE without a model".into());
            }
            let model = Model::from_literals(lits.iter().copied());
            if let Some(&l) = lits
                .iter()
                .find(|&&l| l != 0 && model.get(l.unsigned_abs()) != Some(l > 0))
            {
                return SolverOutput::Unknown(format!("model assigns variable {} both ways", l.abs()));
            }
            SolverOutput::Sat(model)
        }
        Some(other) => SolverOutput::Unknown(format!("status {other:?}")),
        None => SolverOutput::Unknown("no status line".into()),
    }
}

/// A solver command template such as `kissat -q {cnf}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverCommand {
    template: String,
    argv: Vec<String>,
}

impl SolverCommand {
    pub fn new(template: &str) -> Result<Self, DriverError> {
        if !template.contains("{cnf}") {
            return Err(DriverError::Solver(format!(
                "template {template:?} lacks the {{cnf}} placeholder"
            )));
        }
        let argv = shlex::split(template)
            .filter(|a| !a.is_empty())
            .ok_or_else(|| DriverError::Solver(format!("cannot split template {template:?}")))?;
        Ok(Self {
            template: template.to_string(),
            argv,
        })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    /// Program name, recorded in checkpoints.
    pub fn name(&self) -> String {
        Path::new(&self.argv[0])
            .file_name()
            .map_or_else(|| self.argv[0].clone(), |n| n.to_string_lossy().into_owned())
    }
}

#[derive(Debug)]
pub(crate) enum RunOutcome {
    Finished {
        output: String,
        stderr: String,
        code: Option<i32>,
    },
    TimedOut,
    Cancelled,
}

/// Runs the solver on `cnf`. Output goes to files next to it so large
/// models cannot fill a pipe.
pub(crate) fn run_solver(
    cmd: &SolverCommand,
    cnf: &Path,
    timeout: Option<Duration>,
    cancel: &AtomicBool,
) -> Result<RunOutcome, DriverError> {
    let cnf_str = cnf.to_string_lossy();
    let args: Vec<String> = cmd.argv.iter().map(|a| a.replace("{cnf}", &cnf_str)).collect();
    let out_path = cnf.with_extension("out");
    let err_path = cnf.with_extension("err");
    let io = |e: std::io::Error| DriverError::Io(format!("{}: {e}", out_path.display()));
    let mut child = Command::new(&args[0])
        .args(&args[1..])
        .stdin(Stdio::null())
        .stdout(File::create(&out_path).map_err(io)?)
        .stderr(File::create(&err_path).map_err(io)?)
        .spawn()
        .map_err(|e| DriverError::Solver(format!("cannot start {:?}: {e}", args[0])))?;
    let start = Instant::now();
    let status = loop {
        let stop = |child: &mut std::process::Child, outcome| {
            let _ = child.kill();
            let _ = child.wait();
            let _ = std::fs::remove_file(&out_path);
            let _ = std::fs::remove_file(&err_path);
            Ok(outcome)
        };
        if cancel.load(Ordering::SeqCst) {
            return stop(&mut child, RunOutcome::Cancelled);
        }
        let slice = match timeout {
            Some(t) if start.elapsed() >= t => return stop(&mut child, RunOutcome::TimedOut),
            Some(t) => (t - start.elapsed()).min(Duration::from_millis(100)),
            None => Duration::from_millis(100),
        };
        if let Some(status) = child.wait_timeout(slice).map_err(io)? {
            break status;
        }
    };
    let output = std::fs::read_to_string(&out_path).map_err(io)?;
    let stderr = std::fs::read_to_string(&err_path).unwrap_or_default();
    let _ = std::fs::remove_file(&out_path);
    let _ = std::fs::remove_file(&err_path);
    Ok(RunOutcome::Finished {
        output,
        stderr,
        code: status.code(),
    })
}
