//! Campaigns: every orbit-count combination up to a rank bound, each solved
//! by an external SAT solver, with a resumable checkpoint.

mod checkpoint;
mod solver;

use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Mutex};
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use thiserror::Error;

pub use checkpoint::{Checkpoint, ComboState, ComboStatus};
pub use solver::{parse_solver_output, SolverCommand, SolverOutput};

use crate::canonical::SymmetricDecomposition;
use crate::encoder::{audit, decode, encode, EncodeError, EncoderConfig};
use crate::symmetry::{Combo, GroupId};
use crate::tensor::Dims;
use solver::{run_solver, RunOutcome};

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("solver: {0}")]
    Solver(String),
    #[error("io: {0}")]
    Io(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("invalid campaign: {0}")]
    Config(String),
    /// A solver model satisfied the CNF but decoded to something invalid.
    #[error("ENCODER SOUNDNESS VIOLATION on combo {combo}: {}", problems.join("; "))]
    Soundness { combo: String, problems: Vec<String> },
    #[error("report: {0}")]
    Report(String),
}

/// Every count vector with total rank at most `max_rank`, by descending
/// total rank, then lexicographically by counts.
pub fn enumerate_combos(group: GroupId, max_rank: u32) -> Vec<Combo> {
    fn rec(group: GroupId, pos: usize, left: u32, counts: &mut Vec<u32>, out: &mut Vec<Combo>) {
        let kinds = group.kinds();
        if pos == kinds.len() {
            out.push(Combo::new(group, counts.clone()).expect("aligned"));
            return;
        }
        let len = group.orbit_len(kinds[pos]) as u32;
        for c in 0..=left / len {
            counts.push(c);
            rec(group, pos + 1, left - c * len, counts, out);
            counts.pop();
        }
    }
    let mut out = Vec::new();
    rec(group, 0, max_rank, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        b.total_rank()
            .cmp(&a.total_rank())
            .then_with(|| a.counts.cmp(&b.counts))
    });
    out
}

/// Solver name recorded for the empty combo, which is decided without one.
pub const NO_SOLVER: &str = "none (empty combo)";

/// One combo to solve.
#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    pub dims: Dims,
    pub combo: Combo,
    pub encoder: EncoderConfig,
    pub solver: &'a SolverCommand,
    pub timeout: Option<Duration>,
    /// Where the CNF and any found decomposition are written.
    pub work_dir: &'a Path,
    pub keep_cnf: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: ComboStatus,
    pub decomposition: Option<SymmetricDecomposition>,
}

/// File stem for a combo, e.g. `cyc-n3-id2-delta1`.
pub fn combo_stem(dims: Dims, combo: &Combo) -> String {
    let mut s = format!("{}-n{}", combo.group.name(), dims.n);
    if !dims.is_square() {
        s = format!("{}-{}x{}x{}", combo.group.name(), dims.n, dims.k, dims.m);
    }
    for (kind, c) in combo.iter() {
        s.push_str(&format!("-{}{c}", kind.name()));
    }
    s
}

/// Encodes and solves one combo. A found decomposition is audited and
/// saved; a model that satisfies the CNF but fails the audit is an error
/// of the whole run, not of the combo.
pub fn solve_one(req: &SolveRequest<'_>, cancel: &AtomicBool) -> Result<SolveOutcome, DriverError> {
    let group = req.combo.group;
    let mut status = ComboStatus::pending(req.combo.clone());
    if req.combo.total_rank() == 0 {
        // the empty sum is never the (nonzero) target tensor
        status.state = ComboState::Unsat;
        status.solver = NO_SOLVER.into();
        return Ok(SolveOutcome {
            status,
            decomposition: None,
        });
    }
    let (cnf, map) = encode(group, req.dims, &req.combo, &req.encoder)?;
    std::fs::create_dir_all(req.work_dir).map_err(|e| DriverError::Io(format!("{}: {e}", req.work_dir.display())))?;
    let stem = combo_stem(req.dims, &req.combo);
    let cnf_path = req.work_dir.join(format!("{stem}.cnf"));
    std::fs::write(&cnf_path, cnf.to_dimacs()).map_err(|e| DriverError::Io(format!("{}: {e}", cnf_path.display())))?;
    status.solver = req.solver.name();
    let start = Instant::now();
    let run = run_solver(req.solver, &cnf_path, req.timeout, cancel);
    status.seconds = (start.elapsed().as_secs_f64() * 1000.0).round() / 1000.0;
    if !req.keep_cnf {
        let _ = std::fs::remove_file(&cnf_path);
    }
    let mut decomposition = None;
    status.state = match run {
        Err(e) => ComboState::Error(e.to_string()),
        Ok(RunOutcome::Cancelled) => ComboState::Pending,
        Ok(RunOutcome::TimedOut) => ComboState::Timeout,
        Ok(RunOutcome::Finished { output, stderr, code }) => match parse_solver_output(&output) {
            SolverOutput::Unsat => ComboState::Unsat,
            SolverOutput::Unknown(why) => {
                let tail = stderr.lines().last().unwrap_or("").trim();
                ComboState::Error(format!("{why} (exit {code:?}) {tail}").trim_end().to_string())
            }
            SolverOutput::Sat(model) => {
                if !cnf.satisfied_by(&model) {
                    ComboState::Error("solver model does not satisfy the CNF".into())
                } else {
                    let sym = match decode(&model, &map, group, req.dims, &req.combo) {
                        Ok((sym, _)) => sym,
                        Err(EncodeError::MissingVariable(v)) => {
                            return Ok(SolveOutcome {
                                status: ComboStatus {
                                    state: ComboState::Error(format!("model omits variable {v}")),
                                    ..status
                                },
                                decomposition: None,
                            })
                        }
                        Err(e) => {
                            return Err(DriverError::Soundness {
                                combo: req.combo.to_string(),
                                problems: vec![e.to_string()],
                            })
                        }
                    };
                    let problems = audit(&sym);
                    if !problems.is_empty() {
                        return Err(DriverError::Soundness {
                            combo: req.combo.to_string(),
                            problems,
                        });
                    }
                    let path = req.work_dir.join(format!("{stem}.json"));
                    std::fs::write(&path, sym.to_json_pretty())
                        .map_err(|e| DriverError::Io(format!("{}: {e}", path.display())))?;
                    decomposition = Some(sym);
                    ComboState::Sat(path)
                }
            }
        },
    };
    Ok(SolveOutcome { status, decomposition })
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub group: GroupId,
    pub n: usize,
    pub max_rank: u32,
    pub solver: SolverCommand,
    pub workers: usize,
    pub timeout: Option<Duration>,
    pub checkpoint: Option<PathBuf>,
    pub work_dir: PathBuf,
    pub encoder: EncoderConfig,
    /// Execution order as indices into [`enumerate_combos`]; default is
    /// that order, hardest first.
    pub schedule: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Every combo is UNSAT.
    RuledOut,
    Found {
        combo: Combo,
        path: PathBuf,
    },
    Undetermined {
        timeouts: usize,
        errors: usize,
        pending: usize,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::RuledOut => "ruled-out",
            Verdict::Found { .. } => "found",
            Verdict::Undetermined { .. } => "undetermined",
        }
    }

    /// Process exit code for the command line.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::RuledOut => 0,
            Verdict::Found { .. } => 10,
            Verdict::Undetermined { .. } => 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub group: GroupId,
    pub n: usize,
    pub max_rank: u32,
    pub records: Vec<ComboStatus>,
    pub verdict: Verdict,
    /// Solver processes started by this run (0 on a finished resume).
    pub solver_runs: usize,
    /// Sum of per-combo solver times across all runs.
    pub solver_seconds: f64,
}

impl CampaignReport {
    /// Derives the verdict by recounting `records` against the enumeration.
    pub fn from_records(
        group: GroupId,
        n: usize,
        max_rank: u32,
        records: Vec<ComboStatus>,
        solver_runs: usize,
    ) -> Result<Self, DriverError> {
        let expected = enumerate_combos(group, max_rank);
        let mut have: Vec<&Combo> = records.iter().map(|r| &r.combo).collect();
        let mut want: Vec<&Combo> = expected.iter().collect();
        have.sort_by(|a, b| a.counts.cmp(&b.counts));
        want.sort_by(|a, b| a.counts.cmp(&b.counts));
        if have != want {
            return Err(DriverError::Report(format!(
                "{} records for {} enumerated combos, or combos differ",
                records.len(),
                expected.len()
            )));
        }
        let count = |f: fn(&ComboState) -> bool| records.iter().filter(|r| f(&r.state)).count();
        let verdict = if let Some(r) = records.iter().find(|r| matches!(r.state, ComboState::Sat(_))) {
            let ComboState::Sat(path) = &r.state else {
                unreachable!()
            };
            Verdict::Found {
                combo: r.combo.clone(),
                path: path.clone(),
            }
        } else if count(|s| matches!(s, ComboState::Unsat)) == expected.len() {
            Verdict::RuledOut
        } else {
            Verdict::Undetermined {
                timeouts: count(|s| matches!(s, ComboState::Timeout)),
                errors: count(|s| matches!(s, ComboState::Error(_))),
                pending: count(ComboState::is_pending),
            }
        };
        let solver_seconds = records.iter().map(|r| r.seconds).sum();
        Ok(Self {
            group,
            n,
            max_rank,
            records,
            verdict,
            solver_runs,
            solver_seconds,
        })
    }

    /// Summary table: symmetry group, rank ruled out, wall time.
    pub fn table(&self) -> String {
        let result = match &self.verdict {
            Verdict::RuledOut => format!("<= {}", self.max_rank),
            Verdict::Found { combo, .. } => format!("none (found rank {}: {combo})", combo.total_rank()),
            Verdict::Undetermined {
                timeouts,
                errors,
                pending,
            } => {
                format!("undetermined ({timeouts} timeout, {errors} error, {pending} pending)")
            }
        };
        let rows = [
            [
                "symmetry group".to_string(),
                "rank ruled out".to_string(),
                "wall time (s)".to_string(),
            ],
            [
                self.group.label().to_string(),
                result,
                format!("{:.1}", self.solver_seconds),
            ],
        ];
        let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
        let w1 = rows.iter().map(|r| r[1].len()).max().unwrap_or(0);
        let mut out = format!("<{n},{n},{n}>, {} combos\n", self.records.len(), n = self.n);
        for r in &rows {
            out.push_str(&format!("{:<w0$}  {:<w1$}  {}\n", r[0], r[1], r[2]));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "group": self.group.name(),
            "dims": self.n,
            "max_rank": self.max_rank,
            "verdict": self.verdict.name(),
            "combos": self.records.len(),
            "unsat": self.records.iter().filter(|r| r.state == ComboState::Unsat).count(),
            "solver_runs": self.solver_runs,
            "solver_seconds": self.solver_seconds,
        });
        match &self.verdict {
            Verdict::Found { combo, path } => {
                v["found"] = json!({ "combo": combo.to_string(), "decomposition": path.to_string_lossy() });
            }
            Verdict::Undetermined {
                timeouts,
                errors,
                pending,
            } => {
                v["timeouts"] = json!(timeouts);
                v["errors"] = json!(errors);
                v["pending"] = json!(pending);
            }
            Verdict::RuledOut => {}
        }
        v
    }
}

fn initial_records(cfg: &CampaignConfig, combos: &[Combo]) -> Result<Vec<ComboStatus>, DriverError> {
    let fresh = || combos.iter().cloned().map(ComboStatus::pending).collect();
    let Some(path) = &cfg.checkpoint else {
        return Ok(fresh());
    };
    if !path.exists() {
        return Ok(fresh());
    }
    let cp = Checkpoint::load(path)?;
    let same = cp.group == cfg.group
        && cp.dims == cfg.n
        && cp.max_rank == cfg.max_rank
        && cp.combos.len() == combos.len()
        && cp.combos.iter().zip(combos).all(|(r, c)| &r.combo == c);
    if !same {
        return Err(DriverError::Checkpoint(format!(
            "{} belongs to a different campaign",
            path.display()
        )));
    }
    Ok(cp.combos)
}

/// Runs (or resumes) a campaign. `on_update` sees each record as it
/// becomes final.
pub fn run_campaign(
    cfg: &CampaignConfig,
    on_update: &mut dyn FnMut(&ComboStatus),
) -> Result<CampaignReport, DriverError> {
    if cfg.workers == 0 {
        return Err(DriverError::Config("workers must be at least 1".into()));
    }
    let dims = Dims::square(cfg.n).map_err(|e| DriverError::Config(e.to_string()))?;
    if let Some(required) = cfg.group.required_n() {
        if cfg.n != required {
            return Err(EncodeError::WrongSize {
                group: cfg.group,
                required,
            }
            .into());
        }
    }
    let combos = enumerate_combos(cfg.group, cfg.max_rank);
    let mut records = initial_records(cfg, &combos)?;
    let order: Vec<usize> = match &cfg.schedule {
        Some(s) => {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted != (0..combos.len()).collect::<Vec<_>>() {
                return Err(DriverError::Config(
                    "schedule is not a permutation of the combos".into(),
                ));
            }
            s.clone()
        }
        None => (0..combos.len()).collect(),
    };
    let save = |records: &[ComboStatus]| -> Result<(), DriverError> {
        match &cfg.checkpoint {
            Some(p) => Checkpoint {
                group: cfg.group,
                dims: cfg.n,
                max_rank: cfg.max_rank,
                combos: records.to_vec(),
            }
            .save(p),
            None => Ok(()),
        }
    };
    let already_found = records.iter().any(|r| matches!(r.state, ComboState::Sat(_)));
    let queue: VecDeque<usize> = if already_found {
        VecDeque::new()
    } else {
        order.into_iter().filter(|&i| records[i].state.is_pending()).collect()
    };
    let queue = Mutex::new(queue);
    let cancel = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<SolveOutcome, DriverError>)>();
    let mut solver_runs = 0;
    let mut failure = None;
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers {
            let tx = tx.clone();
            let (queue, cancel) = (&queue, &cancel);
            let combos = &combos;
            scope.spawn(move || loop {
                if cancel.load(Ordering::SeqCst) {
                    break;
                }
                let Some(i) = queue.lock().expect("queue lock").pop_front() else {
                    break;
                };
                let req = SolveRequest {
                    dims,
                    combo: combos[i].clone(),
                    encoder: cfg.encoder,
                    solver: &cfg.solver,
                    timeout: cfg.timeout,
                    work_dir: &cfg.work_dir,
                    keep_cnf: false,
                };
                if tx.send((i, solve_one(&req, cancel))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, result) in rx {
            match result {
                Ok(outcome) => {
                    if outcome.status.solver != NO_SOLVER {
                        solver_runs += 1;
                    }
                    if outcome.status.state.is_pending() {
                        continue;
                    }
                    if matches!(outcome.status.state, ComboState::Sat(_)) {
                        cancel.store(true, Ordering::SeqCst);
                    }
                    records[i] = outcome.status;
                    on_update(&records[i]);
                    if let Err(e) = save(&records) {
                        cancel.store(true, Ordering::SeqCst);
                        failure.get_or_insert(e);
                    }
                }
                Err(e) => {
                    cancel.store(true, Ordering::SeqCst);
                    failure.get_or_insert(e);
                }
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    save(&records)?;
    CampaignReport::from_records(cfg.group, cfg.n, cfg.max_rank, records, solver_runs)
}
