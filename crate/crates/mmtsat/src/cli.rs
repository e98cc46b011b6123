//! The `mmtsat` command line.
//!
//! Exit codes: 0 ruled out or verified, 10 decomposition found, 20
//! undetermined, 1 error, 2 bad usage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::canonical::{canonicalize, check_canonical, SymmetricDecomposition};
use crate::driver::{
    combo_stem, run_campaign, solve_one, CampaignConfig, ComboState, DriverError, SolveRequest, SolverCommand,
};
use crate::encoder::{encode, EncoderConfig};
use crate::oracle::{brute_min_rank, MinRank, SearchBudget};
use crate::symmetry::{is_group_symmetric, Combo, GroupId};
use crate::tensor::{verify, Decomposition, Dims};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FOUND: i32 = 10;
pub const EXIT_UNDETERMINED: i32 = 20;

/// Environment variable consulted for the solver template when neither a
/// flag nor the config file names one.
pub const SOLVER_ENV: &str = "MMTSAT_SOLVER";

#[derive(Parser, Debug)]
#[command(
    name = "mmtsat",
    version,
    about = "SAT search for symmetric GF(2) matrix multiplication schemes"
)]
pub struct Cli {
    /// Print a machine-readable JSON result on stdout; human output goes to stderr.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the CNF (and variable map) for one orbit-count combination.
    Encode {
        #[command(flatten)]
        target: Target,
        /// Orbit counts, e.g. `id=2,delta=1`.
        #[arg(long)]
        combo: String,
        #[arg(long)]
        out: PathBuf,
        /// Variable map sidecar; defaults to `<out>.varmap.json`.
        #[arg(long)]
        varmap: Option<PathBuf>,
        #[command(flatten)]
        encoder: EncoderFlags,
    },
    /// Encode and solve one combination.
    SolveOne {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        combo: String,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        encoder: EncoderFlags,
        /// Keep the generated CNF in the work directory.
        #[arg(long)]
        keep_cnf: bool,
    },
    /// Run every combination up to a total rank.
    Search {
        #[arg(long)]
        group: GroupId,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_rank: u32,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        encoder: EncoderFlags,
        #[arg(long)]
        workers: Option<usize>,
        /// Checkpoint file, created or resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Check a decomposition JSON file (plain or symmetric).
    Verify { file: PathBuf },
    /// Bring a symmetric decomposition into canonical form.
    Canonicalize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum rank by exhaustive search (tiny tensors only).
    Brute {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 7)]
        max_rank: usize,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Solve a DIMACS file with the bundled CaDiCaL (usable as `--solver`).
    #[cfg(feature = "bundled-solver")]
    DimacsSolve { cnf: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    #[arg(long)]
    pub group: GroupId,
    #[arg(long)]
    pub n: usize,
    /// Inner dimension (trivial group only); defaults to n.
    #[arg(long)]
    pub k: Option<usize>,
    /// Output columns (trivial group only); defaults to n.
    #[arg(long)]
    pub m: Option<usize>,
}

impl Target {
    fn dims(&self) -> Result<Dims, String> {
        Dims::new(self.n, self.k.unwrap_or(self.n), self.m.unwrap_or(self.n)).map_err(|e| e.to_string())
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct EncoderFlags {
    #[arg(long)]
    pub per_matrix_nonzero: bool,
    #[arg(long)]
    pub s_neq_h: bool,
    #[arg(long)]
    pub xor_width: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunFlags {
    /// Solver command template with a `{cnf}` placeholder.
    #[arg(long)]
    pub solver: Option<String>,
    /// Per-combination timeout in seconds.
    #[arg(long)]
    pub timeout: Option<u64>,
    #[arg(long)]
    pub work_dir: Option<PathBuf>,
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of the TOML config file; every field is optional.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub solver: Option<String>,
    pub workers: Option<usize>,
    pub timeout: Option<u64>,
    pub work_dir: Option<PathBuf>,
    pub encoder: Option<FileEncoder>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileEncoder {
    pub per_matrix_nonzero: Option<bool>,
    pub s_neq_h: Option<bool>,
    pub xor_width: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Effective run settings after applying precedence.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub solver: String,
    pub workers: usize,
    pub timeout: Option<Duration>,
    pub work_dir: PathBuf,
    pub encoder: EncoderConfig,
}

/// Flags override the config file, which overrides `MMTSAT_SOLVER`.
pub fn resolve_settings(
    run: &RunFlags,
    enc: &EncoderFlags,
    workers: Option<usize>,
    env_solver: Option<String>,
) -> Result<Settings, String> {
    let file = match &run.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let solver = run
        .solver
        .clone()
        .or(file.solver.clone())
        .or(env_solver)
        .ok_or_else(|| format!("no solver: pass --solver, set `solver` in --config, or set {SOLVER_ENV}"))?;
    if !solver.contains("{cnf}") {
        return Err(format!("solver template {solver:?} lacks the {{cnf}} placeholder"));
    }
    let workers = workers.or(file.workers).unwrap_or(1);
    if workers == 0 {
        return Err("workers must be positive".into());
    }
    let timeout = run.timeout.or(file.timeout);
    if timeout == Some(0) {
        return Err("timeout must be positive".into());
    }
    let fe = file.encoder.unwrap_or_default();
    let defaults = EncoderConfig::default();
    let encoder = EncoderConfig {
        per_matrix_nonzero: enc.per_matrix_nonzero || fe.per_matrix_nonzero.unwrap_or(defaults.per_matrix_nonzero),
        s_neq_h: enc.s_neq_h || fe.s_neq_h.unwrap_or(defaults.s_neq_h),
        xor_width: enc.xor_width.or(fe.xor_width).unwrap_or(defaults.xor_width),
    };
    if encoder.xor_width < 3 {
        return Err(format!("--xor-width must be at least 3, got {}", encoder.xor_width));
    }
    Ok(Settings {
        solver,
        workers,
        timeout: timeout.map(Duration::from_secs),
        work_dir: run
            .work_dir
            .clone()
            .or(file.work_dir)
            .unwrap_or_else(|| PathBuf::from("mmtsat-work")),
        encoder,
    })
}

/// Prints human output to stdout, or to stderr when `--json` claims stdout.
struct Out {
    json: bool,
}

impl Out {
    fn say(&self, text: &str) {
        if self.json {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
    }

    fn emit(&self, value: Value) {
        if self.json {
            println!("{}", serde_json::to_string(&value).expect("serializable"));
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = Out { json: cli.json };
    match dispatch(cli.command, &out) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            out.emit(json!({ "error": msg }));
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &Out) -> Result<i32, String> {
    let env_solver = || std::env::var(SOLVER_ENV).ok();
    match command {
        Command::Encode {
            target,
            combo,
            out: path,
            varmap,
            encoder,
        } => {
            let settings_encoder = resolve_encoder_only(&encoder)?;
            let dims = target.dims()?;
            let combo = Combo::parse(target.group, &combo).map_err(|e| format!("--combo: {e}"))?;
            let (cnf, map) = encode(target.group, dims, &combo, &settings_encoder).map_err(|e| e.to_string())?;
            let varmap = varmap.unwrap_or_else(|| {
                let mut p = path.as_os_str().to_owned();
                p.push(".varmap.json");
                PathBuf::from(p)
            });
            write(&path, &cnf.to_dimacs())?;
            write(&varmap, &map.to_json())?;
            out.say(&format!(
                "{} {dims} {combo}: {} variables ({} primary), {} clauses -> {}",
                target.group,
                cnf.num_vars,
                map.primary.len(),
                cnf.clauses.len(),
                path.display()
            ));
            out.emit(json!({
                "cnf": path.to_string_lossy(),
                "varmap": varmap.to_string_lossy(),
                "variables": cnf.num_vars,
                "primary": map.primary.len(),
                "clauses": cnf.clauses.len(),
            }));
            Ok(EXIT_OK)
        }
        Command::SolveOne {
            target,
            combo,
            run,
            encoder,
            keep_cnf,
        } => {
            let s = resolve_settings(&run, &encoder, None, env_solver())?;
            let dims = target.dims()?;
            let combo = Combo::parse(target.group, &combo).map_err(|e| format!("--combo: {e}"))?;
            let solver = SolverCommand::new(&s.solver).map_err(|e| e.to_string())?;
            let req = SolveRequest {
                dims,
                combo: combo.clone(),
                encoder: s.encoder,
                solver: &solver,
                timeout: s.timeout,
                work_dir: &s.work_dir,
                keep_cnf,
            };
            let outcome = solve_one(&req, &AtomicBool::new(false)).map_err(|e| e.to_string())?;
            let st = &outcome.status;
            let (code, text) = match &st.state {
                ComboState::Unsat => (EXIT_OK, "UNSAT".to_string()),
                ComboState::Sat(p) => (EXIT_FOUND, format!("SAT, decomposition written to {}", p.display())),
                ComboState::Timeout => (EXIT_UNDETERMINED, "timeout".to_string()),
                ComboState::Error(m) => (EXIT_UNDETERMINED, format!("solver error: {m}")),
                ComboState::Pending => (EXIT_UNDETERMINED, "not run".to_string()),
            };
            out.say(&format!(
                "{} {dims} {combo} (rank {}): {text} [{:.2}s]",
                target.group,
                combo.total_rank(),
                st.seconds
            ));
            let mut v = json!({
                "group": target.group.name(),
                "combo": combo.to_string(),
                "state": st.state.name(),
                "seconds": st.seconds,
                "cnf": keep_cnf.then(|| s.work_dir.join(format!("{}.cnf", combo_stem(dims, &combo))).to_string_lossy().into_owned()),
            });
            if let ComboState::Sat(p) = &st.state {
                v["decomposition"] = json!(p.to_string_lossy());
            }
            out.emit(v);
            Ok(code)
        }
        Command::Search {
            group,
            n,
            max_rank,
            run,
            encoder,
            workers,
            checkpoint,
        } => {
            let s = resolve_settings(&run, &encoder, workers, env_solver())?;
            let cfg = CampaignConfig {
                group,
                n,
                max_rank,
                solver: SolverCommand::new(&s.solver).map_err(|e| e.to_string())?,
                workers: s.workers,
                timeout: s.timeout,
                checkpoint,
                work_dir: s.work_dir,
                encoder: s.encoder,
                schedule: None,
            };
            let report = run_campaign(&cfg, &mut |r| {
                eprintln!(
                    "  {:<28} {:<8} {:>9.2}s",
                    r.combo.to_string(),
                    r.state.name(),
                    r.seconds
                )
            })
            .map_err(|e| match e {
                DriverError::Soundness { .. } => format!("campaign aborted: {e}"),
                other => other.to_string(),
            })?;
            out.say(&report.table());
            out.emit(report.to_json());
            Ok(report.verdict.exit_code())
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            let (plain, sym) = if value.get("orbits").is_some() {
                let sym =
                    SymmetricDecomposition::from_json_value(&value).map_err(|e| format!("{}: {e}", file.display()))?;
                (sym.expand(), Some(sym))
            } else {
                (
                    Decomposition::from_json(&text).map_err(|e| format!("{}: {e}", file.display()))?,
                    None,
                )
            };
            let valid = verify(&plain);
            let mut v = json!({ "valid": valid, "rank": plain.rank(), "dims": plain.dims.to_string() });
            let mut ok = valid;
            if valid {
                out.say(&format!("valid rank-{} decomposition of {}", plain.rank(), plain.dims));
            } else {
                out.say(&format!(
                    "NOT a decomposition of {} (rank {})",
                    plain.dims,
                    plain.rank()
                ));
            }
            if let Some(sym) = sym {
                let symmetric = is_group_symmetric(&plain, sym.group);
                let violations: Vec<String> = check_canonical(&sym).iter().map(ToString::to_string).collect();
                out.say(&format!(
                    "{}-symmetric: {symmetric}; canonical: {}",
                    sym.group,
                    if violations.is_empty() {
                        "yes".to_string()
                    } else {
                        violations.join("; ")
                    }
                ));
                v["group"] = json!(sym.group.name());
                v["symmetric"] = json!(symmetric);
                v["canonical"] = json!(violations.is_empty());
                ok &= symmetric;
            }
            out.emit(v);
            Ok(if ok { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Canonicalize { file, out: path } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let sym = SymmetricDecomposition::from_json(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            let canon = canonicalize(&sym);
            out.say(&format!(
                "{} -> {} (rank {} -> {})",
                sym.combo(),
                canon.combo(),
                sym.total_rank(),
                canon.total_rank()
            ));
            let body = canon.to_json_pretty();
            match &path {
                Some(p) => write(p, &body)?,
                None if !out.json => println!("{body}"),
                None => {}
            }
            out.emit(json!({
                "combo": canon.combo().to_string(),
                "rank": canon.total_rank(),
                "decomposition": serde_json::from_str::<Value>(&body).expect("valid JSON"),
            }));
            Ok(EXIT_OK)
        }
        Command::Brute {
            n,
            k,
            m,
            max_rank,
            node_limit,
        } => {
            let mut budget = SearchBudget::new(max_rank).map_err(|e| e.to_string())?;
            if let Some(l) = node_limit {
                budget = budget.with_node_limit(l);
            }
            let result = brute_min_rank(n, k, m, budget).map_err(|e| e.to_string())?;
            let (code, v) = match &result {
                MinRank::Rank(d) => {
                    out.say(&format!("<{n},{k},{m}>: rank {}", d.rank()));
                    (
                        EXIT_OK,
                        json!({ "rank": d.rank(), "decomposition": serde_json::from_str::<Value>(&d.to_json()).expect("valid JSON") }),
                    )
                }
                MinRank::AboveMaxRank { max_rank } => {
                    out.say(&format!("<{n},{k},{m}>: rank exceeds {max_rank}"));
                    (EXIT_OK, json!({ "rank_above": max_rank }))
                }
                MinRank::NodeLimit { settled_above } => {
                    out.say(&format!("<{n},{k},{m}>: node limit hit; rank exceeds {settled_above}"));
                    (
                        EXIT_UNDETERMINED,
                        json!({ "node_limit": true, "rank_above": settled_above }),
                    )
                }
            };
            out.emit(v);
            Ok(code)
        }
        #[cfg(feature = "bundled-solver")]
        Command::DimacsSolve { cnf } => dimacs_solve(&cnf),
    }
}

fn resolve_encoder_only(enc: &EncoderFlags) -> Result<EncoderConfig, String> {
    let cfg = EncoderConfig {
        per_matrix_nonzero: enc.per_matrix_nonzero,
        s_neq_h: enc.s_neq_h,
        xor_width: enc.xor_width.unwrap_or(EncoderConfig::default().xor_width),
    };
    if cfg.xor_width < 3 {
        return Err(format!("--xor-width must be at least 3, got {}", cfg.xor_width));
    }
    Ok(cfg)
}

fn write(path: &Path, body: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
}

/// Competition-style output: `s` line, `v` lines, exit 10 or 20.
#[cfg(feature = "bundled-solver")]
fn dimacs_solve(path: &Path) -> Result<i32, String> {
    use std::io::Write;

    use crate::encoder::CnfInstance;

    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cnf = CnfInstance::parse_dimacs(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let stdout = std::io::stdout();
    let mut w = std::io::BufWriter::new(stdout.lock());
    let io = |e: std::io::Error| e.to_string();
    if cnf.clauses.iter().any(Vec::is_empty) {
        writeln!(w, "s UNSATISFIABLE").map_err(io)?;
        return Ok(20);
    }
    let mut solver: cadical::Solver = cadical::Solver::new();
    for c in &cnf.clauses {
        solver.add_clause(c.iter().copied());
    }
    match solver.solve() {
        Some(true) => {
            writeln!(w, "s SATISFIABLE").map_err(io)?;
            let mut line = String::from("v");
            for v in 1..=cnf.num_vars as i32 {
                let lit = if solver.value(v) == Some(true) { v } else { -v };
                line.push_str(&format!(" {lit}"));
                if line.len() > 70 {
                    writeln!(w, "{line}").map_err(io)?;
                    line = String::from("v");
                }
            }
            writeln!(w, "{line} 0").map_err(io)?;
            Ok(10)
        }
        Some(false) => {
            writeln!(w, "s UNSATISFIABLE").map_err(io)?;
            Ok(20)
        }
        None => {
            writeln!(w, "s UNKNOWN").map_err(io)?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(solver: Option<&str>) -> RunFlags {
        RunFlags {
            solver: solver.map(String::from),
            ..Default::default()
        }
    }

    #[test]
    fn solver_precedence() {
        let enc = EncoderFlags::default();
        let env = || Some("env {cnf}".to_string());
        assert_eq!(
            resolve_settings(&flags(Some("flag {cnf}")), &enc, None, env())
                .unwrap()
                .solver,
            "flag {cnf}"
        );
        assert_eq!(
            resolve_settings(&flags(None), &enc, None, env()).unwrap().solver,
            "env {cnf}"
        );
        assert!(resolve_settings(&flags(None), &enc, None, None).is_err());
        assert!(resolve_settings(&flags(Some("nope")), &enc, None, None).is_err());

        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "solver = \"file {cnf}\"\nworkers = 3\n[encoder]\nxor_width = 5\n").unwrap();
        let with_file = RunFlags {
            config: Some(cfg.clone()),
            ..Default::default()
        };
        let s = resolve_settings(&with_file, &enc, None, env()).unwrap();
        assert_eq!(
            (s.solver.as_str(), s.workers, s.encoder.xor_width),
            ("file {cnf}", 3, 5)
        );
        let s = resolve_settings(
            &RunFlags {
                solver: Some("flag {cnf}".into()),
                ..with_file
            },
            &enc,
            Some(2),
            env(),
        )
        .unwrap();
        assert_eq!((s.solver.as_str(), s.workers), ("flag {cnf}", 2));
    }

    #[test]
    fn config_rejects_unknown_keys_and_zero_values() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "solvr = \"x {cnf}\"\n").unwrap();
        let f = RunFlags {
            config: Some(cfg),
            ..Default::default()
        };
        assert!(resolve_settings(&f, &EncoderFlags::default(), None, None).is_err());
        let zero = RunFlags {
            timeout: Some(0),
            ..flags(Some("s {cnf}"))
        };
        assert!(resolve_settings(&zero, &EncoderFlags::default(), None, None).is_err());
    }

    #[test]
    fn bad_flags_exit_two() {
        assert_eq!(run(["mmtsat", "encode", "--group", "nope"]), EXIT_USAGE);
        assert_eq!(run(["mmtsat", "frobnicate"]), EXIT_USAGE);
    }
}
