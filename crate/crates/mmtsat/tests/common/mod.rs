//! Helpers shared by the integration test targets.
#![allow(dead_code)]

pub mod laws;

use std::cmp::Ordering;
use std::path::Path;
use std::time::Duration;

use mmtsat::canonical::{Rep, SymmetricDecomposition};
use mmtsat::driver::{
    run_campaign, CampaignConfig, CampaignReport, Checkpoint, ComboState, ComboStatus, SolverCommand,
};
use mmtsat::encoder::{EncoderConfig, Expr, ExprBuilder};
use mmtsat::gf2::{all_square, lex_compare, Gf2Matrix};
use mmtsat::symmetry::{expand_orbit, validate_rep, Combo, GroupId, OrbitKind};
use mmtsat::tensor::{evaluate, Decomposition, Dims, Triplet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mmtsat")
}

/// The bundled solver as an external command.
pub fn bundled_solver() -> SolverCommand {
    SolverCommand::new(&format!("'{}' dimacs-solve {{cnf}}", bin())).expect("template")
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Gf2Matrix {
    let flat: Vec<bool> = (0..rows * cols).map(|_| rng.gen_bool(0.4)).collect();
    Gf2Matrix::from_flat(rows, cols, &flat).expect("shape")
}

pub fn random_triplet(rng: &mut impl Rng, dims: Dims) -> Triplet {
    let (a, b, c) = (dims.a_shape(), dims.b_shape(), dims.c_shape());
    Triplet::new(
        random_matrix(rng, a.0, a.1),
        random_matrix(rng, b.0, b.1),
        random_matrix(rng, c.0, c.1),
    )
}

/// Side lengths a group may act on in these tests.
pub fn sizes(group: GroupId) -> &'static [usize] {
    match group {
        GroupId::CyclicSandwich => &[3],
        _ => &[2, 3],
    }
}

/// A random representative of `kind` satisfying its side conditions.
pub fn random_rep(rng: &mut impl Rng, group: GroupId, kind: OrbitKind, dims: Dims) -> Rep {
    let pool: Vec<Gf2Matrix> = if group == GroupId::Trivial {
        Vec::new()
    } else {
        all_square(dims.n).collect()
    };
    loop {
        let rep: Rep = if group == GroupId::Trivial {
            let t = random_triplet(rng, dims);
            vec![t.a, t.b, t.c]
        } else {
            (0..kind.arity())
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        random_matrix(rng, dims.n, dims.n)
                    } else {
                        *pool.choose(rng).expect("nonempty")
                    }
                })
                .collect()
        };
        let rep = repair(group, kind, rep);
        if validate_rep(group, kind, &rep).is_ok() {
            return rep;
        }
    }
}

/// Projects matrices onto the side conditions so sampling rarely retries.
fn repair(group: GroupId, kind: OrbitKind, mut rep: Rep) -> Rep {
    match (group, kind) {
        (GroupId::CyclicTranspose, OrbitKind::Transpose | OrbitKind::Full) => {
            let s = rep[0];
            let mut sym = s;
            for i in 0..s.rows() {
                for j in 0..i {
                    sym.set(i, j, s.get(j, i));
                }
            }
            rep[0] = sym;
        }
        (GroupId::CyclicSandwich, OrbitKind::Sandwich | OrbitKind::Full) => {
            for m in rep.iter_mut() {
                // F-invariant: m10 = m12 = m20 = 0 and m00 = m11
                m.set(1, 0, false);
                m.set(1, 2, false);
                m.set(2, 0, false);
                let d = m.get(0, 0);
                m.set(1, 1, d);
            }
        }
        _ => {}
    }
    rep
}

pub fn random_dims(rng: &mut impl Rng, group: GroupId) -> Dims {
    if group == GroupId::Trivial {
        Dims::new(rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3)).expect("dims")
    } else {
        Dims::square(*sizes(group).choose(rng).expect("size")).expect("dims")
    }
}

/// Random symmetric decomposition; reps need not be canonical, distinct or nonzero.
pub fn random_symmetric(rng: &mut impl Rng, group: GroupId) -> SymmetricDecomposition {
    let dims = random_dims(rng, group);
    let orbits = group
        .kinds()
        .iter()
        .map(|&kind| {
            let count = rng.gen_range(0..=3);
            (0..count).map(|_| random_rep(rng, group, kind, dims)).collect()
        })
        .collect();
    SymmetricDecomposition::new(group, dims, orbits).expect("valid reps")
}

/// Standard rank-n^3 decomposition `sum E_ij (x) E_jl (x) E_li`.
pub fn naive_decomposition(n: usize) -> Decomposition {
    let e = |i: usize, j: usize| {
        let mut m = Gf2Matrix::zero(n, n).expect("shape");
        m.set(i, j, true);
        m
    };
    let mut ts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                ts.push(Triplet::new(e(i, j), e(j, l), e(l, i)));
            }
        }
    }
    Decomposition::new(Dims::square(n).expect("dims"), ts).expect("shapes")
}

/// Tensor of one orbit.
pub fn orbit_tensor(group: GroupId, kind: OrbitKind, rep: &[Gf2Matrix], dims: Dims) -> mmtsat::tensor::Tensor6 {
    let ts = expand_orbit(group, kind, rep).expect("valid rep");
    evaluate(&Decomposition::new(dims, ts).expect("shapes"))
}

/// Exhaustive check of `lex_less` on constant inputs of length <= 6.
pub fn lex_circuit_exhaustive() -> Result<(), String> {
    let mut b = ExprBuilder::new();
    for len in 0..=6usize {
        for x in 0u32..(1 << len) {
            for y in 0u32..(1 << len) {
                let bits = |v: u32| -> Vec<bool> { (0..len).map(|i| v >> (len - 1 - i) & 1 == 1).collect() };
                let (xb, yb) = (bits(x), bits(y));
                let xe: Vec<Expr> = xb.iter().map(|&v| Expr::constant(v)).collect();
                let ye: Vec<Expr> = yb.iter().map(|&v| Expr::constant(v)).collect();
                let got = b.lex_less(&xe, &ye).map_err(|e| e.to_string())?.as_const();
                let want = lex_compare(&xb, &yb).map_err(|e| e.to_string())? == Ordering::Less;
                if got != Some(want) {
                    return Err(format!("lex_less({xb:?}, {yb:?}) = {got:?}, want {want}"));
                }
            }
        }
    }
    Ok(())
}

pub fn random_checkpoint(rng: &mut impl Rng) -> Checkpoint {
    let group = *GroupId::ALL.choose(rng).expect("group");
    let max_rank = rng.gen_range(0..=9);
    let combos = mmtsat::driver::enumerate_combos(group, max_rank)
        .into_iter()
        .map(|combo| {
            let state = match rng.gen_range(0..5) {
                0 => ComboState::Pending,
                1 => ComboState::Unsat,
                2 => ComboState::Timeout,
                3 => ComboState::Sat(format!("out/{}.json", rng.gen::<u16>()).into()),
                _ => ComboState::Error(format!("exit {} \"quoted\" \\ text", rng.gen::<u8>())),
            };
            ComboStatus {
                combo,
                state,
                seconds: rng.gen_range(0.0..1e6),
                solver: if rng.gen_bool(0.5) {
                    "kissat".into()
                } else {
                    String::new()
                },
            }
        })
        .collect();
    Checkpoint {
        group,
        dims: if group == GroupId::CyclicSandwich {
            3
        } else {
            rng.gen_range(1..=4)
        },
        max_rank,
        combos,
    }
}

pub fn campaign(
    group: GroupId,
    n: usize,
    max_rank: u32,
    work: &Path,
    schedule: Option<Vec<usize>>,
    timeout: Option<Duration>,
) -> CampaignReport {
    let cfg = CampaignConfig {
        group,
        n,
        max_rank,
        solver: bundled_solver(),
        workers: 1,
        timeout,
        checkpoint: Some(work.join("checkpoint.json")),
        work_dir: work.to_path_buf(),
        encoder: EncoderConfig::default(),
        schedule,
    };
    run_campaign(&cfg, &mut |_| {}).expect("campaign runs")
}

pub fn combo(group: GroupId, text: &str) -> Combo {
    Combo::parse(group, text).expect("combo")
}

/// Whether `cnf` with the primary variables fixed to describe `sym` is
/// satisfiable, decided by the bundled solver.
pub fn extends_to_model(
    cnf: &mmtsat::encoder::CnfInstance,
    map: &mmtsat::encoder::VarMap,
    sym: &SymmetricDecomposition,
    dir: &Path,
) -> bool {
    let mut fixed = cnf.clone();
    let model = mmtsat::encoder::assignment_of(sym, map);
    fixed.clauses.extend(model.literals().into_iter().map(|l| vec![l]));
    let path = dir.join("fixed.cnf");
    std::fs::write(&path, fixed.to_dimacs()).expect("write cnf");
    let status = std::process::Command::new(bin())
        .arg("dimacs-solve")
        .arg(&path)
        .stdout(std::process::Stdio::null())
        .status()
        .expect("run solver");
    match status.code() {
        Some(10) => true,
        Some(20) => false,
        other => panic!("solver exit {other:?}"),
    }
}
