//! Invariant checks over one seeded random input each. Shared by the
//! property tests and the acceptance runner.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::*;
use mmtsat::canonical::{canonicalize, check_canonical, SymmetricDecomposition};
use mmtsat::driver::{enumerate_combos, Checkpoint, ComboState};
use mmtsat::symmetry::{is_group_symmetric, Transform};
use mmtsat::tensor::verify;

pub const SYMMETRIC: [GroupId; 3] = [GroupId::Cyclic, GroupId::CyclicTranspose, GroupId::CyclicSandwich];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn square(r: &mut StdRng, group: GroupId) -> Dims {
    Dims::square(*sizes(group).choose(r).expect("size")).expect("dims")
}

/// Preservation, monotonicity, canonicity, idempotence and symmetry.
pub fn canonicalize_laws(group: GroupId, seed: u64) -> Result<(), String> {
    let x = random_symmetric(&mut rng(seed), group);
    let c = canonicalize(&x);
    ensure!(
        evaluate(&c.expand()) == evaluate(&x.expand()),
        "tensor changed: {}",
        x.to_json()
    );
    ensure!(c.total_rank() <= x.total_rank(), "rank grew: {}", x.to_json());
    let v = check_canonical(&c);
    ensure!(v.is_empty(), "not canonical {v:?}: {}", x.to_json());
    ensure!(canonicalize(&c) == c, "not idempotent: {}", x.to_json());
    ensure!(is_group_symmetric(&c.expand(), group), "not symmetric: {}", x.to_json());
    Ok(())
}

pub fn group_composition(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    for group in SYMMETRIC {
        let dims = square(&mut r, group);
        let t = random_triplet(&mut r, dims);
        let elements = group.elements();
        for g in &elements {
            for h in &elements {
                let gh = g.compose(h);
                let once = gh.apply(&t).map_err(|e| e.to_string())?;
                let twice = g
                    .apply(&h.apply(&t).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                ensure!(once == twice, "{group}: composition disagrees with sequential action");
                ensure!(
                    elements.iter().any(|e| e.apply(&t).ok() == Some(once)),
                    "{group}: product acts like no listed element"
                );
            }
        }
        ensure!(
            Transform::identity().apply(&t).ok() == Some(t),
            "identity moved a triplet"
        );
    }
    Ok(())
}

pub fn orbit_invariance(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    for group in SYMMETRIC {
        let dims = square(&mut r, group);
        for &kind in group.kinds() {
            let rep = random_rep(&mut r, group, kind, dims);
            let orbit = Decomposition::new(dims, expand_orbit(group, kind, &rep).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure!(
                orbit.rank() == group.orbit_len(kind),
                "{group} {kind}: wrong orbit length"
            );
            ensure!(
                is_group_symmetric(&orbit, group),
                "{group} {kind} {rep:?}: orbit not symmetric"
            );
            for g in group.generators() {
                let moved: Vec<_> = orbit.triplets.iter().map(|t| g.apply(t).expect("square")).collect();
                let moved = Decomposition::new(dims, moved).map_err(|e| e.to_string())?;
                ensure!(
                    evaluate(&moved) == evaluate(&orbit),
                    "{group} {kind}: generator changes orbit tensor"
                );
            }
        }
    }
    Ok(())
}

/// Two orbits differing in one matrix sum to the orbit of the summed matrix.
pub fn merge_identity(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    for group in SYMMETRIC {
        let dims = square(&mut r, group);
        // (kind, index of the summed matrix)
        let merges: &[(OrbitKind, usize)] = match group {
            GroupId::CyclicTranspose => &[(OrbitKind::Id, 2), (OrbitKind::Transpose, 0)],
            GroupId::CyclicSandwich => &[(OrbitKind::Id, 2), (OrbitKind::Sandwich, 2)],
            _ => &[(OrbitKind::Id, 2)],
        };
        for &(kind, summed) in merges {
            let one = random_rep(&mut r, group, kind, dims);
            let mut two = random_rep(&mut r, group, kind, dims);
            for (i, m) in one.iter().enumerate() {
                if i != summed {
                    two[i] = *m;
                }
            }
            let mut sum = one.clone();
            sum[summed] = one[summed].add(&two[summed]).map_err(|e| e.to_string())?;
            let mut lhs = orbit_tensor(group, kind, &one, dims);
            lhs.xor_assign(&orbit_tensor(group, kind, &two, dims));
            ensure!(
                lhs == orbit_tensor(group, kind, &sum, dims),
                "{group} {kind}: merge identity fails"
            );
        }
    }
    Ok(())
}

pub fn checkpoint_round_trip(seed: u64) -> Result<(), String> {
    let cp = random_checkpoint(&mut rng(seed));
    let text = cp.to_json();
    let back = Checkpoint::from_json(&text).map_err(|e| e.to_string())?;
    ensure!(back.to_json() == text, "bytes differ after round trip");
    ensure!(back == cp, "value differs after round trip");
    Ok(())
}

/// Every element of each group maps valid decompositions to valid ones.
pub fn group_elements_preserve_validity() -> Result<(), String> {
    for n in [2usize, 3] {
        let d = naive_decomposition(n);
        ensure!(verify(&d), "naive n={n} invalid");
        for group in SYMMETRIC {
            if group.required_n().is_some_and(|r| r != n) {
                continue;
            }
            for g in group.elements() {
                let moved: Vec<_> = d.triplets.iter().map(|t| g.apply(t).expect("square")).collect();
                ensure!(
                    verify(&Decomposition::new(d.dims, moved).map_err(|e| e.to_string())?),
                    "{group} n={n}"
                );
            }
        }
    }
    let s = mmtsat::tensor::strassen();
    for g in GroupId::CyclicTranspose.elements() {
        let moved: Vec<_> = s.triplets.iter().map(|t| g.apply(t).expect("square")).collect();
        ensure!(
            verify(&Decomposition::new(s.dims, moved).map_err(|e| e.to_string())?),
            "moved Strassen invalid"
        );
    }
    let singular = Gf2Matrix::zero(2, 2).map_err(|e| e.to_string())?;
    ensure!(
        Transform::sandwich(singular, singular, singular).is_err(),
        "singular sandwich accepted"
    );
    Ok(())
}

/// The dims-2 cyclic campaign reaches the same verdict under shuffled schedules.
pub fn order_independence(seed: u64, rounds: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for max_rank in [6u32, 7] {
        let mut verdicts = Vec::new();
        for round in 0..rounds {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let schedule = (round > 0).then(|| {
                let mut s: Vec<usize> = (0..enumerate_combos(GroupId::Cyclic, max_rank).len()).collect();
                s.shuffle(&mut r);
                s
            });
            let report = campaign(GroupId::Cyclic, 2, max_rank, dir.path(), schedule, None);
            verdicts.push(report.verdict.name());
            if let mmtsat::driver::Verdict::Found { path, .. } = &report.verdict {
                let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
                let sym = SymmetricDecomposition::from_json(&text).map_err(|e| e.to_string())?;
                ensure!(verify(&sym.expand()), "found decomposition invalid");
            }
            if max_rank == 6 {
                ensure!(
                    report.records.iter().all(|x| x.state == ComboState::Unsat),
                    "rank 6 campaign has a non-UNSAT combo"
                );
            }
        }
        ensure!(
            verdicts.windows(2).all(|w| w[0] == w[1]),
            "verdicts differ: {verdicts:?}"
        );
        let want = if max_rank == 6 { "ruled-out" } else { "found" };
        ensure!(
            verdicts[0] == want,
            "max rank {max_rank}: got {}, want {want}",
            verdicts[0]
        );
    }
    Ok(())
}
