//! Brute-force ground truth for tiny tensors.
//!
//! [`brute_min_rank`] decides rank exactly through the slice span: the
//! tensor has rank at most `R` iff `R` products `vec(B) (x) vec(C)` span all
//! of its `A`-slices. [`brute_symmetric_feasible`] enumerates canonical
//! orbit representatives of `<2,2,2>` directly, with its own packed tensor
//! arithmetic and orbit lists, so it shares no code with the encoder.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf2::Gf2Matrix;
use crate::symmetry::{Combo, GroupId, OrbitKind};
use crate::tensor::{mm_tensor_for, Decomposition, Dims, Triplet};

/// Largest rank the exhaustive search accepts.
pub const MAX_BRUTE_RANK: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("max rank {0} exceeds the brute-force limit of {MAX_BRUTE_RANK}")]
    RankTooLarge(usize),
    #[error("<{n},{k},{m}> is too large for the slice search (k*m*m*n must be at most 64)")]
    TensorTooLarge { n: usize, k: usize, m: usize },
    #[error("symmetric enumeration supports <2,2,2> only")]
    DimsUnsupported,
    #[error("symmetric enumeration does not support group {0}")]
    GroupUnsupported(GroupId),
    #[error("combo {0} has total rank above {MAX_BRUTE_RANK}")]
    ComboTooLarge(String),
    #[error("enumeration for combo {0} exceeds the subset budget")]
    Budget(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_rank: usize,
    /// Search nodes visited before giving up; `None` is unlimited.
    pub node_limit: Option<u64>,
}

impl SearchBudget {
    pub fn new(max_rank: usize) -> Result<Self, OracleError> {
        if max_rank > MAX_BRUTE_RANK {
            return Err(OracleError::RankTooLarge(max_rank));
        }
        Ok(Self {
            max_rank,
            node_limit: None,
        })
    }

    pub fn with_node_limit(self, limit: u64) -> Self {
        Self {
            node_limit: Some(limit),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinRank {
    /// The minimum rank, witnessed by a decomposition of that length.
    Rank(Decomposition),
    /// No decomposition of rank at most `max_rank` exists.
    AboveMaxRank { max_rank: usize },
    /// The node limit ran out before the rank was settled.
    NodeLimit { settled_above: usize },
}

/// Incremental GF(2) basis over `u64` vectors, tracking which chosen
/// elements each basis row combines.
#[derive(Clone)]
struct Basis {
    rows: Vec<(u64, u64)>,
}

impl Basis {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Reduces `v`; returns the residue and the combination of inputs used.
    fn reduce(&self, mut v: u64, mut tag: u64) -> (u64, u64) {
        for &(r, t) in &self.rows {
            if v ^ r < v {
                v ^= r;
                tag ^= t;
            }
        }
        (v, tag)
    }

    /// Inserts `v`; false if it was already in the span.
    fn insert(&mut self, v: u64, tag: u64) -> bool {
        let (v, tag) = self.reduce(v, tag);
        if v == 0 {
            return false;
        }
        self.rows.push((v, tag));
        // highest leading bit first
        self.rows.sort_by_key(|r| r.0.leading_zeros());
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

struct SliceSearch {
    candidates: Vec<(u64, Gf2Matrix, Gf2Matrix)>,
    slices: Vec<u64>,
    nodes: u64,
    node_limit: Option<u64>,
}

impl SliceSearch {
    /// Chooses `r` independent candidates (increasing index from `start`)
    /// whose span contains every slice.
    fn dfs(&mut self, chosen: &mut Vec<usize>, span: &Basis, joint: &Basis, r: usize, start: usize) -> Option<bool> {
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            return None;
        }
        if joint.dim() == span.dim() {
            return Some(true);
        }
        if chosen.len() == r {
            return Some(false);
        }
        for i in start..self.candidates.len() {
            let v = self.candidates[i].0;
            let mut span2 = span.clone();
            if !span2.insert(v, 0) {
                continue;
            }
            let mut joint2 = joint.clone();
            joint2.insert(v, 0);
            if joint2.dim() > r {
                continue;
            }
            chosen.push(i);
            match self.dfs(chosen, &span2, &joint2, r, i + 1) {
                Some(false) => {}
                other => return other,
            }
            chosen.pop();
        }
        Some(false)
    }
}

/// Smallest rank of `<n,k,m>` over GF(2), searched up to `budget.max_rank`.
pub fn brute_min_rank(n: usize, k: usize, m: usize, budget: SearchBudget) -> Result<MinRank, OracleError> {
    if budget.max_rank > MAX_BRUTE_RANK {
        return Err(OracleError::RankTooLarge(budget.max_rank));
    }
    let too_large = OracleError::TensorTooLarge { n, k, m };
    let dims = Dims::new(n, k, m).map_err(|_| too_large.clone())?;
    let (bl, cl) = (k * m, m * n);
    if bl * cl > 64 {
        return Err(too_large);
    }
    let target = mm_tensor_for(dims);
    let bit = |bi: usize, ci: usize| 1u64 << (bi * cl + ci);
    let mut slices = Vec::new();
    for a in 0..n {
        for b in 0..k {
            let mut s = 0u64;
            for c in 0..k {
                for d in 0..m {
                    for e in 0..m {
                        for f in 0..n {
                            if target.get([a, b, c, d, e, f]) {
                                s |= bit(c * m + d, e * n + f);
                            }
                        }
                    }
                }
            }
            slices.push(s);
        }
    }
    let mut candidates = Vec::new();
    for bv in 1u64..(1 << bl) {
        for cv in 1u64..(1 << cl) {
            let mut p = 0u64;
            for bi in 0..bl {
                for ci in 0..cl {
                    if bv >> bi & 1 == 1 && cv >> ci & 1 == 1 {
                        p |= bit(bi, ci);
                    }
                }
            }
            let bm = Gf2Matrix::from_flat(k, m, &(0..bl).map(|i| bv >> i & 1 == 1).collect::<Vec<_>>()).expect("shape");
            let cm = Gf2Matrix::from_flat(m, n, &(0..cl).map(|i| cv >> i & 1 == 1).collect::<Vec<_>>()).expect("shape");
            candidates.push((p, bm, cm));
        }
    }
    let mut slice_basis = Basis::new();
    for &s in &slices {
        slice_basis.insert(s, 0);
    }
    let mut search = SliceSearch {
        candidates,
        slices,
        nodes: 0,
        node_limit: budget.node_limit,
    };
    for r in 0..=budget.max_rank {
        if slice_basis.dim() > r {
            continue;
        }
        let mut chosen = Vec::new();
        match search.dfs(&mut chosen, &Basis::new(), &slice_basis, r, 0) {
            None => {
                return Ok(MinRank::NodeLimit {
                    settled_above: r.saturating_sub(1),
                })
            }
            Some(false) => {}
            Some(true) => return Ok(MinRank::Rank(reconstruct(&search, &chosen, dims))),
        }
    }
    Ok(MinRank::AboveMaxRank {
        max_rank: budget.max_rank,
    })
}

/// Expresses each slice in the chosen products, giving the `A` matrices.
fn reconstruct(search: &SliceSearch, chosen: &[usize], dims: Dims) -> Decomposition {
    let mut basis = Basis::new();
    for (pos, &i) in chosen.iter().enumerate() {
        basis.insert(search.candidates[i].0, 1 << pos);
    }
    let mut a = vec![Gf2Matrix::zero(dims.n, dims.k).expect("shape"); chosen.len()];
    for (s_idx, &s) in search.slices.iter().enumerate() {
        let (rest, tag) = basis.reduce(s, 0);
        assert_eq!(rest, 0, "slice outside the chosen span");
        for (pos, am) in a.iter_mut().enumerate() {
            if tag >> pos & 1 == 1 {
                am.set(s_idx / dims.k, s_idx % dims.k, true);
            }
        }
    }
    let triplets = chosen
        .iter()
        .zip(a)
        .map(|(&i, am)| {
            let (_, b, c) = search.candidates[i];
            Triplet::new(am, b, c)
        })
        .collect();
    Decomposition::new(dims, triplets).expect("shapes")
}

// ---- symmetric enumeration on <2,2,2> ----

/// 2x2 matrix packed MSB-first: entry (i,j) at bit 3-(2i+j).
type M2 = u8;

fn entry(x: M2, i: usize, j: usize) -> bool {
    x >> (3 - (2 * i + j)) & 1 == 1
}

fn tr(x: M2) -> M2 {
    let mut out = 0;
    for i in 0..2 {
        for j in 0..2 {
            if entry(x, i, j) {
                out |= 1 << (3 - (2 * j + i));
            }
        }
    }
    out
}

/// Tensor entry (i,j,k,l,m,n) at bit ((((i*2+j)*2+k)*2+l)*2+m)*2+n.
fn outer2(a: M2, b: M2, c: M2) -> u64 {
    let mut t = 0u64;
    for idx in 0..64usize {
        let e = |p: usize| idx >> (5 - p) & 1;
        if entry(a, e(0), e(1)) && entry(b, e(2), e(3)) && entry(c, e(4), e(5)) {
            t |= 1 << idx;
        }
    }
    t
}

fn target2() -> u64 {
    let mut t = 0u64;
    for idx in 0..64usize {
        let e = |p: usize| idx >> (5 - p) & 1;
        if e(1) == e(2) && e(3) == e(4) && e(5) == e(0) {
            t |= 1 << idx;
        }
    }
    t
}

/// One canonical representative: merge key and orbit tensor.
struct Candidate {
    key: (M2, M2),
    tensor: u64,
}

fn orbit_tensor(orbit: &[(M2, M2, M2)]) -> u64 {
    orbit.iter().fold(0, |acc, &(a, b, c)| acc ^ outer2(a, b, c))
}

fn candidates(group: GroupId, kind: OrbitKind) -> Vec<Candidate> {
    use OrbitKind::*;
    let mut out = Vec::new();
    let all = 0u8..16;
    let symmetric: Vec<M2> = all.clone().filter(|&x| tr(x) == x).collect();
    match (group, kind) {
        (GroupId::Trivial, _) => {
            for a in all.clone() {
                for b in all.clone() {
                    for c in all.clone() {
                        if (a, b, c) != (0, 0, 0) {
                            out.push(Candidate {
                                key: (a, b),
                                tensor: outer2(a, b, c),
                            });
                        }
                    }
                }
            }
        }
        (GroupId::Cyclic | GroupId::CyclicTranspose, Id) => {
            for a in all.clone() {
                for b in all.clone() {
                    for c in all.clone() {
                        let t = (a, b, c);
                        if t == (0, 0, 0) {
                            continue;
                        }
                        let mut orbit = vec![t, (b, c, a), (c, a, b)];
                        if group == GroupId::CyclicTranspose {
                            orbit.extend([(tr(c), tr(b), tr(a)), (tr(b), tr(a), tr(c)), (tr(a), tr(c), tr(b))]);
                        }
                        if orbit[1..].iter().all(|&o| t < o) {
                            out.push(Candidate {
                                key: (a, b),
                                tensor: orbit_tensor(&orbit),
                            });
                        }
                    }
                }
            }
        }
        (GroupId::Cyclic, Delta) => {
            for d in 1..16u8 {
                out.push(Candidate {
                    key: (d, 0),
                    tensor: outer2(d, d, d),
                });
            }
        }
        (GroupId::CyclicTranspose, Transpose) => {
            for &s in &symmetric {
                for h in all.clone() {
                    if (s, h) == (0, 0) {
                        continue;
                    }
                    let orbit = [(s, h, tr(h)), (h, tr(h), s), (tr(h), s, h)];
                    out.push(Candidate {
                        key: (h, 0),
                        tensor: orbit_tensor(&orbit),
                    });
                }
            }
        }
        (GroupId::CyclicTranspose, Delta) => {
            for d in 1..16u8 {
                if d < tr(d) {
                    out.push(Candidate {
                        key: (d, 0),
                        tensor: outer2(d, d, d) ^ outer2(tr(d), tr(d), tr(d)),
                    });
                }
            }
        }
        (GroupId::CyclicTranspose, Full) => {
            for &z in symmetric.iter().filter(|&&z| z != 0) {
                out.push(Candidate {
                    key: (z, 0),
                    tensor: outer2(z, z, z),
                });
            }
        }
        _ => {}
    }
    out
}

/// XOR sums of every strictly key-increasing selection of `count` candidates.
fn sums(cands: &[Candidate], count: usize, budget: &mut u64) -> Option<HashSet<u64>> {
    let mut order: Vec<&Candidate> = cands.iter().collect();
    order.sort_by_key(|c| c.key);
    let mut out = HashSet::new();
    fn rec(
        order: &[&Candidate],
        start: usize,
        left: usize,
        last: Option<(M2, M2)>,
        acc: u64,
        out: &mut HashSet<u64>,
        budget: &mut u64,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if left == 0 {
            out.insert(acc);
            return true;
        }
        for i in start..order.len() {
            if order.len() - i < left {
                break;
            }
            let c = order[i];
            if last.is_some_and(|k| c.key <= k) {
                continue;
            }
            if !rec(order, i + 1, left - 1, Some(c.key), acc ^ c.tensor, out, budget) {
                return false;
            }
        }
        true
    }
    rec(&order, 0, count, None, 0, &mut out, budget).then_some(out)
}

/// Subset-enumeration steps allowed per query.
const SUBSET_BUDGET: u64 = 200_000_000;

/// Whether a canonical `group`-symmetric decomposition of `<2,2,2>` with
/// orbit counts `combo` exists.
pub fn brute_symmetric_feasible(group: GroupId, dims: Dims, combo: &Combo) -> Result<bool, OracleError> {
    if (dims.n, dims.k, dims.m) != (2, 2, 2) {
        return Err(OracleError::DimsUnsupported);
    }
    if group == GroupId::CyclicSandwich || combo.group != group {
        return Err(OracleError::GroupUnsupported(group));
    }
    if combo.total_rank() as usize > MAX_BRUTE_RANK {
        return Err(OracleError::ComboTooLarge(combo.to_string()));
    }
    let target = target2();
    let mut budget = SUBSET_BUDGET;
    let mut reachable: HashSet<u64> = HashSet::from([0]);
    for (kind, count) in combo.iter() {
        let cands = candidates(group, kind);
        let sums = sums(&cands, count as usize, &mut budget).ok_or_else(|| OracleError::Budget(combo.to_string()))?;
        let mut next = HashSet::new();
        for &x in &reachable {
            for &y in &sums {
                next.insert(x ^ y);
            }
        }
        reachable = next;
    }
    Ok(reachable.contains(&target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::verify;

    fn min_rank(n: usize, k: usize, m: usize) -> usize {
        match brute_min_rank(n, k, m, SearchBudget::new(7).unwrap()).unwrap() {
            MinRank::Rank(d) => {
                assert!(verify(&d));
                d.rank()
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_ranks() {
        assert_eq!(min_rank(1, 1, 1), 1);
        assert_eq!(min_rank(1, 2, 1), 2);
        assert_eq!(min_rank(2, 1, 1), 2);
    }

    #[test]
    fn outer_product_shapes_have_rank_nm() {
        for n in 1..=2 {
            for m in 1..=2 {
                assert_eq!(min_rank(n, 1, m), n * m, "<{n},1,{m}>");
            }
        }
    }

    #[test]
    fn rank_limits() {
        assert_eq!(SearchBudget::new(8), Err(OracleError::RankTooLarge(8)));
        assert_eq!(
            brute_min_rank(2, 2, 2, SearchBudget::new(3).unwrap()).unwrap(),
            MinRank::AboveMaxRank { max_rank: 3 }
        );
        let tight = SearchBudget::new(7).unwrap().with_node_limit(10);
        assert!(matches!(
            brute_min_rank(2, 2, 2, tight).unwrap(),
            MinRank::NodeLimit { .. }
        ));
        assert!(brute_min_rank(3, 3, 3, SearchBudget::new(3).unwrap()).is_err());
    }

    #[test]
    fn packed_target_matches_tensor_module() {
        let t = mm_tensor_for(Dims::square(2).unwrap());
        let packed = target2();
        for idx in 0..64usize {
            let e = |p: usize| idx >> (5 - p) & 1;
            assert_eq!(packed >> idx & 1 == 1, t.get([e(0), e(1), e(2), e(3), e(4), e(5)]));
        }
    }

    #[test]
    fn symmetric_examples() {
        let d = Dims::square(2).unwrap();
        let g = GroupId::Cyclic;
        let c = |s: &str| Combo::parse(g, s).unwrap();
        assert!(brute_symmetric_feasible(g, d, &c("id=2,delta=1")).unwrap());
        assert!(!brute_symmetric_feasible(g, d, &c("delta=1")).unwrap());
        assert!(!brute_symmetric_feasible(g, d, &Combo::zero(g)).unwrap());
        assert!(brute_symmetric_feasible(GroupId::CyclicSandwich, d, &Combo::zero(GroupId::CyclicSandwich)).is_err());
    }
}
