//! Canonical forms of symmetric decompositions.
//!
//! A [`SymmetricDecomposition`] stores one list of orbit representatives per
//! orbit kind. The canonical form is what the encoder's symmetry breaking
//! admits: every representative is lex-minimal in its orbit, orbits that can
//! be merged have been merged, and each list is strictly increasing in its
//! key. [`check_canonical`] tests exactly the constraints the encoder emits.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::gf2::Gf2Matrix;
use crate::symmetry::{expand_orbit, sandwich_f, validate_rep, Combo, GroupId, OrbitKind, SymmetryError};
use crate::tensor::{Decomposition, Dims, TensorError, Triplet};

#[derive(Debug, Error)]
pub enum CanonicalError {
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("invalid symmetric decomposition JSON: {0}")]
    Format(String),
}

/// Representative matrices of one orbit, in role order (`A,B,C`, `S,H`, ...).
pub type Rep = Vec<Gf2Matrix>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricDecomposition {
    pub group: GroupId,
    pub dims: Dims,
    /// One list per kind, aligned with `group.kinds()`.
    pub orbits: Vec<Vec<Rep>>,
}

impl SymmetricDecomposition {
    pub fn empty(group: GroupId, dims: Dims) -> Self {
        Self {
            group,
            dims,
            orbits: vec![Vec::new(); group.kinds().len()],
        }
    }

    /// Validates shapes and side conditions of every representative.
    pub fn new(group: GroupId, dims: Dims, orbits: Vec<Vec<Rep>>) -> Result<Self, CanonicalError> {
        if orbits.len() != group.kinds().len() {
            return Err(CanonicalError::Format(format!(
                "{} orbit lists for group {group}",
                orbits.len()
            )));
        }
        if group != GroupId::Trivial && !dims.is_square() {
            return Err(SymmetryError::Shape(format!("group {group} needs a square tensor")).into());
        }
        let d = Self { group, dims, orbits };
        for (kind, reps) in d.lists() {
            for rep in reps {
                validate_rep(group, kind, rep)?;
                let t = rep_triplet(group, kind, rep);
                if !t.fits(dims) {
                    return Err(SymmetryError::Shape(format!("{kind} representative does not fit {dims}")).into());
                }
            }
        }
        Ok(d)
    }

    pub fn lists(&self) -> impl Iterator<Item = (OrbitKind, &Vec<Rep>)> {
        self.group.kinds().iter().copied().zip(self.orbits.iter())
    }

    pub fn list(&self, kind: OrbitKind) -> &[Rep] {
        self.group
            .kinds()
            .iter()
            .position(|&k| k == kind)
            .map_or(&[], |p| &self.orbits[p])
    }

    pub fn combo(&self) -> Combo {
        Combo::new(self.group, self.orbits.iter().map(|l| l.len() as u32).collect()).expect("aligned with kinds")
    }

    pub fn total_rank(&self) -> u32 {
        self.combo().total_rank()
    }

    /// Concatenation of all expanded orbits, kind by kind.
    pub fn expand(&self) -> Decomposition {
        let mut triplets = Vec::new();
        for (kind, reps) in self.lists() {
            for rep in reps {
                triplets.extend(expand_orbit(self.group, kind, rep).expect("validated"));
            }
        }
        Decomposition::new(self.dims, triplets).expect("validated shapes")
    }

    pub fn to_json_value(&self) -> Value {
        let mut value: Value = serde_json::from_str(&self.expand().to_json()).expect("decomposition JSON");
        let mut orbits = Map::new();
        for (kind, reps) in self.lists() {
            let list: Vec<Value> = reps
                .iter()
                .map(|rep| json!(rep.iter().map(|m| m.to_string()).collect::<Vec<_>>()))
                .collect();
            orbits.insert(kind.name().to_string(), Value::Array(list));
        }
        let obj = value.as_object_mut().expect("object");
        obj.insert("group".into(), json!(self.group.name()));
        obj.insert("orbits".into(), Value::Object(orbits));
        value
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    /// Reads the symmetric JSON. The `triplets` field, when present, must
    /// match the expansion of `orbits`.
    pub fn from_json(text: &str) -> Result<Self, CanonicalError> {
        let value: Value = serde_json::from_str(text).map_err(|e| CanonicalError::Format(e.to_string()))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self, CanonicalError> {
        let fmt_err = |s: &str| CanonicalError::Format(s.to_string());
        let dim = |key: &str| -> Result<usize, CanonicalError> {
            value
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| fmt_err(&format!("missing integer field {key:?}")))
        };
        let dims = Dims::new(dim("n")?, dim("k")?, dim("m")?)?;
        let group: GroupId = value
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| fmt_err("missing field \"group\""))?
            .parse()?;
        let orbits_obj = value
            .get("orbits")
            .and_then(Value::as_object)
            .ok_or_else(|| fmt_err("missing object \"orbits\""))?;
        let mut orbits = vec![Vec::new(); group.kinds().len()];
        for (name, list) in orbits_obj {
            let kind: OrbitKind = name.parse()?;
            let pos = group
                .kinds()
                .iter()
                .position(|&k| k == kind)
                .ok_or(SymmetryError::KindNotInGroup { group, kind })?;
            let list = list
                .as_array()
                .ok_or_else(|| fmt_err(&format!("orbits.{name} must be a list")))?;
            for entry in list {
                let mats = entry
                    .as_array()
                    .ok_or_else(|| fmt_err(&format!("orbits.{name} entries must be lists")))?;
                let rep = mats
                    .iter()
                    .map(|m| {
                        m.as_str()
                            .ok_or_else(|| fmt_err("matrices must be strings like \"10;01\""))?
                            .parse::<Gf2Matrix>()
                            .map_err(|e| CanonicalError::Format(e.to_string()))
                    })
                    .collect::<Result<Rep, _>>()?;
                orbits[pos].push(rep);
            }
        }
        let d = Self::new(group, dims, orbits)?;
        if value.get("triplets").is_some() {
            let listed = Decomposition::from_json(&value.to_string())?;
            if listed != d.expand() {
                return Err(fmt_err("triplets do not match the expansion of orbits"));
            }
        }
        Ok(d)
    }
}

/// First triplet of the orbit expansion, the one the lex constraints talk about.
pub fn rep_triplet(group: GroupId, kind: OrbitKind, rep: &[Gf2Matrix]) -> Triplet {
    match kind {
        OrbitKind::Id | OrbitKind::Sandwich => Triplet::new(rep[0], rep[1], rep[2]),
        OrbitKind::Transpose => Triplet::new(rep[0], rep[1], rep[1].transpose()),
        OrbitKind::Delta | OrbitKind::Full => {
            let _ = group;
            Triplet::new(rep[0], rep[0], rep[0])
        }
    }
}

/// Merge key of a representative.
fn key(kind: OrbitKind, rep: &[Gf2Matrix]) -> Vec<Gf2Matrix> {
    match kind {
        OrbitKind::Id | OrbitKind::Sandwich => rep[..2].to_vec(),
        OrbitKind::Transpose => vec![rep[1]],
        OrbitKind::Delta | OrbitKind::Full => vec![rep[0]],
    }
}

/// Brings `d` into canonical form without changing its tensor.
///
/// Expanded triplets are reduced mod 2 (pairs cancel, zero outer products
/// drop), regrouped into orbits with lex-minimal representatives, and
/// mergeable orbits are merged. This repeats until no merge applies.
pub fn canonicalize(d: &SymmetricDecomposition) -> SymmetricDecomposition {
    let mut current = d.clone();
    loop {
        let regrouped = regroup(current.group, current.dims, &reduce(&current.expand().triplets));
        let (merged, changed) = merge(&regrouped);
        if !changed {
            let mut out = merged;
            for (kind, reps) in out.group.kinds().iter().zip(out.orbits.iter_mut()) {
                reps.sort_by_key(|r| key(*kind, r));
            }
            return out;
        }
        current = merged;
    }
}

/// Triplets occurring an odd number of times with a nonzero outer product.
fn reduce(triplets: &[Triplet]) -> Vec<Triplet> {
    let mut parity: BTreeMap<Triplet, bool> = BTreeMap::new();
    for t in triplets {
        *parity.entry(*t).or_default() ^= true;
    }
    parity
        .into_iter()
        .filter(|(t, odd)| *odd && !t.has_zero_factor())
        .map(|(t, _)| t)
        .collect()
}

/// Splits a group-invariant triplet set into orbits, classified by stabilizer.
fn regroup(group: GroupId, dims: Dims, set: &[Triplet]) -> SymmetricDecomposition {
    use OrbitKind::*;
    let elements = group.elements();
    let mut out = SymmetricDecomposition::empty(group, dims);
    let mut seen: std::collections::HashSet<Triplet> = Default::default();
    let mut push = |kind: OrbitKind, rep: Rep| {
        let pos = group.kinds().iter().position(|&k| k == kind).expect("kind");
        out.orbits[pos].push(rep);
    };
    for t in set {
        if seen.contains(t) {
            continue;
        }
        let mut orbit: Vec<Triplet> = elements.iter().map(|g| g.apply(t).expect("square triplets")).collect();
        orbit.sort();
        orbit.dedup();
        seen.extend(orbit.iter().copied());
        let min = orbit[0];
        match (group, orbit.len()) {
            (GroupId::Trivial, _) => push(Id, vec![min.a, min.b, min.c]),
            (GroupId::Cyclic, 3) | (_, 6) => push(Id, vec![min.a, min.b, min.c]),
            (GroupId::CyclicTranspose, 3) => {
                let fixed = orbit
                    .iter()
                    .find(|x| x.c == x.a.transpose() && x.b.is_symmetric())
                    .expect("one element is fixed by T");
                push(Transpose, vec![fixed.b, fixed.a.transpose()]);
            }
            (GroupId::CyclicSandwich, 3) => push(Sandwich, vec![min.a, min.b, min.c]),
            (_, 2) => push(Delta, vec![min.a]),
            (GroupId::Cyclic, 1) => push(Delta, vec![min.a]),
            (_, 1) => push(Full, vec![min.a]),
            (g, len) => unreachable!("orbit of size {len} in group {g}"),
        }
    }
    out
}

/// One merge pass; reports whether anything merged.
fn merge(d: &SymmetricDecomposition) -> (SymmetricDecomposition, bool) {
    let mut out = d.clone();
    let mut changed = false;
    for (kind, reps) in d.group.kinds().iter().zip(out.orbits.iter_mut()) {
        let summed = match kind {
            OrbitKind::Id | OrbitKind::Sandwich => 2,
            OrbitKind::Transpose => 0,
            OrbitKind::Delta | OrbitKind::Full => continue,
        };
        let mut order: Vec<Vec<Gf2Matrix>> = Vec::new();
        let mut by_key: HashMap<Vec<Gf2Matrix>, Rep> = HashMap::new();
        for rep in reps.iter() {
            let k = key(*kind, rep);
            match by_key.get_mut(&k) {
                Some(acc) => {
                    acc[summed] = acc[summed].add(&rep[summed]).expect("same shape");
                    changed = true;
                }
                None => {
                    order.push(k.clone());
                    by_key.insert(k, rep.clone());
                }
            }
        }
        *reps = order
            .into_iter()
            .map(|k| by_key.remove(&k).expect("present"))
            .filter(|rep| !rep[summed].is_zero())
            .collect();
    }
    (out, changed)
}

/// A failed canonical-form constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: OrbitKind,
    pub index: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.kind, self.index, self.message)
    }
}

/// All canonical-form constraints `d` violates; empty iff canonical.
pub fn check_canonical(d: &SymmetricDecomposition) -> Vec<Violation> {
    use OrbitKind::*;
    let group = d.group;
    let mut out = Vec::new();
    let f = sandwich_f();
    let conj = |m: &Gf2Matrix| m.conjugate(&f).expect("3x3");
    for (kind, reps) in d.lists() {
        let mut fail = |index: usize, message: String| out.push(Violation { kind, index, message });
        for (r, rep) in reps.iter().enumerate() {
            if let Err(e) = validate_rep(group, kind, rep) {
                fail(r, e.to_string());
                continue;
            }
            let t = rep_triplet(group, kind, rep);
            if t.is_zero() {
                fail(r, "representative triplet is all-zero".into());
            }
            match (group, kind) {
                (GroupId::Trivial, _) => {}
                (_, Id) | (GroupId::CyclicSandwich, Sandwich) => {
                    let others = expand_orbit(group, kind, rep).expect("validated");
                    if others[1..].iter().any(|o| t >= *o) {
                        fail(r, "not strict lex min of its orbit".into());
                    }
                }
                (GroupId::CyclicTranspose, Delta) if rep[0] >= rep[0].transpose() => {
                    fail(r, "D < D^T violated".into());
                }
                (GroupId::CyclicSandwich, Delta) if rep[0] >= conj(&rep[0]) => {
                    fail(r, "D < F D F^-1 violated".into());
                }
                _ => {}
            }
        }
        for (r, pair) in reps.windows(2).enumerate() {
            if key(kind, &pair[0]) >= key(kind, &pair[1]) {
                fail(
                    r,
                    format!("keys of {kind}[{r}] and {kind}[{}] not strictly increasing", r + 1),
                );
            }
        }
    }
    out
}
