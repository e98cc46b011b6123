//! De Groote transformations and the orbit schemes of the supported groups.
//!
//! Every supported group acts on triplets of square matrices. An orbit kind
//! names the stabilizer type of a triplet; `expand_orbit` lists the triplets
//! that one orbit contributes to a symmetric decomposition, in a fixed order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{Gf2Error, Gf2Matrix};
use crate::tensor::{Decomposition, Triplet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("unknown symmetry group {0:?} (expected trivial, cyc, cyc-t or cyc-sw)")]
    UnknownGroup(String),
    #[error("unknown orbit kind {0:?} (expected id, t, sw, delta or full)")]
    UnknownKind(String),
    #[error("orbit kind {kind} does not occur in group {group}")]
    KindNotInGroup { group: GroupId, kind: OrbitKind },
    #[error("orbit kind {kind} takes {expected} matrices, got {got}")]
    Arity {
        kind: OrbitKind,
        expected: usize,
        got: usize,
    },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("invalid orbit counts {0:?}")]
    Combo(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// The sandwich matrix `F` of the cyclic-sandwich group; `F^2 = I`.
pub fn sandwich_f() -> Gf2Matrix {
    Gf2Matrix::from_rows(&[[1u8, 1, 0], [0, 1, 0], [0, 0, 1]]).expect("3x3")
}

/// The supported symmetry groups.
///
/// `Trivial` imposes no symmetry; it is the plain rank search and the only
/// group allowed on non-square tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    Trivial,
    /// `<cyc>`
    Cyclic,
    /// `<cyc, transpose>`
    CyclicTranspose,
    /// `<cyc, sandwich(F,F,F)>`
    CyclicSandwich,
}

impl GroupId {
    pub const ALL: [GroupId; 4] = [
        GroupId::Trivial,
        GroupId::Cyclic,
        GroupId::CyclicTranspose,
        GroupId::CyclicSandwich,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupId::Trivial => "trivial",
            GroupId::Cyclic => "cyc",
            GroupId::CyclicTranspose => "cyc-t",
            GroupId::CyclicSandwich => "cyc-sw",
        }
    }

    /// Human-readable generator list, e.g. `<cyc,T>`.
    pub fn label(self) -> &'static str {
        match self {
            GroupId::Trivial => "<id>",
            GroupId::Cyclic => "<cyc>",
            GroupId::CyclicTranspose => "<cyc,T>",
            GroupId::CyclicSandwich => "<cyc,sw(F,F,F)>",
        }
    }

    /// Orbit kinds of the group, in the order used for counts and variables.
    pub fn kinds(self) -> &'static [OrbitKind] {
        use OrbitKind::*;
        match self {
            GroupId::Trivial => &[Id],
            GroupId::Cyclic => &[Id, Delta],
            GroupId::CyclicTranspose => &[Id, Transpose, Delta, Full],
            GroupId::CyclicSandwich => &[Id, Sandwich, Delta, Full],
        }
    }

    pub fn has_kind(self, kind: OrbitKind) -> bool {
        self.kinds().contains(&kind)
    }

    /// Number of triplets one orbit of `kind` contributes.
    pub fn orbit_len(self, kind: OrbitKind) -> usize {
        use OrbitKind::*;
        match (self, kind) {
            (GroupId::Trivial, _) => 1,
            (GroupId::Cyclic, Id) => 3,
            (GroupId::Cyclic, _) => 1,
            (_, Id) => 6,
            (_, Transpose | Sandwich) => 3,
            (_, Delta) => 2,
            (_, Full) => 1,
        }
    }

    /// Matrix role names of a representative, e.g. `["S", "H"]`.
    pub fn roles(self, kind: OrbitKind) -> &'static [&'static str] {
        use OrbitKind::*;
        match (self, kind) {
            (_, Id) => &["A", "B", "C"],
            (_, Transpose) => &["S", "H"],
            (_, Sandwich) => &["X", "Y", "Z"],
            (_, Delta) => &["D"],
            (GroupId::CyclicSandwich, Full) => &["U"],
            (_, Full) => &["Z"],
        }
    }

    pub fn generators(self) -> Vec<Transform> {
        match self {
            GroupId::Trivial => vec![],
            GroupId::Cyclic => vec![Transform::cyclic()],
            GroupId::CyclicTranspose => vec![Transform::cyclic(), Transform::transpose()],
            GroupId::CyclicSandwich => {
                let f = sandwich_f();
                vec![
                    Transform::cyclic(),
                    Transform::sandwich(f, f, f).expect("F is invertible"),
                ]
            }
        }
    }

    /// Every element of the group, identity first.
    pub fn elements(self) -> Vec<Transform> {
        let cyc = |p: u8| Transform {
            cyclic_power: p,
            ..Transform::identity()
        };
        match self {
            GroupId::Trivial => vec![Transform::identity()],
            GroupId::Cyclic => (0..3).map(cyc).collect(),
            GroupId::CyclicTranspose => (0..3)
                .flat_map(|p| [cyc(p), cyc(p).compose(&Transform::transpose())])
                .collect(),
            GroupId::CyclicSandwich => {
                let f = sandwich_f();
                let phi = Transform::sandwich(f, f, f).expect("F is invertible");
                (0..3).flat_map(|p| [cyc(p), cyc(p).compose(&phi)]).collect()
            }
        }
    }

    /// The tensor side length the group requires, if any.
    pub fn required_n(self) -> Option<usize> {
        match self {
            GroupId::CyclicSandwich => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupId {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupId::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| SymmetryError::UnknownGroup(s.to_string()))
    }
}

impl Serialize for GroupId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for GroupId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Stabilizer type of an orbit.
///
/// `Id` has trivial stabilizer. `Transpose` and `Sandwich` are fixed by an
/// involution (`T` or the sandwich), `Delta` by the cyclic rotation, and
/// `Full` by the whole group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKind {
    Id,
    Transpose,
    Sandwich,
    Delta,
    Full,
}

impl OrbitKind {
    pub fn name(self) -> &'static str {
        match self {
            OrbitKind::Id => "id",
            OrbitKind::Transpose => "t",
            OrbitKind::Sandwich => "sw",
            OrbitKind::Delta => "delta",
            OrbitKind::Full => "full",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            OrbitKind::Id | OrbitKind::Sandwich => 3,
            OrbitKind::Transpose => 2,
            OrbitKind::Delta | OrbitKind::Full => 1,
        }
    }
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrbitKind {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use OrbitKind::*;
        [Id, Transpose, Sandwich, Delta, Full]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SymmetryError::UnknownKind(s.to_string()))
    }
}

/// Orbit counts for one group, indexed like [`GroupId::kinds`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Combo {
    pub group: GroupId,
    pub counts: Vec<u32>,
}

impl Combo {
    pub fn zero(group: GroupId) -> Self {
        Self {
            group,
            counts: vec![0; group.kinds().len()],
        }
    }

    pub fn new(group: GroupId, counts: Vec<u32>) -> Result<Self, SymmetryError> {
        if counts.len() != group.kinds().len() {
            return Err(SymmetryError::Combo(format!(
                "{} counts for group {group}, which has {} orbit kinds",
                counts.len(),
                group.kinds().len()
            )));
        }
        Ok(Self { group, counts })
    }

    /// Parses `id=2,delta=1`; omitted kinds count zero.
    pub fn parse(group: GroupId, text: &str) -> Result<Self, SymmetryError> {
        let mut combo = Self::zero(group);
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| SymmetryError::Combo(text.to_string()))?;
            let kind: OrbitKind = name.trim().parse()?;
            let pos = combo
                .position(kind)
                .ok_or(SymmetryError::KindNotInGroup { group, kind })?;
            combo.counts[pos] = value
                .trim()
                .parse()
                .map_err(|_| SymmetryError::Combo(text.to_string()))?;
        }
        Ok(combo)
    }

    pub fn position(&self, kind: OrbitKind) -> Option<usize> {
        self.group.kinds().iter().position(|&k| k == kind)
    }

    pub fn count(&self, kind: OrbitKind) -> u32 {
        self.position(kind).map_or(0, |p| self.counts[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (OrbitKind, u32)> + '_ {
        self.group.kinds().iter().copied().zip(self.counts.iter().copied())
    }

    pub fn total_rank(&self) -> u32 {
        total_rank(self.group, &self.counts)
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, c)| format!("{}={c}", k.name())).collect();
        f.write_str(&parts.join(","))
    }
}

/// Rank of a decomposition with the given orbit counts (ordered like
/// [`GroupId::kinds`]). Extra counts are ignored.
pub fn total_rank(group: GroupId, counts: &[u32]) -> u32 {
    group
        .kinds()
        .iter()
        .zip(counts)
        .map(|(&k, &c)| group.orbit_len(k) as u32 * c)
        .sum()
}

/// A composite `cyc^p . T^t . sandwich(U,V,W)`, applied right to left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub cyclic_power: u8,
    pub transposed: bool,
    pub sandwich: Option<[Gf2Matrix; 3]>,
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            cyclic_power: 0,
            transposed: false,
            sandwich: None,
        }
    }

    /// `(A,B,C) -> (B,C,A)`
    pub fn cyclic() -> Self {
        Self {
            cyclic_power: 1,
            ..Self::identity()
        }
    }

    /// `(A,B,C) -> (C^T,B^T,A^T)`
    pub fn transpose() -> Self {
        Self {
            transposed: true,
            ..Self::identity()
        }
    }

    /// `(A,B,C) -> (U A V^-1, V B W^-1, W C U^-1)`
    pub fn sandwich(u: Gf2Matrix, v: Gf2Matrix, w: Gf2Matrix) -> Result<Self, SymmetryError> {
        for m in [&u, &v, &w] {
            m.inverse()?;
        }
        Ok(Self {
            sandwich: Some([u, v, w]),
            ..Self::identity()
        })
    }

    /// `self . other`: apply `other` first.
    ///
    /// Normal form is kept with `sw(U,V,W).cyc = cyc.sw(W,U,V)`,
    /// `sw(U,V,W).T = T.sw(U^-T,W^-T,V^-T)` and `T.cyc = cyc^-1.T`.
    pub fn compose(&self, other: &Transform) -> Transform {
        let mut moved = self.sandwich;
        if let Some([u, v, w]) = moved.as_mut() {
            for _ in 0..other.cyclic_power {
                let (nu, nv, nw) = (*w, *u, *v);
                (*u, *v, *w) = (nu, nv, nw);
            }
            if other.transposed {
                let inv_t = |m: &Gf2Matrix| m.inverse().expect("invertible").transpose();
                let (nu, nv, nw) = (inv_t(u), inv_t(w), inv_t(v));
                (*u, *v, *w) = (nu, nv, nw);
            }
        }
        let c = other.cyclic_power % 3;
        let c = if self.transposed { (3 - c) % 3 } else { c };
        let sandwich = match (moved, other.sandwich) {
            (None, s) | (s, None) => s,
            (Some([u, v, w]), Some([u2, v2, w2])) => Some([
                u.mul(&u2).expect("square"),
                v.mul(&v2).expect("square"),
                w.mul(&w2).expect("square"),
            ]),
        };
        Transform {
            cyclic_power: (self.cyclic_power + c) % 3,
            transposed: self.transposed ^ other.transposed,
            sandwich,
        }
    }

    pub fn apply(&self, t: &Triplet) -> Result<Triplet, SymmetryError> {
        let mut out = *t;
        if let Some([u, v, w]) = &self.sandwich {
            let (ui, vi, wi) = (u.inverse()?, v.inverse()?, w.inverse()?);
            out = Triplet::new(
                u.mul(&out.a)?.mul(&vi)?,
                v.mul(&out.b)?.mul(&wi)?,
                w.mul(&out.c)?.mul(&ui)?,
            );
        }
        let same_square = out.a.is_square() && out.a.shape() == out.b.shape() && out.b.shape() == out.c.shape();
        if (self.transposed || !self.cyclic_power.is_multiple_of(3)) && !same_square {
            return Err(SymmetryError::Shape(
                "cyclic and transpose need square matrices of one size".into(),
            ));
        }
        if self.transposed {
            out = Triplet::new(out.c.transpose(), out.b.transpose(), out.a.transpose());
        }
        for _ in 0..self.cyclic_power % 3 {
            out = Triplet::new(out.b, out.c, out.a);
        }
        Ok(out)
    }
}

/// Matrix operations needed to expand orbits, over any matrix-like atom.
///
/// Implemented for concrete matrices here and for symbolic matrices by the
/// encoder, so both share one orbit table.
pub trait AtomOps {
    type M: Clone;
    fn transpose(&mut self, m: &Self::M) -> Self::M;
    /// `F m F^-1` with the group's sandwich matrix.
    fn conjugate(&mut self, m: &Self::M) -> Self::M;
}

/// Concrete GF(2) matrices.
pub struct Concrete;

impl AtomOps for Concrete {
    type M = Gf2Matrix;

    fn transpose(&mut self, m: &Gf2Matrix) -> Gf2Matrix {
        m.transpose()
    }

    fn conjugate(&mut self, m: &Gf2Matrix) -> Gf2Matrix {
        m.conjugate(&sandwich_f()).expect("3x3 operand")
    }
}

/// Orbit triplet list for `kind` from representative atoms; the caller has
/// checked arity.
pub fn expand_with<O: AtomOps>(ops: &mut O, group: GroupId, kind: OrbitKind, reps: &[O::M]) -> Vec<[O::M; 3]> {
    use OrbitKind::*;
    let c = |x: &O::M| x.clone();
    match (group, kind) {
        (GroupId::Trivial, _) => vec![[c(&reps[0]), c(&reps[1]), c(&reps[2])]],
        (GroupId::Cyclic, Id) => {
            let (a, b, cc) = (&reps[0], &reps[1], &reps[2]);
            vec![[c(a), c(b), c(cc)], [c(b), c(cc), c(a)], [c(cc), c(a), c(b)]]
        }
        (GroupId::Cyclic, _) => vec![[c(&reps[0]), c(&reps[0]), c(&reps[0])]],
        (GroupId::CyclicTranspose, Id) => {
            let (a, b, cc) = (&reps[0], &reps[1], &reps[2]);
            let (at, bt, ct) = (ops.transpose(a), ops.transpose(b), ops.transpose(cc));
            vec![
                [c(a), c(b), c(cc)],
                [c(b), c(cc), c(a)],
                [c(cc), c(a), c(b)],
                [c(&ct), c(&bt), c(&at)],
                [c(&bt), c(&at), c(&ct)],
                [at, ct, bt],
            ]
        }
        (GroupId::CyclicTranspose, Transpose) => {
            let (s, h) = (&reps[0], &reps[1]);
            let ht = ops.transpose(h);
            vec![[c(s), c(h), c(&ht)], [c(h), c(&ht), c(s)], [ht, c(s), c(h)]]
        }
        (GroupId::CyclicTranspose, Delta) => {
            let d = &reps[0];
            let dt = ops.transpose(d);
            vec![[c(d), c(d), c(d)], [c(&dt), c(&dt), dt]]
        }
        (GroupId::CyclicSandwich, Id) => {
            let (a, b, cc) = (&reps[0], &reps[1], &reps[2]);
            let (fa, fb, fc) = (ops.conjugate(a), ops.conjugate(b), ops.conjugate(cc));
            vec![
                [c(a), c(b), c(cc)],
                [c(b), c(cc), c(a)],
                [c(cc), c(a), c(b)],
                [c(&fa), c(&fb), c(&fc)],
                [c(&fb), c(&fc), c(&fa)],
                [fc, fa, fb],
            ]
        }
        (GroupId::CyclicSandwich, Sandwich) => {
            let (x, y, z) = (&reps[0], &reps[1], &reps[2]);
            vec![[c(x), c(y), c(z)], [c(y), c(z), c(x)], [c(z), c(x), c(y)]]
        }
        (GroupId::CyclicSandwich, Delta) => {
            let d = &reps[0];
            let fd = ops.conjugate(d);
            vec![[c(d), c(d), c(d)], [c(&fd), c(&fd), fd]]
        }
        (_, Full) => vec![[c(&reps[0]), c(&reps[0]), c(&reps[0])]],
        (g, k) => unreachable!("kind {k} is not part of group {g}"),
    }
}

/// Checks arity, shapes and per-kind side conditions of a representative.
pub fn validate_rep(group: GroupId, kind: OrbitKind, reps: &[Gf2Matrix]) -> Result<(), SymmetryError> {
    if !group.has_kind(kind) {
        return Err(SymmetryError::KindNotInGroup { group, kind });
    }
    if reps.len() != kind.arity() {
        return Err(SymmetryError::Arity {
            kind,
            expected: kind.arity(),
            got: reps.len(),
        });
    }
    if group == GroupId::Trivial {
        let t = Triplet::new(reps[0], reps[1], reps[2]);
        return t.dims().map(|_| ()).map_err(|e| SymmetryError::Shape(e.to_string()));
    }
    let shape = reps[0].shape();
    if shape.0 != shape.1 || reps.iter().any(|m| m.shape() != shape) {
        return Err(SymmetryError::Shape(format!(
            "group {group} needs square matrices of one size"
        )));
    }
    if let Some(n) = group.required_n() {
        if shape.0 != n {
            return Err(SymmetryError::Shape(format!(
                "group {group} is defined for {n}x{n} matrices only"
            )));
        }
    }
    let named = |i: usize| group.roles(kind)[i];
    match (group, kind) {
        (GroupId::CyclicTranspose, OrbitKind::Transpose | OrbitKind::Full) => {
            if !reps[0].is_symmetric() {
                return Err(SymmetryError::SideCondition(format!(
                    "{} = {} must equal its transpose",
                    named(0),
                    reps[0]
                )));
            }
        }
        (GroupId::CyclicSandwich, OrbitKind::Sandwich | OrbitKind::Full) => {
            let f = sandwich_f();
            for (i, m) in reps.iter().enumerate() {
                if m.conjugate(&f)? != *m {
                    return Err(SymmetryError::SideCondition(format!(
                        "{} = {m} must satisfy F M F^-1 = M",
                        named(i)
                    )));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Validates the representative and lists the triplets of its orbit.
pub fn expand_orbit(group: GroupId, kind: OrbitKind, reps: &[Gf2Matrix]) -> Result<Vec<Triplet>, SymmetryError> {
    validate_rep(group, kind, reps)?;
    Ok(expand_with(&mut Concrete, group, kind, reps)
        .into_iter()
        .map(|[a, b, c]| Triplet::new(a, b, c))
        .collect())
}

/// The delta orbit of `d` cancels to zero: `D = D^T` under `<cyc,T>` or
/// `F D F^-1 = D` under `<cyc,sw>`.
pub fn is_degenerate_delta(group: GroupId, d: &Gf2Matrix) -> bool {
    match group {
        GroupId::CyclicTranspose => d.is_symmetric(),
        GroupId::CyclicSandwich => d.conjugate(&sandwich_f()).ok() == Some(*d),
        _ => false,
    }
}

/// True iff every generator maps the triplet multiset of `d` onto itself.
pub fn is_group_symmetric(d: &Decomposition, group: GroupId) -> bool {
    let multiset = |ts: &[Triplet]| {
        let mut m: HashMap<Triplet, usize> = HashMap::new();
        for t in ts {
            *m.entry(*t).or_default() += 1;
        }
        m
    };
    let base = multiset(&d.triplets);
    group.generators().iter().all(|g| {
        let moved: Result<Vec<Triplet>, _> = d.triplets.iter().map(|t| g.apply(t)).collect();
        moved.map(|m| multiset(&m) == base).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{evaluate, strassen, Dims};

    fn m(s: &str) -> Gf2Matrix {
        s.parse().unwrap()
    }

    fn sample() -> Triplet {
        Triplet::new(m("101;011;110"), m("100;111;001"), m("010;001;100"))
    }

    #[test]
    fn apply_examples() {
        let t = sample();
        assert_eq!(Transform::cyclic().apply(&t).unwrap(), Triplet::new(t.b, t.c, t.a));
        let tt = Transform::transpose().compose(&Transform::transpose());
        assert_eq!(tt.apply(&t).unwrap(), t);
        let i = Gf2Matrix::identity(3).unwrap();
        assert_eq!(Transform::sandwich(i, i, i).unwrap().apply(&t).unwrap(), t);
        assert_eq!(
            Transform::transpose().apply(&t).unwrap(),
            Triplet::new(t.c.transpose(), t.b.transpose(), t.a.transpose())
        );
        assert!(Transform::sandwich(m("11;11"), i, i).is_err());
    }

    #[test]
    fn expand_examples() {
        let d = m("110;011;001");
        let delta = expand_orbit(GroupId::Cyclic, OrbitKind::Delta, &[d]).unwrap();
        assert_eq!(delta, vec![Triplet::new(d, d, d)]);

        let (a, b, c) = (sample().a, sample().b, sample().c);
        let six = expand_orbit(GroupId::CyclicTranspose, OrbitKind::Id, &[a, b, c]).unwrap();
        let (at, bt, ct) = (a.transpose(), b.transpose(), c.transpose());
        assert_eq!(
            six,
            vec![
                Triplet::new(a, b, c),
                Triplet::new(b, c, a),
                Triplet::new(c, a, b),
                Triplet::new(ct, bt, at),
                Triplet::new(bt, at, ct),
                Triplet::new(at, ct, bt),
            ]
        );

        let fixed = m("100;010;000");
        assert_eq!(fixed.conjugate(&sandwich_f()).unwrap(), fixed);
        let pair = expand_orbit(GroupId::CyclicSandwich, OrbitKind::Delta, &[fixed]).unwrap();
        assert_eq!(pair.len(), 2);
        assert_eq!(pair[0], pair[1]);
        let decomp = Decomposition::new(Dims::square(3).unwrap(), pair).unwrap();
        assert!(evaluate(&decomp).is_zero());
        assert!(is_degenerate_delta(GroupId::CyclicSandwich, &fixed));
        assert!(!is_degenerate_delta(GroupId::CyclicSandwich, &m("000;100;000")));
    }

    #[test]
    fn side_conditions() {
        let sym = m("110;101;011");
        let h = m("100;110;111");
        assert!(expand_orbit(GroupId::CyclicTranspose, OrbitKind::Transpose, &[sym, h]).is_ok());
        assert!(matches!(
            expand_orbit(GroupId::CyclicTranspose, OrbitKind::Transpose, &[h, sym]),
            Err(SymmetryError::SideCondition(_))
        ));
        assert!(matches!(
            expand_orbit(GroupId::CyclicTranspose, OrbitKind::Full, &[h]),
            Err(SymmetryError::SideCondition(_))
        ));
        assert!(matches!(
            expand_orbit(GroupId::CyclicSandwich, OrbitKind::Full, &[h]),
            Err(SymmetryError::SideCondition(_))
        ));
        assert!(matches!(
            expand_orbit(GroupId::Cyclic, OrbitKind::Transpose, &[h, h]),
            Err(SymmetryError::KindNotInGroup { .. })
        ));
        assert!(matches!(
            expand_orbit(GroupId::Cyclic, OrbitKind::Id, &[h, h]),
            Err(SymmetryError::Arity { .. })
        ));
        assert!(matches!(
            expand_orbit(GroupId::CyclicSandwich, OrbitKind::Delta, &[m("10;01")]),
            Err(SymmetryError::Shape(_))
        ));
    }

    #[test]
    fn orbit_lengths() {
        let lens = |g: GroupId| -> Vec<usize> { g.kinds().iter().map(|&k| g.orbit_len(k)).collect() };
        assert_eq!(lens(GroupId::Cyclic), vec![3, 1]);
        assert_eq!(lens(GroupId::CyclicTranspose), vec![6, 3, 2, 1]);
        assert_eq!(lens(GroupId::CyclicSandwich), vec![6, 3, 2, 1]);
    }

    #[test]
    fn total_rank_examples() {
        assert_eq!(total_rank(GroupId::Cyclic, &[2, 1]), 7);
        assert_eq!(total_rank(GroupId::CyclicTranspose, &[0, 0, 0, 0]), 0);
        assert_eq!(total_rank(GroupId::CyclicSandwich, &[1, 1, 1, 1]), 12);
        assert_eq!(total_rank(GroupId::Trivial, &[6]), 6);
    }

    #[test]
    fn combo_parse_and_display() {
        let c = Combo::parse(GroupId::Cyclic, "id=2,delta=1").unwrap();
        assert_eq!(c.counts, vec![2, 1]);
        assert_eq!(c.to_string(), "id=2,delta=1");
        assert_eq!(c.total_rank(), 7);
        let partial = Combo::parse(GroupId::CyclicTranspose, "full=21").unwrap();
        assert_eq!(partial.counts, vec![0, 0, 0, 21]);
        assert!(Combo::parse(GroupId::Cyclic, "t=1").is_err());
        assert!(Combo::parse(GroupId::Cyclic, "id").is_err());
        assert!(Combo::parse(GroupId::Cyclic, "id=x").is_err());
    }

    #[test]
    fn group_names_round_trip() {
        for g in GroupId::ALL {
            assert_eq!(g.name().parse::<GroupId>().unwrap(), g);
        }
        assert!("cyc-x".parse::<GroupId>().is_err());
    }

    #[test]
    fn strassen_symmetry() {
        let s = strassen();
        assert!(is_group_symmetric(&s, GroupId::Cyclic));
        assert!(is_group_symmetric(&s, GroupId::Trivial));
        let single = Decomposition::new(Dims::square(3).unwrap(), vec![sample()]).unwrap();
        assert!(!is_group_symmetric(&single, GroupId::Cyclic));
        assert!(is_group_symmetric(&single, GroupId::Trivial));
    }

    #[test]
    fn group_elements_are_distinct_and_closed() {
        let t = sample();
        for g in [GroupId::Cyclic, GroupId::CyclicTranspose, GroupId::CyclicSandwich] {
            let elems = g.elements();
            let images: Vec<Triplet> = elems.iter().map(|e| e.apply(&t).unwrap()).collect();
            let mut dedup = images.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), elems.len(), "{g}");
            for x in &elems {
                for y in &elems {
                    let img = x.compose(y).apply(&t).unwrap();
                    assert!(images.contains(&img));
                }
            }
        }
    }
}
