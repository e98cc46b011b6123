//! CNF encoding of "a canonical symmetric decomposition with these orbit
//! counts exists", and decoding of solver models.
//!
//! Each orbit representative gets one variable per free matrix entry.
//! Symmetric matrices of `<cyc,T>` share variables across the diagonal;
//! the F-invariant matrices of `<cyc,sw>` keep all entries and add parity
//! equations instead. Orbit copies reuse the representative's expressions,
//! so the only auxiliaries are Tseitin definitions.

mod cnf;
#[cfg(test)]
mod dpll;
mod expr;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cnf::{CnfInstance, DimacsError, Model};
pub use expr::{Expr, ExprBuilder, LengthMismatch, Tseitin};

use crate::canonical::{check_canonical, CanonicalError, Rep, SymmetricDecomposition};
use crate::gf2::Gf2Matrix;
use crate::symmetry::{expand_with, sandwich_f, AtomOps, Combo, GroupId, OrbitKind};
use crate::tensor::{mm_tensor_for, tensor_indices, verify, Decomposition, Dims, Tensor6};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("combo {combo} belongs to group {found}, not {expected}")]
    GroupMismatch {
        combo: String,
        found: GroupId,
        expected: GroupId,
    },
    #[error("combo has total rank 0")]
    EmptyCombo,
    #[error("group {0} needs a square tensor")]
    NotSquare(GroupId),
    #[error("group {group} is defined for n = {required} only")]
    WrongSize { group: GroupId, required: usize },
    #[error("xor width must be at least 3, got {0}")]
    XorWidth(usize),
    #[error("model does not assign variable {0}")]
    MissingVariable(u32),
    #[error("variable map does not match the combo: {0}")]
    MapMismatch(String),
    #[error("target tensor is {found}, expected {expected}")]
    TargetShape { found: Dims, expected: Dims },
    #[error("decoded model is not a valid symmetric decomposition: {0}")]
    Invalid(#[from] CanonicalError),
}

/// Optional constraints and CNF shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncoderConfig {
    /// Require every representative matrix to be nonzero, not just the triplet.
    pub per_matrix_nonzero: bool,
    /// Require `S != H` in transpose orbits of `<cyc,T>`.
    pub s_neq_h: bool,
    /// Largest XOR written directly as clauses; longer ones are split.
    pub xor_width: usize,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            per_matrix_nonzero: false,
            s_neq_h: false,
            xor_width: 4,
        }
    }
}

/// One primary variable: entry `(row, col)` of matrix `mat` in representative
/// `index` of kind `orbit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryVar {
    pub var: u32,
    pub orbit: String,
    pub index: usize,
    pub mat: String,
    pub row: usize,
    pub col: usize,
}

impl PrimaryVar {
    pub fn label(&self) -> String {
        format!(
            "{}[{}].{}[{}][{}]",
            self.orbit, self.index, self.mat, self.row, self.col
        )
    }
}

/// Primary variables in numbering order; every variable from `aux_start` on
/// is a Tseitin auxiliary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarMap {
    pub primary: Vec<PrimaryVar>,
    pub aux_start: u32,
}

impl VarMap {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn is_aux(&self, var: u32) -> bool {
        var >= self.aux_start
    }
}

/// A matrix of expressions, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Expr>,
}

impl SymMatrix {
    pub fn get(&self, i: usize, j: usize) -> Expr {
        self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> SymMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        SymMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `F M F^-1` for a constant square `f`.
    pub fn conjugate(&self, b: &mut ExprBuilder, f: &Gf2Matrix) -> SymMatrix {
        let n = self.rows;
        let finv = f.inverse().expect("invertible conjugator");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut terms = Vec::new();
                for p in 0..n {
                    for q in 0..n {
                        if f.get(i, p) && finv.get(q, j) {
                            terms.push(self.get(p, q));
                        }
                    }
                }
                entries.push(b.xor(terms));
            }
        }
        SymMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }
}

struct Symbolic<'a>(&'a mut ExprBuilder);

impl AtomOps for Symbolic<'_> {
    type M = SymMatrix;

    fn transpose(&mut self, m: &SymMatrix) -> SymMatrix {
        m.transpose()
    }

    fn conjugate(&mut self, m: &SymMatrix) -> SymMatrix {
        m.conjugate(self.0, &sandwich_f())
    }
}

/// Representatives over fresh variables, plus the expressions they were built in.
pub struct SymbolicOrbits {
    pub group: GroupId,
    pub dims: Dims,
    pub exprs: ExprBuilder,
    /// One list per kind; each representative holds its role matrices.
    pub orbits: Vec<Vec<Vec<SymMatrix>>>,
    pub map: VarMap,
    /// Parity equations `F M F^-1 = M`, each asserted true.
    pub side_conditions: Vec<Expr>,
}

fn role_shape(group: GroupId, dims: Dims, role: usize) -> (usize, usize) {
    if group == GroupId::Trivial {
        [dims.a_shape(), dims.b_shape(), dims.c_shape()][role]
    } else {
        (dims.n, dims.n)
    }
}

fn mirrored(group: GroupId, kind: OrbitKind, role: usize) -> bool {
    group == GroupId::CyclicTranspose && role == 0 && matches!(kind, OrbitKind::Transpose | OrbitKind::Full)
}

fn f_invariant(group: GroupId, kind: OrbitKind) -> bool {
    group == GroupId::CyclicSandwich && matches!(kind, OrbitKind::Sandwich | OrbitKind::Full)
}

fn check_inputs(group: GroupId, dims: Dims, combo: &Combo) -> Result<(), EncodeError> {
    if combo.group != group {
        return Err(EncodeError::GroupMismatch {
            combo: combo.to_string(),
            found: combo.group,
            expected: group,
        });
    }
    if group != GroupId::Trivial && !dims.is_square() {
        return Err(EncodeError::NotSquare(group));
    }
    if let Some(required) = group.required_n() {
        if dims.n != required {
            return Err(EncodeError::WrongSize { group, required });
        }
    }
    Ok(())
}

/// Allocates the primary variables of every representative.
pub fn build_symbolic_orbits(group: GroupId, dims: Dims, combo: &Combo) -> Result<SymbolicOrbits, EncodeError> {
    check_inputs(group, dims, combo)?;
    let mut exprs = ExprBuilder::new();
    let mut primary = Vec::new();
    let mut orbits = Vec::new();
    for (kind, count) in combo.iter() {
        let mut reps = Vec::new();
        for index in 0..count as usize {
            let mut rep = Vec::new();
            for (role, name) in group.roles(kind).iter().enumerate() {
                let (rows, cols) = role_shape(group, dims, role);
                let sym = mirrored(group, kind, role);
                let mut entries = vec![Expr::FALSE; rows * cols];
                for i in 0..rows {
                    for j in 0..cols {
                        if sym && j < i {
                            entries[i * cols + j] = entries[j * cols + i];
                            continue;
                        }
                        entries[i * cols + j] = exprs.var();
                        primary.push(PrimaryVar {
                            var: exprs.var_count(),
                            orbit: kind.name().to_string(),
                            index,
                            mat: name.to_string(),
                            row: i,
                            col: j,
                        });
                    }
                }
                rep.push(SymMatrix { rows, cols, entries });
            }
            reps.push(rep);
        }
        orbits.push(reps);
    }
    let mut side_conditions = Vec::new();
    let f = sandwich_f();
    for (&kind, reps) in group.kinds().iter().zip(&orbits) {
        if !f_invariant(group, kind) {
            continue;
        }
        for rep in reps {
            for m in rep {
                let fm = m.conjugate(&mut exprs, &f);
                for (&x, &y) in fm.entries.iter().zip(&m.entries) {
                    let e = exprs.equiv(x, y);
                    side_conditions.push(e);
                }
            }
        }
    }
    let aux_start = exprs.var_count() + 1;
    Ok(SymbolicOrbits {
        group,
        dims,
        exprs,
        orbits,
        map: VarMap { primary, aux_start },
        side_conditions,
    })
}

fn flatten(ms: &[&SymMatrix]) -> Vec<Expr> {
    ms.iter().flat_map(|m| m.entries.iter().copied()).collect()
}

fn triplet_of(group: GroupId, kind: OrbitKind, rep: &[SymMatrix]) -> [SymMatrix; 3] {
    let _ = group;
    match kind {
        OrbitKind::Id | OrbitKind::Sandwich => [rep[0].clone(), rep[1].clone(), rep[2].clone()],
        OrbitKind::Transpose => [rep[0].clone(), rep[1].clone(), rep[1].transpose()],
        OrbitKind::Delta | OrbitKind::Full => [rep[0].clone(), rep[0].clone(), rep[0].clone()],
    }
}

fn merge_key(kind: OrbitKind, rep: &[SymMatrix]) -> Vec<Expr> {
    match kind {
        OrbitKind::Id | OrbitKind::Sandwich => flatten(&[&rep[0], &rep[1]]),
        OrbitKind::Transpose => rep[1].entries.clone(),
        OrbitKind::Delta | OrbitKind::Full => rep[0].entries.clone(),
    }
}

/// Every constraint of the instance, as expressions to be asserted.
fn constraints(sym: &mut SymbolicOrbits, config: &EncoderConfig, target: &Tensor6) -> Vec<Expr> {
    let group = sym.group;
    let b = &mut sym.exprs;
    let mut out = sym.side_conditions.clone();
    let f = sandwich_f();

    for (&kind, reps) in group.kinds().iter().zip(&sym.orbits) {
        for rep in reps {
            let t = triplet_of(group, kind, rep);
            let nonzero = b.or(flatten(&[&t[0], &t[1], &t[2]]));
            out.push(nonzero);
            if config.per_matrix_nonzero {
                for m in &t {
                    let e = b.or(m.entries.clone());
                    out.push(e);
                }
            }
            if config.s_neq_h && kind == OrbitKind::Transpose {
                let diffs: Vec<Expr> = rep[0]
                    .entries
                    .iter()
                    .zip(&rep[1].entries)
                    .map(|(&s, &h)| b.xor([s, h]))
                    .collect();
                let e = b.or(diffs);
                out.push(e);
            }
            let own = flatten(&[&t[0], &t[1], &t[2]]);
            match (group, kind) {
                (GroupId::Trivial, _) => {}
                (_, OrbitKind::Id) | (GroupId::CyclicSandwich, OrbitKind::Sandwich) => {
                    let orbit = expand_with(&mut Symbolic(b), group, kind, rep);
                    for other in &orbit[1..] {
                        let theirs = flatten(&[&other[0], &other[1], &other[2]]);
                        let e = b.lex_less(&own, &theirs).expect("same shapes");
                        out.push(e);
                    }
                }
                (GroupId::CyclicTranspose, OrbitKind::Delta) => {
                    let dt = rep[0].transpose();
                    let e = b.lex_less(&rep[0].entries, &dt.entries).expect("square");
                    out.push(e);
                }
                (GroupId::CyclicSandwich, OrbitKind::Delta) => {
                    let fd = rep[0].conjugate(b, &f);
                    let e = b.lex_less(&rep[0].entries, &fd.entries).expect("square");
                    out.push(e);
                }
                _ => {}
            }
        }
        for pair in reps.windows(2) {
            let e = b
                .lex_less(&merge_key(kind, &pair[0]), &merge_key(kind, &pair[1]))
                .expect("same shapes");
            out.push(e);
        }
    }

    let mut triplets = Vec::new();
    for (&kind, reps) in group.kinds().iter().zip(&sym.orbits) {
        for rep in reps {
            triplets.extend(expand_with(&mut Symbolic(b), group, kind, rep));
        }
    }
    for idx in tensor_indices(sym.dims) {
        let [i, j, k, l, m, n] = idx;
        let terms: Vec<Expr> = triplets
            .iter()
            .map(|t| b.and([t[0].get(i, j), t[1].get(k, l), t[2].get(m, n)]))
            .collect();
        let sum = b.xor(terms);
        out.push(if target.get(idx) { sum } else { sum.not() });
    }
    out
}

/// CNF whose models are the canonical `group`-symmetric decompositions of
/// the matrix multiplication tensor with orbit counts `combo`.
pub fn encode(
    group: GroupId,
    dims: Dims,
    combo: &Combo,
    config: &EncoderConfig,
) -> Result<(CnfInstance, VarMap), EncodeError> {
    encode_target(group, dims, combo, config, &mm_tensor_for(dims))
}

/// [`encode`] with an arbitrary target tensor in place of matrix multiplication.
pub fn encode_target(
    group: GroupId,
    dims: Dims,
    combo: &Combo,
    config: &EncoderConfig,
    target: &Tensor6,
) -> Result<(CnfInstance, VarMap), EncodeError> {
    if target.dims() != dims {
        return Err(EncodeError::TargetShape {
            found: target.dims(),
            expected: dims,
        });
    }
    if config.xor_width < 3 {
        return Err(EncodeError::XorWidth(config.xor_width));
    }
    check_inputs(group, dims, combo)?;
    if combo.total_rank() == 0 {
        return Err(EncodeError::EmptyCombo);
    }
    let mut sym = build_symbolic_orbits(group, dims, combo)?;
    let asserted = constraints(&mut sym, config, target);
    let mut ts = Tseitin::new(&sym.exprs, config.xor_width);
    for e in asserted {
        ts.assert(e);
    }
    let mut comments = vec![
        format!("mmtsat {} <{},{},{}> {combo}", group.name(), dims.n, dims.k, dims.m),
        format!("primary variables 1..{}", sym.map.aux_start - 1),
    ];
    comments.extend(sym.map.primary.iter().map(|p| format!("var {} = {}", p.var, p.label())));
    let cnf = CnfInstance {
        num_vars: ts.var_count(),
        clauses: ts.clauses,
        comments,
    };
    Ok((cnf, sym.map))
}

/// Rebuilds the representatives named by `map` from `model`.
///
/// Fails if a primary variable is unassigned or the representatives violate
/// a side condition. The caller still has to run [`audit`].
pub fn decode(
    model: &Model,
    map: &VarMap,
    group: GroupId,
    dims: Dims,
    combo: &Combo,
) -> Result<(SymmetricDecomposition, Decomposition), EncodeError> {
    check_inputs(group, dims, combo)?;
    let mut orbits: Vec<Vec<Rep>> = combo
        .iter()
        .map(|(kind, count)| {
            (0..count)
                .map(|_| {
                    (0..kind.arity())
                        .map(|role| {
                            let (r, c) = role_shape(group, dims, role);
                            Gf2Matrix::zero(r, c).expect("valid shape")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for p in &map.primary {
        let value = model.get(p.var).ok_or(EncodeError::MissingVariable(p.var))?;
        let kind: OrbitKind = p
            .orbit
            .parse()
            .map_err(|e: crate::symmetry::SymmetryError| EncodeError::MapMismatch(e.to_string()))?;
        let pos = combo
            .position(kind)
            .ok_or_else(|| EncodeError::MapMismatch(format!("kind {kind} not in {group}")))?;
        let role = group
            .roles(kind)
            .iter()
            .position(|&r| r == p.mat)
            .ok_or_else(|| EncodeError::MapMismatch(format!("role {} of {kind}", p.mat)))?;
        let m = orbits[pos]
            .get_mut(p.index)
            .and_then(|rep| rep.get_mut(role))
            .ok_or_else(|| EncodeError::MapMismatch(p.label()))?;
        if p.row >= m.rows() || p.col >= m.cols() {
            return Err(EncodeError::MapMismatch(p.label()));
        }
        m.set(p.row, p.col, value);
        if mirrored(group, kind, role) {
            m.set(p.col, p.row, value);
        }
        *seen.entry((pos, p.index, role)).or_default() += 1;
    }
    for (pos, (kind, count)) in combo.iter().enumerate() {
        for index in 0..count as usize {
            for role in 0..kind.arity() {
                let (r, c) = role_shape(group, dims, role);
                let expected = if mirrored(group, kind, role) {
                    r * (r + 1) / 2
                } else {
                    r * c
                };
                if seen.get(&(pos, index, role)).copied().unwrap_or(0) != expected {
                    return Err(EncodeError::MapMismatch(format!(
                        "{kind}[{index}].{} is not fully covered",
                        group.roles(kind)[role]
                    )));
                }
            }
        }
    }
    let sym = SymmetricDecomposition::new(group, dims, orbits)?;
    let plain = sym.expand();
    Ok((sym, plain))
}

/// Problems with a decoded model. Non-empty output means the encoding is unsound.
pub fn audit(sym: &SymmetricDecomposition) -> Vec<String> {
    let mut problems = Vec::new();
    let plain = sym.expand();
    if !verify(&plain) {
        problems.push("expanded triplets do not sum to the target tensor".to_string());
    }
    if !crate::symmetry::is_group_symmetric(&plain, sym.group) {
        problems.push(format!("decomposition is not {}-symmetric", sym.group));
    }
    problems.extend(check_canonical(sym).iter().map(|v| format!("not canonical: {v}")));
    problems
}

/// Assignment of the primary variables describing `sym`, for round trips.
pub fn assignment_of(sym: &SymmetricDecomposition, map: &VarMap) -> Model {
    let mut model = Model::new();
    for p in &map.primary {
        let kind: OrbitKind = p.orbit.parse().expect("map built by encoder");
        let role = sym.group.roles(kind).iter().position(|&r| r == p.mat).expect("role");
        let value = sym
            .list(kind)
            .get(p.index)
            .map(|rep| rep[role].get(p.row, p.col))
            .unwrap_or(false);
        model.set(p.var, value);
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;

    fn combo(group: GroupId, s: &str) -> Combo {
        Combo::parse(group, s).unwrap()
    }

    fn d(n: usize) -> Dims {
        Dims::square(n).unwrap()
    }

    fn primaries(group: GroupId, n: usize, s: &str) -> usize {
        build_symbolic_orbits(group, d(n), &combo(group, s))
            .unwrap()
            .map
            .primary
            .len()
    }

    #[test]
    fn primary_variable_counts() {
        assert_eq!(primaries(GroupId::CyclicTranspose, 3, "full=1"), 6);
        assert_eq!(primaries(GroupId::Cyclic, 3, "delta=1"), 9);
        assert_eq!(primaries(GroupId::Cyclic, 3, "id=1"), 27);
        assert_eq!(primaries(GroupId::CyclicTranspose, 3, "t=1"), 6 + 9);
        assert_eq!(primaries(GroupId::CyclicSandwich, 3, "sw=1,full=1"), 36);
    }

    #[test]
    fn numbering_follows_kind_index_role_row_major() {
        let s = build_symbolic_orbits(GroupId::Cyclic, d(2), &combo(GroupId::Cyclic, "id=2,delta=1")).unwrap();
        let labels: Vec<String> = s.map.primary.iter().map(PrimaryVar::label).collect();
        assert_eq!(labels[0], "id[0].A[0][0]");
        assert_eq!(labels[3], "id[0].A[1][1]");
        assert_eq!(labels[4], "id[0].B[0][0]");
        assert_eq!(labels[12], "id[1].A[0][0]");
        assert_eq!(labels[24], "delta[0].D[0][0]");
        assert_eq!(s.map.aux_start, 29);
        assert!(s.map.primary.iter().enumerate().all(|(i, p)| p.var == i as u32 + 1));
    }

    #[test]
    fn zero_rank_and_bad_width_are_rejected() {
        let g = GroupId::Cyclic;
        assert!(matches!(
            encode(g, d(2), &Combo::zero(g), &EncoderConfig::default()),
            Err(EncodeError::EmptyCombo)
        ));
        let cfg = EncoderConfig {
            xor_width: 2,
            ..Default::default()
        };
        assert!(encode(g, d(2), &combo(g, "delta=1"), &cfg).is_err());
        assert!(matches!(
            encode(
                GroupId::CyclicSandwich,
                d(2),
                &combo(GroupId::CyclicSandwich, "full=1"),
                &EncoderConfig::default()
            ),
            Err(EncodeError::WrongSize { .. })
        ));
    }

    #[test]
    fn encoding_is_deterministic() {
        let g = GroupId::Cyclic;
        let a = encode(g, d(3), &combo(g, "id=2,delta=1"), &EncoderConfig::default()).unwrap();
        let b = encode(g, d(3), &combo(g, "id=2,delta=1"), &EncoderConfig::default()).unwrap();
        assert_eq!(a.0.to_dimacs(), b.0.to_dimacs());
        assert_eq!(a.1.to_json(), b.1.to_json());
    }

    #[test]
    fn varmap_json_shape() {
        let g = GroupId::Cyclic;
        let (_, map) = encode(g, d(2), &combo(g, "delta=1"), &EncoderConfig::default()).unwrap();
        let json = map.to_json();
        assert!(json.starts_with(r#"{"primary":[{"var":1,"orbit":"delta","index":0,"mat":"D","row":0,"col":0},"#));
        assert!(json.ends_with(r#""aux_start":5}"#));
        assert_eq!(VarMap::from_json(&json).unwrap(), map);
    }

    #[test]
    fn clauses_stay_in_range_and_width() {
        let g = GroupId::CyclicTranspose;
        let cfg = EncoderConfig::default();
        let (cnf, _) = encode(g, d(2), &combo(g, "id=1,t=1,delta=1"), &cfg).unwrap();
        for c in &cnf.clauses {
            assert!(c.iter().all(|l| *l != 0 && l.unsigned_abs() <= cnf.num_vars));
        }
    }

    fn strassen_sym() -> SymmetricDecomposition {
        let m = |s: &str| -> Gf2Matrix { s.parse().unwrap() };
        SymmetricDecomposition::new(
            GroupId::Cyclic,
            d(2),
            vec![
                vec![
                    vec![m("00;01"), m("10;10"), m("11;00")],
                    vec![m("00;11"), m("10;00"), m("01;01")],
                ],
                vec![vec![m("10;01")]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn decode_round_trips_known_decomposition() {
        let g = GroupId::Cyclic;
        let c = combo(g, "id=2,delta=1");
        let (_, map) = encode(g, d(2), &c, &EncoderConfig::default()).unwrap();
        let model = assignment_of(&strassen_sym(), &map);
        let (sym, plain) = decode(&model, &map, g, d(2), &c).unwrap();
        assert_eq!(sym, strassen_sym());
        assert!(verify(&plain));
        assert!(audit(&sym).is_empty());
    }

    #[test]
    fn all_zero_model_fails_audit() {
        let g = GroupId::Cyclic;
        let c = combo(g, "id=2,delta=1");
        let (_, map) = encode(g, d(2), &c, &EncoderConfig::default()).unwrap();
        let model = Model::from_literals(map.primary.iter().map(|p| -(p.var as i32)));
        let (sym, _) = decode(&model, &map, g, d(2), &c).unwrap();
        assert!(!audit(&sym).is_empty());
        let partial = Model::from_literals([1]);
        assert!(matches!(
            decode(&partial, &map, g, d(2), &c),
            Err(EncodeError::MissingVariable(2))
        ));
    }

    /// Extends the primary assignment through the CNF with the test solver.
    fn extends(cnf: &CnfInstance, model: &Model) -> bool {
        let mut clauses = cnf.clauses.clone();
        clauses.extend(model.literals().into_iter().map(|l| vec![l]));
        dpll::solve(cnf.num_vars, &clauses).is_some()
    }

    #[test]
    fn canonical_strassen_extends_to_a_model() {
        let g = GroupId::Cyclic;
        let c = combo(g, "id=2,delta=1");
        let (cnf, map) = encode(g, d(2), &c, &EncoderConfig::default()).unwrap();
        assert!(extends(&cnf, &assignment_of(&strassen_sym(), &map)));
        // the same triplets with the id orbits listed in the wrong order are rejected
        let mut swapped = strassen_sym();
        swapped.orbits[0].swap(0, 1);
        assert!(!extends(&cnf, &assignment_of(&swapped, &map)));
    }
}
