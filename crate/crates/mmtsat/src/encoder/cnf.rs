//! CNF instances, DIMACS text, and solver models.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfInstance {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
}

impl CnfInstance {
    /// DIMACS text: comments, header, then one 0-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            writeln!(out, "c {c}").unwrap();
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, DimacsError> {
        let mut inst = CnfInstance::default();
        let mut header = None;
        let mut current = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let syntax = |reason: String| DimacsError::Syntax { line: i + 1, reason };
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('c') {
                if rest.is_empty() || rest.starts_with(' ') {
                    inst.comments.push(rest.trim_start().to_string());
                    continue;
                }
            }
            if let Some(rest) = line.strip_prefix("p ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, c] => {
                        let v = v.parse().map_err(|_| syntax("bad variable count".into()))?;
                        let c: usize = c.parse().map_err(|_| syntax("bad clause count".into()))?;
                        inst.num_vars = v;
                        header = Some(c);
                    }
                    _ => return Err(syntax(format!("bad header {line:?}"))),
                }
                continue;
            }
            if header.is_none() {
                return Err(DimacsError::MissingHeader);
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| syntax(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    inst.clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() > inst.num_vars {
                    return Err(syntax(format!("literal {lit} exceeds variable count")));
                } else {
                    current.push(lit);
                }
            }
        }
        if header.is_none() {
            return Err(DimacsError::MissingHeader);
        }
        if !current.is_empty() {
            inst.clauses.push(current);
        }
        Ok(inst)
    }

    /// True iff `model` satisfies every clause.
    pub fn satisfied_by(&self, model: &Model) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| model.get(l.unsigned_abs()) == Some(l > 0)))
    }
}

/// A (possibly partial) assignment, indexed by variable number.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    values: Vec<Option<bool>>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    /// Model from signed literals, as printed on solver `v` lines.
    pub fn from_literals<I: IntoIterator<Item = i32>>(lits: I) -> Self {
        let mut m = Self::new();
        for l in lits {
            if l != 0 {
                m.set(l.unsigned_abs(), l > 0);
            }
        }
        m
    }

    pub fn set(&mut self, var: u32, value: bool) {
        let i = var as usize;
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    /// Signed literals of all assigned variables in increasing order.
    pub fn literals(&self) -> Vec<i32> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, x)| x.map(|b| if b { v as i32 } else { -(v as i32) }))
            .collect()
    }
}
