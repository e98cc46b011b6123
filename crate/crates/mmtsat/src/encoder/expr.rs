//! Hash-consed boolean expression DAG and its Tseitin conversion to CNF.
//!
//! Expressions are edges with a complement bit, as in and-inverter graphs:
//! negation is free and `NOT` never appears as a node. Nodes are `AND` and
//! `XOR` over sorted, deduplicated children, so structurally equal
//! subterms are shared.

use std::collections::HashMap;

/// A possibly negated reference to a node.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Expr(u32);

impl Expr {
    pub const FALSE: Expr = Expr(0);
    pub const TRUE: Expr = Expr(1);

    pub fn constant(v: bool) -> Expr {
        if v {
            Expr::TRUE
        } else {
            Expr::FALSE
        }
    }

    fn new(node: usize, negated: bool) -> Expr {
        Expr(((node as u32) << 1) | negated as u32)
    }

    fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn positive(self) -> Expr {
        Expr(self.0 & !1)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Expr {
        Expr(self.0 ^ 1)
    }

    pub fn as_const(self) -> Option<bool> {
        (self.node() == 0).then_some(self.negated())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    False,
    Var(u32),
    And(Vec<Expr>),
    Xor(Vec<Expr>),
}

/// Builds expressions over numbered variables `1..=var_count()`.
#[derive(Default)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
    dedup: HashMap<Node, usize>,
    vars: u32,
}

impl ExprBuilder {
    pub fn new() -> Self {
        let mut b = Self::default();
        b.nodes.push(Node::False);
        b
    }

    pub fn var_count(&self) -> u32 {
        self.vars
    }

    /// A fresh variable, numbered after all previous ones.
    pub fn var(&mut self) -> Expr {
        self.vars += 1;
        let id = self.intern(Node::Var(self.vars));
        Expr::new(id, false)
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.dedup.insert(node, id);
        id
    }

    pub fn and<I: IntoIterator<Item = Expr>>(&mut self, xs: I) -> Expr {
        let mut kids = Vec::new();
        for x in xs {
            match x.as_const() {
                Some(true) => {}
                Some(false) => return Expr::FALSE,
                None => kids.push(x),
            }
        }
        kids.sort();
        kids.dedup();
        if kids.windows(2).any(|w| w[0].node() == w[1].node()) {
            // x and !x are adjacent after sorting
            return Expr::FALSE;
        }
        match kids.len() {
            0 => Expr::TRUE,
            1 => kids[0],
            _ => Expr::new(self.intern(Node::And(kids)), false),
        }
    }

    pub fn or<I: IntoIterator<Item = Expr>>(&mut self, xs: I) -> Expr {
        let negated: Vec<Expr> = xs.into_iter().map(Expr::not).collect();
        self.and(negated).not()
    }

    pub fn xor<I: IntoIterator<Item = Expr>>(&mut self, xs: I) -> Expr {
        let mut flip = false;
        let mut kids = Vec::new();
        for x in xs {
            flip ^= x.negated();
            if x.node() != 0 {
                kids.push(x.positive());
            }
        }
        kids.sort();
        let mut reduced: Vec<Expr> = Vec::with_capacity(kids.len());
        for k in kids {
            if reduced.last() == Some(&k) {
                reduced.pop();
            } else {
                reduced.push(k);
            }
        }
        let base = match reduced.len() {
            0 => Expr::FALSE,
            1 => reduced[0],
            _ => Expr::new(self.intern(Node::Xor(reduced)), false),
        };
        if flip {
            base.not()
        } else {
            base
        }
    }

    pub fn equiv(&mut self, a: Expr, b: Expr) -> Expr {
        self.xor([a, b]).not()
    }

    /// Strict lexicographic `a < b` (false on empty inputs).
    ///
    /// Built as `OR_i (a_0..a_{i-1} == b_0..b_{i-1}) & !a_i & b_i`, sharing
    /// the prefix-equality chain across positions.
    pub fn lex_less(&mut self, a: &[Expr], b: &[Expr]) -> Result<Expr, LengthMismatch> {
        if a.len() != b.len() {
            return Err(LengthMismatch(a.len(), b.len()));
        }
        let mut prefix_eq = Expr::TRUE;
        let mut terms = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            terms.push(self.and([prefix_eq, x.not(), y]));
            let eq = self.equiv(x, y);
            prefix_eq = self.and([prefix_eq, eq]);
            if prefix_eq == Expr::FALSE {
                break;
            }
        }
        Ok(self.or(terms))
    }

    /// Evaluates `e` with variable values from `value`.
    pub fn eval(&self, e: Expr, value: &dyn Fn(u32) -> bool) -> bool {
        let mut memo: HashMap<usize, bool> = HashMap::new();
        self.eval_memo(e, value, &mut memo)
    }

    fn eval_memo(&self, e: Expr, value: &dyn Fn(u32) -> bool, memo: &mut HashMap<usize, bool>) -> bool {
        let id = e.node();
        let v = if let Some(&v) = memo.get(&id) {
            v
        } else {
            let v = match &self.nodes[id] {
                Node::False => false,
                Node::Var(n) => value(*n),
                Node::And(kids) => kids.iter().all(|&k| self.eval_memo(k, value, memo)),
                Node::Xor(kids) => kids.iter().fold(false, |acc, &k| acc ^ self.eval_memo(k, value, memo)),
            };
            memo.insert(id, v);
            v
        };
        v ^ e.negated()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("lex comparison of {0} against {1} entries")]
pub struct LengthMismatch(pub usize, pub usize);

/// Tseitin conversion. Primary variables keep their numbers; auxiliaries
/// follow in order of first use.
pub struct Tseitin<'a> {
    exprs: &'a ExprBuilder,
    lit_of: Vec<Option<i32>>,
    next_var: i32,
    xor_width: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl<'a> Tseitin<'a> {
    /// `xor_width` is the largest parity block written as plain clauses; it
    /// must be at least 3.
    pub fn new(exprs: &'a ExprBuilder, xor_width: usize) -> Self {
        assert!(xor_width >= 3, "xor width must be at least 3");
        Self {
            exprs,
            lit_of: vec![None; exprs.nodes.len()],
            next_var: exprs.var_count() as i32 + 1,
            xor_width,
            clauses: Vec::new(),
        }
    }

    pub fn var_count(&self) -> u32 {
        (self.next_var - 1) as u32
    }

    fn fresh(&mut self) -> i32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    /// Literal equivalent to a non-constant `e`, defining auxiliaries as needed.
    pub fn lit(&mut self, e: Expr) -> i32 {
        assert!(e.as_const().is_none(), "constant has no literal");
        let id = e.node();
        let base = match self.lit_of[id] {
            Some(l) => l,
            None => {
                let l = match &self.exprs.nodes[id] {
                    Node::False => unreachable!(),
                    Node::Var(n) => *n as i32,
                    Node::And(kids) => {
                        let kids: Vec<i32> = kids.iter().map(|&k| self.lit(k)).collect();
                        let y = self.fresh();
                        for &k in &kids {
                            self.clauses.push(vec![-y, k]);
                        }
                        let mut long: Vec<i32> = kids.iter().map(|k| -k).collect();
                        long.push(y);
                        self.clauses.push(long);
                        y
                    }
                    Node::Xor(kids) => {
                        let mut lits: Vec<i32> = kids.iter().map(|&k| self.lit(k)).collect();
                        let y = self.fresh();
                        lits.push(y);
                        self.parity(lits, false);
                        y
                    }
                };
                self.lit_of[id] = Some(l);
                l
            }
        };
        if e.negated() {
            -base
        } else {
            base
        }
    }

    /// Adds clauses forcing `e` to hold.
    pub fn assert(&mut self, e: Expr) {
        if let Some(v) = e.as_const() {
            if !v {
                self.clauses.push(Vec::new());
            }
            return;
        }
        match (&self.exprs.nodes[e.node()], e.negated()) {
            (Node::And(kids), false) => {
                for &k in kids {
                    self.assert(k);
                }
            }
            (Node::And(kids), true) => {
                let clause: Vec<i32> = kids.iter().map(|&k| -self.lit(k)).collect();
                self.clauses.push(clause);
            }
            (Node::Xor(kids), negated) => {
                let lits: Vec<i32> = kids.iter().map(|&k| self.lit(k)).collect();
                self.parity(lits, !negated);
            }
            _ => {
                let l = self.lit(e);
                self.clauses.push(vec![l]);
            }
        }
    }

    /// `XOR lits = rhs`, split into blocks of at most `xor_width` literals
    /// joined by fresh auxiliaries, level by level.
    pub fn parity(&mut self, mut lits: Vec<i32>, rhs: bool) {
        while lits.len() > self.xor_width {
            let mut next = Vec::with_capacity(lits.len() / (self.xor_width - 1) + 1);
            for chunk in lits.chunks(self.xor_width - 1) {
                if chunk.len() == 1 {
                    next.push(chunk[0]);
                    continue;
                }
                let t = self.fresh();
                let mut block = chunk.to_vec();
                block.push(t);
                self.parity_block(&block, false);
                next.push(t);
            }
            lits = next;
        }
        self.parity_block(&lits, rhs);
    }

    fn parity_block(&mut self, lits: &[i32], rhs: bool) {
        let k = lits.len();
        for mask in 0u32..(1 << k) {
            // forbid assignments whose parity differs from rhs
            if (mask.count_ones() % 2 == 1) == rhs {
                continue;
            }
            let clause = lits
                .iter()
                .enumerate()
                .map(|(i, &l)| if mask >> i & 1 == 1 { -l } else { l })
                .collect();
            self.clauses.push(clause);
        }
    }
}
