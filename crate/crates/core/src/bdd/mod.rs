//! Reduced ordered binary decision diagrams.
//!
//! Nodes live in a [`BddManager`]; a [`Bdd`] is a handle into one manager.
//! The variable order is registration order. There are no complement
//! edges: node identity is function identity, so two handles from the same
//! manager are equal exactly when they denote the same Boolean function.
//!
//! Cloning a manager forks it: handles issued before the clone stay valid in
//! both copies, since the clone starts from the same node table.

mod text;

use std::sync::atomic::{AtomicU32, Ordering};

use rustc_hash::FxHashMap;
use thiserror::Error;

pub use text::parse_ite;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BddError {
    #[error("decision diagram handle belongs to a different manager")]
    ForeignRef,
    #[error("unknown variable index {0}")]
    UnknownVariable(u32),
    #[error("unknown variable name `{0}`")]
    UnknownName(String),
    #[error("variable name `{0}` registered twice")]
    DuplicateName(String),
    #[error("restrict called with an empty care set")]
    EmptyCareSet,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, BddError>;

/// A decision variable. Its index is also its level in the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Handle to a function inside one manager family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    family: u32,
    node: u32,
}

impl Bdd {
    pub fn is_zero(self) -> bool {
        self.node == ZERO
    }

    pub fn is_one(self) -> bool {
        self.node == ONE
    }

    pub fn is_constant(self) -> bool {
        self.node <= ONE
    }

    /// Raw node id, stable for the lifetime of the manager.
    pub fn id(self) -> u32 {
        self.node
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

const ZERO: u32 = 0;
const ONE: u32 = 1;
const TERMINAL_LEVEL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

static NEXT_FAMILY: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Clone)]
pub struct BddManager {
    family: u32,
    names: Vec<String>,
    nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    ite_cache: FxHashMap<(u32, u32, u32), u32>,
}

impl Default for BddManager {
    fn default() -> Self {
        Self::new()
    }
}

impl BddManager {
    pub fn new() -> Self {
        let terminal = |v| Node { var: TERMINAL_LEVEL, lo: v, hi: v };
        BddManager {
            family: NEXT_FAMILY.fetch_add(1, Ordering::Relaxed),
            names: Vec::new(),
            nodes: vec![terminal(ZERO), terminal(ONE)],
            unique: FxHashMap::default(),
            ite_cache: FxHashMap::default(),
        }
    }

    pub fn with_vars<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut m = Self::new();
        for n in names {
            m.add_var(n)?;
        }
        Ok(m)
    }

    /// Registers a variable at the bottom of the current order.
    pub fn add_var(&mut self, name: impl Into<String>) -> Result<Var> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(BddError::DuplicateName(name));
        }
        self.names.push(name);
        Ok(Var(self.names.len() as u32 - 1))
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(|i| Var(i as u32))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.names.len() as u32).map(Var)
    }

    /// Total number of allocated nodes, terminals included.
    pub fn allocated_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn wrap(&self, node: u32) -> Bdd {
        Bdd { family: self.family, node }
    }

    fn check(&self, f: Bdd) -> Result<u32> {
        if f.family != self.family || f.node as usize >= self.nodes.len() {
            return Err(BddError::ForeignRef);
        }
        Ok(f.node)
    }

    fn check_var(&self, v: Var) -> Result<()> {
        if v.index() < self.names.len() {
            Ok(())
        } else {
            Err(BddError::UnknownVariable(v.0))
        }
    }

    pub fn zero(&self) -> Bdd {
        self.wrap(ZERO)
    }

    pub fn one(&self) -> Bdd {
        self.wrap(ONE)
    }

    pub fn constant(&self, value: bool) -> Bdd {
        self.wrap(if value { ONE } else { ZERO })
    }

    pub fn var(&mut self, v: Var) -> Result<Bdd> {
        self.literal(v, true)
    }

    pub fn literal(&mut self, v: Var, positive: bool) -> Result<Bdd> {
        self.check_var(v)?;
        let n = if positive { self.mk(v.0, ZERO, ONE) } else { self.mk(v.0, ONE, ZERO) };
        Ok(self.wrap(n))
    }

    /// Conjunction of literals.
    pub fn cube(&mut self, lits: &[(Var, bool)]) -> Result<Bdd> {
        let mut acc = self.one();
        for &(v, pos) in lits {
            let l = self.literal(v, pos)?;
            acc = self.and(acc, l)?;
        }
        Ok(acc)
    }

    fn level(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    /// Cofactors of `n` with respect to level `var`.
    fn split(&self, n: u32, var: u32) -> (u32, u32) {
        let node = self.nodes[n as usize];
        if node.var == var {
            (node.lo, node.hi)
        } else {
            (n, n)
        }
    }

    fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> u32 {
        if f == ONE {
            return g;
        }
        if f == ZERO {
            return h;
        }
        if g == h {
            return g;
        }
        if g == ONE && h == ZERO {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let top = self.level(f).min(self.level(g)).min(self.level(h));
        let (f0, f1) = self.split(f, top);
        let (g0, g1) = self.split(g, top);
        let (h0, h1) = self.split(h, top);
        let lo = self.ite_rec(f0, g0, h0);
        let hi = self.ite_rec(f1, g1, h1);
        let r = self.mk(top, lo, hi);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    /// If-then-else: the kernel every other connective is built from.
    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> Result<Bdd> {
        let (f, g, h) = (self.check(f)?, self.check(g)?, self.check(h)?);
        let r = self.ite_rec(f, g, h);
        Ok(self.wrap(r))
    }

    pub fn not(&mut self, f: Bdd) -> Result<Bdd> {
        let (z, o) = (self.zero(), self.one());
        self.ite(f, z, o)
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let z = self.zero();
        self.ite(f, g, z)
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let o = self.one();
        self.ite(f, o, g)
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let o = self.one();
        self.ite(f, g, o)
    }

    pub fn iff(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let ng = self.not(g)?;
        self.ite(f, g, ng)
    }

    pub fn xor(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let ng = self.not(g)?;
        self.ite(f, ng, g)
    }

    pub fn and_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> Result<Bdd> {
        let mut acc = self.one();
        for f in fs {
            acc = self.and(acc, f)?;
        }
        Ok(acc)
    }

    pub fn or_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> Result<Bdd> {
        let mut acc = self.zero();
        for f in fs {
            acc = self.or(acc, f)?;
        }
        Ok(acc)
    }

    /// True when `f` implies `g`.
    pub fn leq(&mut self, f: Bdd, g: Bdd) -> Result<bool> {
        Ok(self.implies(f, g)?.is_one())
    }

    fn var_mask(&self, vars: &[Var]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.names.len()];
        for &v in vars {
            self.check_var(v)?;
            mask[v.index()] = true;
        }
        Ok(mask)
    }

    pub fn quantify(&mut self, f: Bdd, vars: &[Var], mode: Quantifier) -> Result<Bdd> {
        match mode {
            Quantifier::Exists => self.exists(f, vars),
            Quantifier::Forall => self.forall(f, vars),
        }
    }

    pub fn exists(&mut self, f: Bdd, vars: &[Var]) -> Result<Bdd> {
        let n = self.check(f)?;
        let mask = self.var_mask(vars)?;
        let mut memo = FxHashMap::default();
        let r = self.exists_rec(n, &mask, &mut memo);
        Ok(self.wrap(r))
    }

    pub fn forall(&mut self, f: Bdd, vars: &[Var]) -> Result<Bdd> {
        let nf = self.not(f)?;
        let e = self.exists(nf, vars)?;
        self.not(e)
    }

    fn exists_rec(&mut self, n: u32, mask: &[bool], memo: &mut FxHashMap<u32, u32>) -> u32 {
        if n <= ONE {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[n as usize];
        let r = if mask[var as usize] {
            let l = self.exists_rec(lo, mask, memo);
            if l == ONE {
                ONE
            } else {
                let h = self.exists_rec(hi, mask, memo);
                self.ite_rec(l, ONE, h)
            }
        } else {
            let l = self.exists_rec(lo, mask, memo);
            let h = self.exists_rec(hi, mask, memo);
            self.mk(var, l, h)
        };
        memo.insert(n, r);
        r
    }

    /// `∃ vars . f ∧ g` without building the conjunction first.
    pub fn and_exists(&mut self, f: Bdd, g: Bdd, vars: &[Var]) -> Result<Bdd> {
        let (f, g) = (self.check(f)?, self.check(g)?);
        let mask = self.var_mask(vars)?;
        let mut memo = FxHashMap::default();
        let r = self.and_exists_rec(f, g, &mask, &mut memo);
        Ok(self.wrap(r))
    }

    fn and_exists_rec(&mut self, f: u32, g: u32, mask: &[bool], memo: &mut FxHashMap<(u32, u32), u32>) -> u32 {
        if f == ZERO || g == ZERO {
            return ZERO;
        }
        if f == ONE && g == ONE {
            return ONE;
        }
        let (f, g) = if f <= g { (f, g) } else { (g, f) };
        if let Some(&r) = memo.get(&(f, g)) {
            return r;
        }
        let top = self.level(f).min(self.level(g));
        let (f0, f1) = self.split(f, top);
        let (g0, g1) = self.split(g, top);
        let r = if mask[top as usize] {
            let l = self.and_exists_rec(f0, g0, mask, memo);
            if l == ONE {
                ONE
            } else {
                let h = self.and_exists_rec(f1, g1, mask, memo);
                self.ite_rec(l, ONE, h)
            }
        } else {
            let l = self.and_exists_rec(f0, g0, mask, memo);
            let h = self.and_exists_rec(f1, g1, mask, memo);
            self.mk(top, l, h)
        };
        memo.insert((f, g), r);
        r
    }

    /// Simultaneous substitution of functions for variables.
    pub fn compose(&mut self, f: Bdd, substitution: &[(Var, Bdd)]) -> Result<Bdd> {
        let n = self.check(f)?;
        let mut table: Vec<Option<u32>> = vec![None; self.names.len()];
        for &(v, g) in substitution {
            self.check_var(v)?;
            table[v.index()] = Some(self.check(g)?);
        }
        let mut memo = FxHashMap::default();
        let r = self.compose_rec(n, &table, &mut memo);
        Ok(self.wrap(r))
    }

    fn compose_rec(&mut self, n: u32, table: &[Option<u32>], memo: &mut FxHashMap<u32, u32>) -> u32 {
        if n <= ONE {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[n as usize];
        let l = self.compose_rec(lo, table, memo);
        let h = self.compose_rec(hi, table, memo);
        let r = match table[var as usize] {
            Some(g) => self.ite_rec(g, h, l),
            None => {
                let v = self.mk(var, ZERO, ONE);
                self.ite_rec(v, h, l)
            }
        };
        memo.insert(n, r);
        r
    }

    /// Shannon cofactor of `f` at `v = value`.
    pub fn cofactor(&mut self, f: Bdd, v: Var, value: bool) -> Result<Bdd> {
        let c = self.constant(value);
        self.compose(f, &[(v, c)])
    }

    /// Generalized cofactor (Coudert–Madre restrict): a function that agrees
    /// with `f` wherever `care` holds, usually with fewer nodes.
    pub fn restrict(&mut self, f: Bdd, care: Bdd) -> Result<Bdd> {
        let (f, c) = (self.check(f)?, self.check(care)?);
        if c == ZERO {
            return Err(BddError::EmptyCareSet);
        }
        let mut memo = FxHashMap::default();
        let r = self.restrict_rec(f, c, &mut memo);
        Ok(self.wrap(r))
    }

    fn restrict_rec(&mut self, f: u32, c: u32, memo: &mut FxHashMap<(u32, u32), u32>) -> u32 {
        debug_assert!(c != ZERO);
        if c == ONE || f <= ONE {
            return f;
        }
        if f == c {
            return ONE;
        }
        if let Some(&r) = memo.get(&(f, c)) {
            return r;
        }
        let (fl, cl) = (self.level(f), self.level(c));
        let r = if cl < fl {
            // f does not test the care set's top variable: drop it from c
            let Node { lo, hi, .. } = self.nodes[c as usize];
            let c2 = self.ite_rec(lo, ONE, hi);
            self.restrict_rec(f, c2, memo)
        } else {
            let (f0, f1) = self.split(f, fl);
            let (c0, c1) = self.split(c, fl);
            if c0 == ZERO {
                self.restrict_rec(f1, c1, memo)
            } else if c1 == ZERO {
                self.restrict_rec(f0, c0, memo)
            } else {
                let l = self.restrict_rec(f0, c0, memo);
                let h = self.restrict_rec(f1, c1, memo);
                self.mk(fl, l, h)
            }
        };
        memo.insert((f, c), r);
        r
    }

    /// Lexicographically least satisfying assignment, comparing bit strings
    /// in `over` order with 0 < 1. `None` iff `f` is unsatisfiable.
    pub fn least_assignment(&mut self, f: Bdd, over: &[Var]) -> Result<Option<Vec<bool>>> {
        self.check(f)?;
        if f.is_zero() {
            return Ok(None);
        }
        let mut cur = f;
        let mut out = Vec::with_capacity(over.len());
        for &v in over {
            let lo = self.cofactor(cur, v, false)?;
            if lo.is_zero() {
                cur = self.cofactor(cur, v, true)?;
                out.push(true);
            } else {
                cur = lo;
                out.push(false);
            }
        }
        Ok(Some(out))
    }

    /// Least satisfying assignment over all variables in manager order.
    /// Equivalent to [`BddManager::least_assignment`] with every variable
    /// listed in order, without touching the tables.
    pub fn least_model(&self, f: Bdd) -> Result<Option<Vec<bool>>> {
        let mut n = self.check(f)?;
        if n == ZERO {
            return Ok(None);
        }
        let mut out = vec![false; self.names.len()];
        while n > ONE {
            let node = self.nodes[n as usize];
            if node.lo != ZERO {
                n = node.lo;
            } else {
                out[node.var as usize] = true;
                n = node.hi;
            }
        }
        Ok(Some(out))
    }

    /// True if `f` is a valid handle into this manager.
    pub fn contains(&self, f: Bdd) -> bool {
        self.check(f).is_ok()
    }

    /// Evaluates `f` under `assignment`.
    pub fn eval(&self, f: Bdd, assignment: impl Fn(Var) -> bool) -> Result<bool> {
        let mut n = self.check(f)?;
        while n > ONE {
            let node = self.nodes[n as usize];
            n = if assignment(Var(node.var)) { node.hi } else { node.lo };
        }
        Ok(n == ONE)
    }

    /// Evaluates `f` with variable `i` read from bit `i` of `bits`
    /// (for managers with at most 64 variables).
    pub fn eval_bits(&self, f: Bdd, bits: u64) -> bool {
        let mut n = f.node;
        while n > ONE {
            let node = self.nodes[n as usize];
            n = if bits >> node.var & 1 == 1 { node.hi } else { node.lo };
        }
        n == ONE
    }

    /// Variables `f` depends on, in order.
    pub fn support(&self, f: Bdd) -> Result<Vec<Var>> {
        let n = self.check(f)?;
        let mut seen = vec![false; self.nodes.len()];
        let mut vars = vec![false; self.names.len()];
        let mut stack = vec![n];
        while let Some(n) = stack.pop() {
            if n <= ONE || seen[n as usize] {
                continue;
            }
            seen[n as usize] = true;
            let node = self.nodes[n as usize];
            vars[node.var as usize] = true;
            stack.push(node.lo);
            stack.push(node.hi);
        }
        Ok(vars.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| Var(i as u32)).collect())
    }

    /// Number of internal (non-terminal) nodes reachable from `f`.
    pub fn node_count(&self, f: Bdd) -> Result<usize> {
        let n = self.check(f)?;
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![n];
        while let Some(n) = stack.pop() {
            if n <= ONE || !seen.insert(n) {
                continue;
            }
            let node = self.nodes[n as usize];
            stack.push(node.lo);
            stack.push(node.hi);
        }
        Ok(seen.len())
    }

    /// Decomposes a non-terminal into `(var, lo, hi)`.
    pub fn node(&self, f: Bdd) -> Result<Option<(Var, Bdd, Bdd)>> {
        let n = self.check(f)?;
        if n <= ONE {
            return Ok(None);
        }
        let node = self.nodes[n as usize];
        Ok(Some((Var(node.var), self.wrap(node.lo), self.wrap(node.hi))))
    }

    /// Copies `f` out of `src`, renaming each variable through `map`.
    pub fn import(&mut self, src: &BddManager, f: Bdd, map: impl Fn(Var) -> Var) -> Result<Bdd> {
        let n = src.check(f)?;
        let mut memo = FxHashMap::default();
        let r = self.import_rec(src, n, &map, &mut memo)?;
        Ok(self.wrap(r))
    }

    fn import_rec(
        &mut self,
        src: &BddManager,
        n: u32,
        map: &dyn Fn(Var) -> Var,
        memo: &mut FxHashMap<u32, u32>,
    ) -> Result<u32> {
        if n <= ONE {
            return Ok(n);
        }
        if let Some(&r) = memo.get(&n) {
            return Ok(r);
        }
        let node = src.nodes[n as usize];
        let l = self.import_rec(src, node.lo, map, memo)?;
        let h = self.import_rec(src, node.hi, map, memo)?;
        let v = map(Var(node.var));
        self.check_var(v)?;
        let lit = self.mk(v.0, ZERO, ONE);
        let r = self.ite_rec(lit, h, l);
        memo.insert(n, r);
        Ok(r)
    }

    /// All root-to-one paths as cubes. Variables skipped on a path are
    /// absent from its cube; the cubes are pairwise disjoint.
    pub fn cubes(&self, f: Bdd) -> Result<Vec<Vec<(Var, bool)>>> {
        let n = self.check(f)?;
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.cubes_rec(n, &mut path, &mut out);
        Ok(out)
    }

    fn cubes_rec(&self, n: u32, path: &mut Vec<(Var, bool)>, out: &mut Vec<Vec<(Var, bool)>>) {
        if n == ZERO {
            return;
        }
        if n == ONE {
            out.push(path.clone());
            return;
        }
        let node = self.nodes[n as usize];
        path.push((Var(node.var), false));
        self.cubes_rec(node.lo, path, out);
        path.pop();
        path.push((Var(node.var), true));
        self.cubes_rec(node.hi, path, out);
        path.pop();
    }

    /// Nested `ite(v, hi, lo)` text with leaves `0` and `1`.
    pub fn to_ite_string(&self, f: Bdd) -> Result<String> {
        let n = self.check(f)?;
        let mut s = String::new();
        self.write_ite(n, &mut s);
        Ok(s)
    }

    fn write_ite(&self, n: u32, out: &mut String) {
        match n {
            ZERO => out.push('0'),
            ONE => out.push('1'),
            _ => {
                let node = self.nodes[n as usize];
                out.push_str("ite(");
                out.push_str(&self.names[node.var as usize]);
                out.push_str(", ");
                self.write_ite(node.hi, out);
                out.push_str(", ");
                self.write_ite(node.lo, out);
                out.push(')');
            }
        }
    }
}
