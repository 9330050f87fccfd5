//! Semi-symbolic finite automata: explicit states, edges labeled by
//! decision diagrams over the propositions.
//!
//! Each automaton owns a [`BddManager`] whose variables are exactly its
//! propositions, in the same order, so bit `i` of a letter is variable `i`.
//! Edges between the same pair of states are merged by disjunction and
//! unsatisfiable labels are never stored.

mod determinize;
mod iso;
mod minimize;
mod text;

use std::collections::VecDeque;
use std::fmt;

use crate::bdd::{Bdd, BddManager, Var};
use crate::formula::{Expr, PropSet, Trace};
use crate::{Error, Result};

pub use determinize::Subsets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Nfa,
    Dfa,
    CoDfa,
    Wba,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Nfa => "nfa",
            Kind::Dfa => "dfa",
            Kind::CoDfa => "codfa",
            Kind::Wba => "wba",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct Automaton {
    kind: Kind,
    props: PropSet,
    mgr: BddManager,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    /// Outgoing edges per state, sorted by target.
    edges: Vec<Vec<(usize, Bdd)>>,
}

impl Automaton {
    pub fn new(kind: Kind, props: PropSet) -> Self {
        let mgr = BddManager::with_vars(props.iter()).expect("proposition names are unique");
        Automaton { kind, props, mgr, initial: Vec::new(), accepting: Vec::new(), edges: Vec::new() }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn set_kind(&mut self, kind: Kind) {
        self.kind = kind;
    }

    pub fn props(&self) -> &PropSet {
        &self.props
    }

    pub fn manager(&self) -> &BddManager {
        &self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut BddManager {
        &mut self.mgr
    }

    /// Variable of proposition number `i`.
    pub fn prop_var(&self, i: usize) -> Var {
        Var(i as u32)
    }

    pub fn prop_vars(&self) -> Vec<Var> {
        (0..self.props.len() as u32).map(Var).collect()
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn set_initial(&mut self, mut states: Vec<usize>) {
        states.sort_unstable();
        states.dedup();
        self.initial = states;
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn set_accepting(&mut self, s: usize, accepting: bool) {
        self.accepting[s] = accepting;
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&s| self.accepting[s]).collect()
    }

    pub fn edges(&self, s: usize) -> &[(usize, Bdd)] {
        &self.edges[s]
    }

    /// All edges as `(source, label, target)`.
    pub fn all_edges(&self) -> impl Iterator<Item = (usize, Bdd, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |&(t, l)| (s, l, t)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Adds `label` to the edge `src -> dst`, merging with an existing edge.
    pub fn add_edge(&mut self, src: usize, dst: usize, label: Bdd) -> Result<()> {
        if label.is_zero() {
            return Ok(());
        }
        if !self.mgr.contains(label) {
            return Err(crate::BddError::ForeignRef.into());
        }
        let out = &mut self.edges[src];
        match out.binary_search_by_key(&dst, |e| e.0) {
            Ok(i) => {
                let merged = self.mgr.or(out[i].1, label)?;
                self.edges[src][i].1 = merged;
            }
            Err(i) => out.insert(i, (dst, label)),
        }
        Ok(())
    }

    /// Builds a label from a propositional expression over the alphabet.
    pub fn label(&mut self, e: &Expr) -> Result<Bdd> {
        expr_to_bdd(&mut self.mgr, e)
    }

    pub fn label_text(&self, label: Bdd) -> String {
        label_text(&self.mgr, label)
    }

    /// Maps a trace onto this automaton's letters.
    pub fn letters(&self, trace: &Trace) -> Result<Vec<u64>> {
        let mut map = Vec::with_capacity(trace.props().len());
        for name in trace.props().iter() {
            match self.props.index_of(name) {
                Some(i) => map.push(i),
                None => return Err(Error::UnknownProposition(name.to_string())),
            }
        }
        Ok(trace
            .steps()
            .iter()
            .map(|&step| {
                map.iter()
                    .enumerate()
                    .filter(|(j, _)| step >> j & 1 == 1)
                    .fold(0u64, |acc, (_, &i)| acc | 1 << i)
            })
            .collect())
    }

    /// True iff some run over `trace` ends in an accepting state.
    pub fn run(&self, trace: &Trace) -> Result<bool> {
        Ok(self.accepts_letters(&self.letters(trace)?))
    }

    /// Like [`Automaton::run`] for letters already encoded over `props()`.
    pub fn accepts_letters(&self, letters: &[u64]) -> bool {
        let cur = self.states_after(letters);
        cur.iter().any(|&s| self.accepting[s])
    }

    /// Set of states reachable from the initial states on `letters`, sorted.
    pub fn states_after(&self, letters: &[u64]) -> Vec<usize> {
        let mut cur = self.initial.clone();
        for &letter in letters {
            cur = self.step(&cur, letter);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    pub fn step(&self, states: &[usize], letter: u64) -> Vec<usize> {
        let mut next: Vec<usize> = states
            .iter()
            .flat_map(|&s| self.edges[s].iter())
            .filter(|(_, l)| self.mgr.eval_bits(*l, letter))
            .map(|(t, _)| *t)
            .collect();
        next.sort_unstable();
        next.dedup();
        next
    }

    /// Checks that this is a complete deterministic automaton with one
    /// initial state.
    pub fn check_dfa(&self) -> Result<()> {
        if self.initial.len() != 1 {
            return Err(Error::NotDeterministic(self.initial.first().copied().unwrap_or(0)));
        }
        let mut mgr = self.mgr.clone();
        for s in 0..self.num_states() {
            let mut covered = mgr.zero();
            for &(_, l) in &self.edges[s] {
                if !mgr.and(covered, l)?.is_zero() {
                    return Err(Error::NotDeterministic(s));
                }
                covered = mgr.or(covered, l)?;
            }
            if !covered.is_one() {
                return Err(Error::Incomplete(s));
            }
        }
        Ok(())
    }

    /// Swaps initial and accepting states and flips every edge.
    pub fn reverse(&self) -> Automaton {
        let mut r = Automaton {
            kind: match self.kind {
                Kind::Dfa => Kind::CoDfa,
                Kind::Wba => Kind::Wba,
                _ => Kind::Nfa,
            },
            props: self.props.clone(),
            mgr: self.mgr.clone(),
            initial: self.accepting_states(),
            accepting: vec![false; self.num_states()],
            edges: vec![Vec::new(); self.num_states()],
        };
        for &s in &self.initial {
            r.accepting[s] = true;
        }
        for (s, l, t) in self.all_edges() {
            r.add_edge(t, s, l).expect("labels come from the shared manager");
        }
        r
    }

    /// Removes states unreachable from the initial states, keeping the
    /// relative order of the survivors.
    pub fn reachable_prune(&self) -> Automaton {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = self.initial.iter().copied().collect();
        for &s in &self.initial {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &(t, _) in &self.edges[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let mut order = Vec::new();
        let mut index = vec![usize::MAX; n];
        for s in 0..n {
            if seen[s] {
                index[s] = order.len();
                order.push(s);
            }
        }
        self.renumbered(&order, &index)
    }

    /// Keeps the states in `order` (old ids), renaming old `s` to `index[s]`.
    fn renumbered(&self, order: &[usize], index: &[usize]) -> Automaton {
        let mut a = Automaton {
            kind: self.kind,
            props: self.props.clone(),
            mgr: self.mgr.clone(),
            initial: Vec::new(),
            accepting: order.iter().map(|&s| self.accepting[s]).collect(),
            edges: vec![Vec::new(); order.len()],
        };
        a.set_initial(self.initial.iter().filter(|&&s| index[s] != usize::MAX).map(|&s| index[s]).collect());
        for (new, &old) in order.iter().enumerate() {
            let mut out: Vec<_> = self.edges[old]
                .iter()
                .filter(|(t, _)| index[*t] != usize::MAX)
                .map(|&(t, l)| (index[t], l))
                .collect();
            out.sort_unstable_by_key(|e| e.0);
            a.edges[new] = out;
        }
        a
    }

    /// Completes a deterministic automaton with at most one rejecting sink.
    pub fn complete_with_sink(&self) -> Result<Automaton> {
        if self.initial.len() > 1 {
            return Err(Error::NotDeterministic(self.initial[1]));
        }
        let mut a = self.clone();
        if a.initial.is_empty() {
            let s = a.add_state(false);
            a.initial = vec![s];
        }
        let mut sink = None;
        for s in 0..a.num_states() {
            let mut covered = a.mgr.zero();
            for i in 0..a.edges[s].len() {
                let l = a.edges[s][i].1;
                if !a.mgr.and(covered, l)?.is_zero() {
                    return Err(Error::NotDeterministic(s));
                }
                covered = a.mgr.or(covered, l)?;
            }
            let missing = a.mgr.not(covered)?;
            if !missing.is_zero() {
                let k = *sink.get_or_insert_with(|| {
                    let k = a.add_state(false);
                    let one = a.mgr.one();
                    a.edges[k].push((k, one));
                    k
                });
                a.add_edge(s, k, missing)?;
            }
        }
        a.kind = Kind::Dfa;
        Ok(a)
    }

    /// Least satisfying assignment of `label`, as a letter.
    pub(crate) fn least_letter(&self, label: Bdd) -> u64 {
        let bits = self
            .mgr
            .least_model(label)
            .expect("label belongs to this manager")
            .expect("stored labels are satisfiable");
        letter_from_bits(&bits)
    }

    /// Outgoing edges of `s` ordered by the least letter of their labels,
    /// ties broken by target.
    pub(crate) fn ordered_edges(&self, s: usize) -> Vec<(u64, usize, Bdd)> {
        let mut out: Vec<_> =
            self.edges[s].iter().map(|&(t, l)| (self.least_letter(l), t, l)).collect();
        out.sort_unstable_by_key(|e| (e.0, e.1));
        out
    }

    /// Renumbers states in breadth-first order from the initial states,
    /// visiting successors by the least letter of their labels. Unreachable
    /// states are dropped.
    pub fn canonical(&self) -> Automaton {
        let n = self.num_states();
        let mut index = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &s in &self.initial {
            index[s] = order.len();
            order.push(s);
            queue.push_back(s);
        }
        while let Some(s) = queue.pop_front() {
            for (_, t, _) in self.ordered_edges(s) {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        self.renumbered(&order, &index)
    }

    /// Re-expresses the automaton over a larger alphabet containing this one.
    pub fn with_alphabet(&self, props: &PropSet) -> Result<Automaton> {
        let mut map = Vec::with_capacity(self.props.len());
        for name in self.props.iter() {
            let i = props.index_of(name).ok_or_else(|| Error::UnknownProposition(name.to_string()))?;
            map.push(Var(i as u32));
        }
        let mut a = Automaton::new(self.kind, props.clone());
        for s in 0..self.num_states() {
            a.add_state(self.accepting[s]);
        }
        a.set_initial(self.initial.clone());
        for (s, l, t) in self.all_edges() {
            let l2 = a.mgr.import(&self.mgr, l, |v| map[v.index()])?;
            a.add_edge(s, t, l2)?;
        }
        Ok(a)
    }
}

pub(crate) fn letter_from_bits(bits: &[bool]) -> u64 {
    bits.iter().enumerate().filter(|(_, b)| **b).fold(0u64, |acc, (i, _)| acc | 1 << i)
}

/// Converts a propositional expression to a decision diagram, resolving
/// atoms by variable name.
pub fn expr_to_bdd(mgr: &mut BddManager, e: &Expr) -> Result<Bdd> {
    let sub = |m: &mut BddManager, a: &Expr| expr_to_bdd(m, a);
    Ok(match e {
        Expr::True => mgr.one(),
        Expr::False => mgr.zero(),
        Expr::Atom(a) => {
            let v = mgr.var_by_name(a).ok_or_else(|| Error::UnknownProposition(a.clone()))?;
            mgr.var(v)?
        }
        Expr::Not(a) => {
            let x = sub(mgr, a)?;
            mgr.not(x)?
        }
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) | Expr::Iff(a, b) => {
            let x = sub(mgr, a)?;
            let y = sub(mgr, b)?;
            match e {
                Expr::And(..) => mgr.and(x, y)?,
                Expr::Or(..) => mgr.or(x, y)?,
                Expr::Implies(..) => mgr.implies(x, y)?,
                _ => mgr.iff(x, y)?,
            }
        }
        _ => return Err(Error::Invalid(format!("temporal connective in edge label `{e}`"))),
    })
}

/// Disjunctive normal form text of a label, one cube per decision-diagram path.
pub fn label_text(mgr: &BddManager, label: Bdd) -> String {
    if label.is_one() {
        return "true".into();
    }
    if label.is_zero() {
        return "false".into();
    }
    let cubes = mgr.cubes(label).expect("label belongs to this manager");
    let wrap = cubes.len() > 1;
    cubes
        .iter()
        .map(|cube| {
            let lits: Vec<String> = cube
                .iter()
                .map(|&(v, pos)| {
                    let name = mgr.var_name(v);
                    if pos {
                        name.to_string()
                    } else {
                        format!("!{name}")
                    }
                })
                .collect();
            if wrap && lits.len() > 1 {
                format!("({})", lits.join(" & "))
            } else {
                lits.join(" & ")
            }
        })
        .collect::<Vec<_>>()
        .join(" | ")
}
