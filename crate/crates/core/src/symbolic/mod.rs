//! Fully symbolic DFAs: states are assignments to state variables and the
//! transition relation is one decision diagram per state variable.
//!
//! Variable order in every manager: `z0 z0' z1 z1' ...`, then inputs, then
//! outputs. Letters are `u64` bitmasks over [`Partition::props`], inputs
//! first.

mod game;
mod strategy;

use crate::automata::Automaton;
use crate::bdd::{Bdd, BddManager, Var};
use crate::formula::{PropSet, Trace};
use crate::limits::Budget;
use crate::{Error, Result};

pub use game::{solve_game, GameResult, Prune};
pub use strategy::{extract_strategy, run_strategy, Play, Strategy};

/// Split of the propositions into environment inputs and system outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    inputs: PropSet,
    outputs: PropSet,
}

impl Partition {
    pub fn new(inputs: PropSet, outputs: PropSet) -> Result<Self> {
        if let Some(p) = inputs.iter().find(|p| outputs.contains(p)) {
            return Err(Error::Partition(format!("`{p}` is both an input and an output")));
        }
        PropSet::new(inputs.iter().chain(outputs.iter()))?;
        Ok(Partition { inputs, outputs })
    }

    pub fn from_names(inputs: &[&str], outputs: &[&str]) -> Result<Self> {
        Self::new(PropSet::new(inputs.iter().copied())?, PropSet::new(outputs.iter().copied())?)
    }

    /// First `⌊n/2⌋` propositions as inputs, the rest as outputs.
    pub fn split_half(props: &PropSet) -> Self {
        let k = props.len() / 2;
        let names = props.names();
        Partition {
            inputs: PropSet::new(names[..k].iter().cloned()).expect("subset of a valid set"),
            outputs: PropSet::new(names[k..].iter().cloned()).expect("subset of a valid set"),
        }
    }

    pub fn inputs(&self) -> &PropSet {
        &self.inputs
    }

    pub fn outputs(&self) -> &PropSet {
        &self.outputs
    }

    /// Inputs followed by outputs.
    pub fn props(&self) -> PropSet {
        PropSet::new(self.inputs.iter().chain(self.outputs.iter())).expect("checked on construction")
    }

    /// Errors unless every proposition of `props` is an input or an output.
    pub fn check_covers(&self, props: &PropSet) -> Result<()> {
        match props.iter().find(|p| !self.inputs.contains(p) && !self.outputs.contains(p)) {
            Some(p) => Err(Error::Partition(format!("`{p}` is neither an input nor an output"))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymbolicDfa {
    mgr: BddManager,
    partition: Partition,
    state_names: Vec<String>,
    state: Vec<Var>,
    primed: Vec<Var>,
    inputs: Vec<Var>,
    outputs: Vec<Var>,
    init: Vec<bool>,
    delta: Vec<Bdd>,
    accept: Bdd,
}

impl SymbolicDfa {
    /// Registers variables for `count` state bits with names that avoid
    /// every proposition.
    fn skeleton(partition: &Partition, count: usize) -> Result<Self> {
        let props = partition.props();
        let mut prefix = String::from("_z");
        while props.iter().any(|p| p.starts_with(&prefix)) {
            prefix.insert(0, '_');
        }
        let names = (0..count).map(|i| format!("{prefix}{i}")).collect();
        Self::with_state_names(partition, names)
    }

    pub(crate) fn with_state_names(partition: &Partition, state_names: Vec<String>) -> Result<Self> {
        let mut mgr = BddManager::new();
        let mut state = Vec::new();
        let mut primed = Vec::new();
        for name in &state_names {
            state.push(mgr.add_var(name.clone())?);
            primed.push(mgr.add_var(format!("{name}'"))?);
        }
        let mut inputs = Vec::new();
        for p in partition.inputs.iter() {
            inputs.push(mgr.add_var(p)?);
        }
        let mut outputs = Vec::new();
        for p in partition.outputs.iter() {
            outputs.push(mgr.add_var(p)?);
        }
        let accept = mgr.zero();
        let n = state_names.len();
        Ok(SymbolicDfa {
            delta: state.iter().map(|_| mgr.zero()).collect(),
            mgr,
            partition: partition.clone(),
            state_names,
            state,
            primed,
            inputs,
            outputs,
            init: vec![false; n],
            accept,
        })
    }

    pub fn manager(&self) -> &BddManager {
        &self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut BddManager {
        &mut self.mgr
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_state_vars(&self) -> usize {
        self.state.len()
    }

    pub fn state_vars(&self) -> &[Var] {
        &self.state
    }

    pub fn primed_vars(&self) -> &[Var] {
        &self.primed
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn input_vars(&self) -> &[Var] {
        &self.inputs
    }

    pub fn output_vars(&self) -> &[Var] {
        &self.outputs
    }

    pub fn init(&self) -> &[bool] {
        &self.init
    }

    pub fn delta(&self) -> &[Bdd] {
        &self.delta
    }

    pub fn accept(&self) -> Bdd {
        self.accept
    }

    /// Characteristic function of the initial assignment.
    pub fn init_cube(&mut self) -> Result<Bdd> {
        let lits: Vec<(Var, bool)> = self.state.iter().copied().zip(self.init.iter().copied()).collect();
        Ok(self.mgr.cube(&lits)?)
    }

    /// Maps each proposition of `props` to its variable here.
    fn prop_map(&self, props: &PropSet) -> Result<Vec<Var>> {
        self.partition.check_covers(props)?;
        Ok(props
            .iter()
            .map(|p| self.mgr.var_by_name(p).expect("partition props are registered"))
            .collect())
    }

    fn assignment(&self, state: &[bool], letter: u64) -> Vec<bool> {
        let mut vals = vec![false; self.mgr.var_count()];
        for (v, &b) in self.state.iter().zip(state) {
            vals[v.index()] = b;
        }
        for (i, v) in self.inputs.iter().chain(&self.outputs).enumerate() {
            vals[v.index()] = letter >> i & 1 == 1;
        }
        vals
    }

    /// Evaluates a function over state and proposition variables.
    pub fn eval(&self, f: Bdd, state: &[bool], letter: u64) -> bool {
        let vals = self.assignment(state, letter);
        self.mgr.eval(f, |v| vals[v.index()]).expect("function belongs to this manager")
    }

    pub fn step(&self, state: &[bool], letter: u64) -> Vec<bool> {
        let vals = self.assignment(state, letter);
        self.delta
            .iter()
            .map(|&d| self.mgr.eval(d, |v| vals[v.index()]).expect("own manager"))
            .collect()
    }

    pub fn is_accepting(&self, state: &[bool]) -> bool {
        self.eval(self.accept, state, 0)
    }

    /// State assignment reached from the initial one on `letters`.
    pub fn state_after(&self, letters: &[u64]) -> Vec<bool> {
        letters.iter().fold(self.init.clone(), |s, &l| self.step(&s, l))
    }

    pub fn accepts_letters(&self, letters: &[u64]) -> bool {
        self.is_accepting(&self.state_after(letters))
    }

    /// Re-encodes a trace over [`Partition::props`].
    pub fn letters(&self, trace: &Trace) -> Result<Vec<u64>> {
        let all = self.partition.props();
        let map: Vec<usize> = {
            self.partition.check_covers(trace.props())?;
            trace.props().iter().map(|p| all.index_of(p).unwrap()).collect()
        };
        Ok(trace
            .steps()
            .iter()
            .map(|&s| map.iter().enumerate().filter(|(j, _)| s >> j & 1 == 1).fold(0, |acc, (_, &i)| acc | 1 << i))
            .collect())
    }

    pub fn run(&self, trace: &Trace) -> Result<bool> {
        Ok(self.accepts_letters(&self.letters(trace)?))
    }
}

/// Binary encoding of a complete DFA over `⌈log2 |S|⌉` state variables.
/// Bit `j` of a state index is variable `z_j`; unused codes loop on
/// themselves and reject.
pub fn encode_explicit_dfa(a: &Automaton, partition: &Partition) -> Result<SymbolicDfa> {
    a.check_dfa()?;
    let n = a.num_states();
    let bits = if n <= 1 { 0 } else { (usize::BITS - (n - 1).leading_zeros()) as usize };
    let mut d = SymbolicDfa::skeleton(partition, bits)?;
    let map = d.prop_map(a.props())?;
    let codes = (0..1usize << bits)
        .map(|c| {
            let lits: Vec<(Var, bool)> = (0..bits).map(|j| (d.state[j], c >> j & 1 == 1)).collect();
            d.mgr.cube(&lits)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for (s, l, t) in a.all_edges() {
        let label = d.mgr.import(a.manager(), l, |v| map[v.index()])?;
        let step = d.mgr.and(codes[s], label)?;
        for j in 0..bits {
            if t >> j & 1 == 1 {
                d.delta[j] = d.mgr.or(d.delta[j], step)?;
            }
        }
    }
    for (c, &code) in codes.iter().enumerate().skip(n) {
        for j in 0..bits {
            if c >> j & 1 == 1 {
                d.delta[j] = d.mgr.or(d.delta[j], code)?;
            }
        }
    }
    let acc: Vec<Bdd> = a.accepting_states().into_iter().map(|s| codes[s]).collect();
    d.accept = d.mgr.or_all(acc)?;
    let s0 = a.initial()[0];
    d.init = (0..bits).map(|j| s0 >> j & 1 == 1).collect();
    Ok(d)
}

/// Subset construction of the reverse of `a`, done symbolically: one state
/// variable per state of `a`, `δ_s = ⋁ (t ∧ λ)` over the edges `s -λ-> t`
/// of `a`, initial assignment = accepting states of `a`, accepting
/// function = disjunction of the initial states of `a`.
pub fn symbolic_determinize_reversed(a: &Automaton, partition: &Partition) -> Result<SymbolicDfa> {
    let mut d = SymbolicDfa::skeleton(partition, a.num_states())?;
    let map = d.prop_map(a.props())?;
    for (s, l, t) in a.all_edges() {
        let label = d.mgr.import(a.manager(), l, |v| map[v.index()])?;
        let zt = d.mgr.var(d.state[t])?;
        let term = d.mgr.and(zt, label)?;
        d.delta[s] = d.mgr.or(d.delta[s], term)?;
    }
    d.init = (0..a.num_states()).map(|s| a.is_accepting(s)).collect();
    let mut acc = d.mgr.zero();
    for &s in a.initial() {
        let z = d.mgr.var(d.state[s])?;
        acc = d.mgr.or(acc, z)?;
    }
    d.accept = acc;
    Ok(d)
}

/// Least fixpoint of the image operator from the initial assignment.
#[derive(Debug, Clone, Copy)]
pub struct Reachable {
    pub set: Bdd,
    pub iterations: usize,
}

pub fn reachable_states_fixpoint(d: &mut SymbolicDfa, budget: &Budget) -> Result<Reachable> {
    let mgr = &mut d.mgr;
    let mut relation = mgr.one();
    for (j, &dj) in d.delta.iter().enumerate() {
        let zp = mgr.var(d.primed[j])?;
        let eq = mgr.iff(zp, dj)?;
        relation = mgr.and(relation, eq)?;
    }
    let mut quantified: Vec<Var> = d.state.clone();
    quantified.extend(&d.inputs);
    quantified.extend(&d.outputs);
    let mut rename = Vec::with_capacity(d.state.len());
    for (&z, &zp) in d.state.iter().zip(&d.primed) {
        rename.push((zp, mgr.var(z)?));
    }
    let lits: Vec<(Var, bool)> = d.state.iter().copied().zip(d.init.iter().copied()).collect();
    let mut r = mgr.cube(&lits)?;
    let mut iterations = 0;
    loop {
        budget.check_time()?;
        iterations += 1;
        let image = mgr.and_exists(r, relation, &quantified)?;
        let image = mgr.compose(image, &rename)?;
        let next = mgr.or(r, image)?;
        if next == r {
            break;
        }
        r = next;
    }
    Ok(Reachable { set: r, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Kind;
    use crate::formula::{parse_formula, DialectHint};

    /// Reverse DFA s0 -a-> s1, s0 -!a-> s0, s1 -true-> s1.
    fn reverse_example() -> Automaton {
        let mut a = Automaton::new(Kind::Dfa, PropSet::new(["a"]).unwrap());
        a.add_state(false);
        a.add_state(true);
        a.set_initial(vec![0]);
        let x = a.label(&parse_formula("a", DialectHint::Auto).unwrap().into_expr()).unwrap();
        let nx = a.manager_mut().not(x).unwrap();
        let one = a.manager().one();
        a.add_edge(0, 1, x).unwrap();
        a.add_edge(0, 0, nx).unwrap();
        a.add_edge(1, 1, one).unwrap();
        a
    }

    #[test]
    fn fused_reversal_formula() {
        let p = Partition::from_names(&["a"], &[]).unwrap();
        let mut d = symbolic_determinize_reversed(&reverse_example(), &p).unwrap();
        assert_eq!(d.init(), &[false, true]);
        let z0 = d.state_vars()[0];
        let z1 = d.state_vars()[1];
        let a = d.manager().var_by_name("a").unwrap();
        let m = d.manager_mut();
        let (bz0, bz1, ba) = (m.var(z0).unwrap(), m.var(z1).unwrap(), m.var(a).unwrap());
        assert_eq!(d.accept(), bz0);
        let m = d.manager_mut();
        let na = m.not(ba).unwrap();
        let t1 = m.and(bz1, ba).unwrap();
        let t2 = m.and(bz0, na).unwrap();
        let expect = m.or(t1, t2).unwrap();
        assert_eq!(d.delta()[0], expect);
        assert_eq!(d.delta()[1], bz1);
    }

    #[test]
    fn encoding_width() {
        let p = Partition::from_names(&["a"], &[]).unwrap();
        let d = encode_explicit_dfa(&reverse_example(), &p).unwrap();
        assert_eq!(d.num_state_vars(), 1);
        let mut three = reverse_example();
        three.add_state(false);
        let one = three.manager().one();
        three.add_edge(2, 2, one).unwrap();
        assert_eq!(encode_explicit_dfa(&three, &p).unwrap().num_state_vars(), 2);
        let mut single = Automaton::new(Kind::Dfa, PropSet::new(["a"]).unwrap());
        single.add_state(false);
        single.set_initial(vec![0]);
        let one = single.manager().one();
        single.add_edge(0, 0, one).unwrap();
        let d = encode_explicit_dfa(&single, &p).unwrap();
        assert_eq!(d.num_state_vars(), 0);
        assert!(d.accept().is_zero());
    }

    #[test]
    fn identity_transitions_reach_only_init() {
        let p = Partition::from_names(&["a"], &[]).unwrap();
        let mut d = SymbolicDfa::skeleton(&p, 2).unwrap();
        for j in 0..2 {
            d.delta[j] = d.mgr.var(d.state[j]).unwrap();
        }
        d.init = vec![true, false];
        let r = reachable_states_fixpoint(&mut d, &Budget::unlimited()).unwrap();
        assert_eq!(r.set, d.init_cube().unwrap());
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn state_names_avoid_props() {
        let p = Partition::from_names(&["_z0"], &["y"]).unwrap();
        let d = SymbolicDfa::skeleton(&p, 1).unwrap();
        assert_eq!(d.state_names(), &["__z0".to_string()]);
    }
}
