use std::fmt;
use std::str::FromStr;

use super::SymbolicDfa;
use crate::bdd::{Bdd, Var};
use crate::limits::Budget;
use crate::{Error, Result};

/// How the reachable set is used to simplify `t` at each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prune {
    None,
    Conjunction,
    Restrict,
}

impl Prune {
    pub const ALL: [Prune; 3] = [Prune::None, Prune::Conjunction, Prune::Restrict];

    pub fn as_str(self) -> &'static str {
        match self {
            Prune::None => "none",
            Prune::Conjunction => "conj",
            Prune::Restrict => "restrict",
        }
    }
}

impl fmt::Display for Prune {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Prune {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Prune::None),
            "conj" => Ok(Prune::Conjunction),
            "restrict" => Ok(Prune::Restrict),
            _ => Err(Error::Invalid(format!("unknown prune mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GameResult {
    pub realizable: bool,
    /// Number of fixpoint steps, the last one being the step that repeated.
    pub iterations: usize,
    /// Winning states, over the state variables.
    pub w: Bdd,
    /// Winning state/output pairs, over state and output variables.
    pub t: Bdd,
    pub reachable: Option<Bdd>,
    /// `w_0, w_1, ...` up to and including the final iterate.
    pub w_history: Vec<Bdd>,
}

/// Backward fixpoint of the system-first reachability game:
/// `t' = t ∨ (¬w ∧ ∀X. w[z := δ_z])`, `w' = ∃Y. t'`, from `t = w = f`.
///
/// With pruning, `t'` is combined with `reachable` after every step and the
/// fixpoint test compares `w` only on reachable states.
pub fn solve_game(d: &mut SymbolicDfa, prune: Prune, reachable: Option<Bdd>, budget: &Budget) -> Result<GameResult> {
    let r = match (prune, reachable) {
        (Prune::None, r) => r,
        (_, Some(r)) => Some(r),
        (_, None) => return Err(Error::Invalid(format!("prune mode `{prune}` needs a reachable set"))),
    };
    if r.is_some_and(|r| r.is_zero()) {
        return Err(Error::Invalid("reachable set is empty".into()));
    }
    let subst: Vec<(Var, Bdd)> = d.state.iter().copied().zip(d.delta.iter().copied()).collect();
    let inputs = d.inputs.clone();
    let outputs = d.outputs.clone();
    let mgr = &mut d.mgr;
    let care = |mgr: &mut crate::bdd::BddManager, f: Bdd| -> Result<Bdd> {
        Ok(match (prune, r) {
            (Prune::Conjunction, Some(r)) => mgr.and(f, r)?,
            (Prune::Restrict, Some(r)) => mgr.restrict(f, r)?,
            _ => f,
        })
    };
    let on_reachable = |mgr: &mut crate::bdd::BddManager, f: Bdd| -> Result<Bdd> {
        Ok(match (prune, r) {
            (Prune::None, _) | (_, None) => f,
            (_, Some(r)) => mgr.and(f, r)?,
        })
    };

    let mut t = d.accept;
    let mut w = d.accept;
    let mut history = vec![w];
    let mut iterations = 0;
    loop {
        budget.check_time()?;
        iterations += 1;
        let moved = mgr.compose(w, &subst)?;
        let forced = mgr.forall(moved, &inputs)?;
        let not_w = mgr.not(w)?;
        let fresh = mgr.and(not_w, forced)?;
        let t_next = mgr.or(t, fresh)?;
        let t_next = care(mgr, t_next)?;
        let w_next = mgr.exists(t_next, &outputs)?;
        let done = on_reachable(mgr, w_next)? == on_reachable(mgr, w)?;
        t = t_next;
        w = w_next;
        history.push(w);
        if done {
            break;
        }
    }
    let vals = &d.init;
    let state = &d.state;
    let realizable = mgr.eval(w, |v| state.iter().position(|&z| z == v).is_some_and(|j| vals[j]))?;
    Ok(GameResult { realizable, iterations, w, t, reachable: r, w_history: history })
}
