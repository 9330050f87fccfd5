use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::automata::{Automaton, Kind};
use crate::bdd::{Bdd, BddManager};
use crate::formula::{Expr, Formula, PropSet};
use crate::limits::Budget;
use crate::{Error, Result};

/// DFA for a past formula by tracking truth values. A state stores one bit
/// per temporal subformula plus the current value of the whole formula:
///
/// * `Y θ`, `Z θ`: the value of `θ` at the last position read,
/// * `S`, `T`, `O`, `H` nodes: their own value at the last position read.
///
/// State 0 is the initial state, before any letter.
pub fn pltlf_to_dfa(f: &Formula, alphabet: &PropSet, budget: &Budget) -> Result<Automaton> {
    f.require_past()?;
    if let Some(p) = f.expr().atoms().into_iter().find(|p| !alphabet.contains(p)) {
        return Err(Error::UnknownProposition(p));
    }
    let cells = temporal_nodes(f.expr());
    let slot: FxHashMap<&Expr, usize> = cells.iter().enumerate().map(|(i, e)| (*e, i)).collect();

    let mut a = Automaton::new(Kind::Dfa, alphabet.clone());
    let pre = a.add_state(false);
    a.set_initial(vec![pre]);
    let mut index: FxHashMap<Vec<bool>, usize> = FxHashMap::default();
    let mut memory: Vec<Option<Vec<bool>>> = vec![None];
    let mut queue = VecDeque::from([pre]);

    while let Some(s) = queue.pop_front() {
        budget.check_time()?;
        let prev = memory[s].clone();
        let mut ev = Evaluator { mgr: a.manager_mut(), slot: &slot, prev: prev.as_deref(), memo: FxHashMap::default() };
        let mut bits = Vec::with_capacity(cells.len() + 1);
        for e in &cells {
            let b = match e {
                Expr::Yesterday(x) | Expr::WeakYesterday(x) => ev.value(x)?,
                _ => ev.value(e)?,
            };
            bits.push(b);
        }
        bits.push(ev.value(f.expr())?);

        let mut pieces: Vec<(Vec<bool>, Bdd)> = vec![(Vec::new(), a.manager().one())];
        for &b in &bits {
            let mgr = a.manager_mut();
            let nb = mgr.not(b)?;
            let mut next = Vec::with_capacity(pieces.len() * 2);
            for (key, g) in pieces {
                let hi = mgr.and(g, b)?;
                let lo = mgr.and(g, nb)?;
                if !hi.is_zero() {
                    let mut k = key.clone();
                    k.push(true);
                    next.push((k, hi));
                }
                if !lo.is_zero() {
                    let mut k = key;
                    k.push(false);
                    next.push((k, lo));
                }
            }
            pieces = next;
        }
        for (key, label) in pieces {
            let t = match index.get(&key) {
                Some(&t) => t,
                None => {
                    budget.check_states(a.num_states() + 1)?;
                    let t = a.add_state(*key.last().expect("accept bit"));
                    index.insert(key.clone(), t);
                    memory.push(Some(key));
                    queue.push_back(t);
                    t
                }
            };
            a.add_edge(s, t, label)?;
        }
    }
    Ok(a)
}

/// Distinct temporal subformulas, children before parents.
pub fn temporal_nodes(e: &Expr) -> Vec<&Expr> {
    fn go<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
        for c in e.children() {
            go(c, out);
        }
        if e.is_past_connective() && !out.contains(&e) {
            out.push(e);
        }
    }
    let mut out = Vec::new();
    go(e, &mut out);
    out
}

/// Values at the current position as functions of the current letter,
/// given the bits stored for the previous position (`None` before the first).
struct Evaluator<'a> {
    mgr: &'a mut BddManager,
    slot: &'a FxHashMap<&'a Expr, usize>,
    prev: Option<&'a [bool]>,
    memo: FxHashMap<*const Expr, Bdd>,
}

impl Evaluator<'_> {
    /// Stored bit of a temporal node, or its value before the first position.
    fn cell(&self, e: &Expr) -> Bdd {
        let bit = match self.prev {
            Some(bits) => bits[self.slot[e]],
            None => matches!(e, Expr::WeakYesterday(_) | Expr::Trigger(..) | Expr::Historically(_)),
        };
        self.mgr.constant(bit)
    }

    fn value(&mut self, e: &Expr) -> Result<Bdd> {
        if let Some(&b) = self.memo.get(&(e as *const Expr)) {
            return Ok(b);
        }
        let b = match e {
            Expr::True => self.mgr.one(),
            Expr::False => self.mgr.zero(),
            Expr::Atom(p) => {
                let v = self.mgr.var_by_name(p).expect("atoms checked against the alphabet");
                self.mgr.var(v)?
            }
            Expr::Not(a) => {
                let x = self.value(a)?;
                self.mgr.not(x)?
            }
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) | Expr::Iff(a, b) => {
                let x = self.value(a)?;
                let y = self.value(b)?;
                match e {
                    Expr::And(..) => self.mgr.and(x, y)?,
                    Expr::Or(..) => self.mgr.or(x, y)?,
                    Expr::Implies(..) => self.mgr.implies(x, y)?,
                    _ => self.mgr.iff(x, y)?,
                }
            }
            Expr::Yesterday(_) | Expr::WeakYesterday(_) => self.cell(e),
            Expr::Since(a, b) => {
                let (x, y, c) = (self.value(a)?, self.value(b)?, self.cell(e));
                let keep = self.mgr.and(x, c)?;
                self.mgr.or(y, keep)?
            }
            Expr::Trigger(a, b) => {
                let (x, y, c) = (self.value(a)?, self.value(b)?, self.cell(e));
                let keep = self.mgr.or(x, c)?;
                self.mgr.and(y, keep)?
            }
            Expr::Once(a) => {
                let (x, c) = (self.value(a)?, self.cell(e));
                self.mgr.or(x, c)?
            }
            Expr::Historically(a) => {
                let (x, c) = (self.value(a)?, self.cell(e));
                self.mgr.and(x, c)?
            }
            _ => unreachable!("past formula checked on entry"),
        };
        self.memo.insert(e as *const Expr, b);
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{evaluate, Trace};

    fn agrees_up_to(text: &str, maxlen: usize) -> Automaton {
        let f = Formula::parse(text).unwrap();
        let props = f.props();
        let a = pltlf_to_dfa(&f, &props, &Budget::unlimited()).unwrap();
        a.check_dfa().unwrap();
        let letters = props.assignment_count();
        assert!(!a.accepts_letters(&[]));
        for len in 1..=maxlen {
            for code in 0..letters.pow(len as u32) {
                let steps: Vec<u64> = (0..len).map(|i| code / letters.pow(i as u32) % letters).collect();
                let t = Trace::new(props.clone(), steps);
                assert_eq!(a.run(&t).unwrap(), evaluate(&f, &t).unwrap(), "{f} on {t}");
            }
        }
        a
    }

    #[test]
    fn since() {
        let a = agrees_up_to("a S b", 4);
        let p = PropSet::new(["a", "b"]).unwrap();
        assert!(a.run(&Trace::from_names(&p, &[&["b"]]).unwrap()).unwrap());
        assert!(a.run(&Trace::from_names(&p, &[&["b"], &["a"]]).unwrap()).unwrap());
        assert!(!a.run(&Trace::from_names(&p, &[&["a"]]).unwrap()).unwrap());
    }

    #[test]
    fn past_connectives() {
        for text in ["Y a", "Z a", "a T b", "O a", "H a", "Y (a S b)", "H (a -> Y b)", "O (Y true & (a <-> O (a & Z false)))"] {
            agrees_up_to(text, 4);
        }
    }

    #[test]
    fn true_needs_two_states() {
        let f = Formula::new(Expr::True, crate::formula::Dialect::Past).unwrap();
        let a = pltlf_to_dfa(&f, &PropSet::new(["a"]).unwrap(), &Budget::unlimited()).unwrap();
        assert_eq!(a.minimize().unwrap().num_states(), 2);
    }

    #[test]
    fn rejects_future_formula() {
        let f = Formula::parse("F a").unwrap();
        assert!(pltlf_to_dfa(&f, &f.props(), &Budget::unlimited()).is_err());
    }
}
