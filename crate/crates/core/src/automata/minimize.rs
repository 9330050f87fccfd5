use rustc_hash::FxHashMap;

use super::{Automaton, Kind};
use crate::bdd::Bdd;
use crate::limits::Budget;
use crate::Result;

impl Automaton {
    /// Minimal complete DFA for the same language, in canonical numbering.
    pub fn minimize(&self) -> Result<Automaton> {
        self.minimize_within(&Budget::unlimited())
    }

    /// Moore-style refinement: starting from accepting / rejecting, two
    /// states stay together while, for every block, the disjunctions of
    /// their labels into that block are the same function.
    pub fn minimize_within(&self, budget: &Budget) -> Result<Automaton> {
        self.check_dfa()?;
        let a = self.reachable_prune();
        let n = a.num_states();
        let mut mgr = a.mgr.clone();

        let mut block: Vec<usize> = {
            let first_acc = a.accepting[0];
            a.accepting.iter().map(|&acc| usize::from(acc != first_acc)).collect()
        };
        let mut count = block.iter().max().map_or(0, |m| m + 1);

        loop {
            budget.check_time()?;
            let mut ids: FxHashMap<(usize, Vec<(usize, u32)>), usize> = FxHashMap::default();
            let mut next = Vec::with_capacity(n);
            for s in 0..n {
                let mut sig: Vec<(usize, Bdd)> = Vec::new();
                for &(t, l) in &a.edges[s] {
                    let b = block[t];
                    match sig.binary_search_by_key(&b, |e| e.0) {
                        Ok(i) => sig[i].1 = mgr.or(sig[i].1, l)?,
                        Err(i) => sig.insert(i, (b, l)),
                    }
                }
                let key = (block[s], sig.into_iter().map(|(b, l)| (b, l.id())).collect());
                let fresh = ids.len();
                next.push(*ids.entry(key).or_insert(fresh));
            }
            let new_count = ids.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        let mut q = Automaton::new(Kind::Dfa, a.props.clone());
        q.mgr = mgr;
        let mut rep = vec![usize::MAX; count];
        for s in 0..n {
            if rep[block[s]] == usize::MAX {
                rep[block[s]] = s;
            }
        }
        for &r in &rep {
            q.add_state(a.accepting[r]);
        }
        q.set_initial(vec![block[a.initial[0]]]);
        for (b, &r) in rep.iter().enumerate() {
            for &(t, l) in &a.edges[r] {
                q.add_edge(b, block[t], l)?;
            }
        }
        Ok(q.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, DialectHint, PropSet};

    fn lbl(a: &mut Automaton, text: &str) -> Bdd {
        a.label(&parse_formula(text, DialectHint::Auto).unwrap().into_expr()).unwrap()
    }

    /// `F a` with the waiting state duplicated.
    fn redundant() -> Automaton {
        let mut a = Automaton::new(Kind::Dfa, PropSet::new(["a"]).unwrap());
        for acc in [false, false, true] {
            a.add_state(acc);
        }
        a.set_initial(vec![0]);
        let (x, nx, t) = (lbl(&mut a, "a"), lbl(&mut a, "!a"), lbl(&mut a, "true"));
        a.add_edge(0, 1, nx).unwrap();
        a.add_edge(0, 2, x).unwrap();
        a.add_edge(1, 0, nx).unwrap();
        a.add_edge(1, 2, x).unwrap();
        a.add_edge(2, 2, t).unwrap();
        a
    }

    #[test]
    fn merges_duplicate_state() {
        let m = redundant().minimize().unwrap();
        assert_eq!(m.num_states(), 2);
        m.check_dfa().unwrap();
        assert!(m.is_isomorphic(&m.minimize().unwrap()).unwrap());
    }

    #[test]
    fn rejects_partial_input() {
        let mut a = Automaton::new(Kind::Dfa, PropSet::new(["a"]).unwrap());
        a.add_state(true);
        a.set_initial(vec![0]);
        assert!(matches!(a.minimize(), Err(crate::Error::Incomplete(0))));
    }
}
