use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::{Automaton, Kind};
use crate::bdd::{Bdd, BddManager};
use crate::limits::Budget;
use crate::Result;

/// States of a determinized automaton, each a sorted set of source states.
pub type Subsets = Vec<Vec<usize>>;

impl Automaton {
    /// Subset construction over reachable subsets only. The empty subset is
    /// emitted as a rejecting sink when reachable, so the result is complete.
    pub fn determinize(&self) -> Result<Automaton> {
        Ok(self.determinize_within(&Budget::unlimited())?.0)
    }

    /// [`Automaton::determinize`] under a state cap and deadline, also
    /// returning the subset behind each new state.
    pub fn determinize_within(&self, budget: &Budget) -> Result<(Automaton, Subsets)> {
        let mut out = Automaton::new(Kind::Dfa, self.props.clone());
        out.mgr = self.mgr.clone();
        let mut subsets: Subsets = Vec::new();
        let mut index: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
        let mut queue = VecDeque::new();

        let init = self.initial.clone();
        let s0 = out.add_state(init.iter().any(|&s| self.accepting[s]));
        index.insert(init.clone(), s0);
        subsets.push(init);
        out.set_initial(vec![s0]);
        queue.push_back(s0);

        while let Some(cur) = queue.pop_front() {
            budget.check_time()?;
            let pieces = self.split_successors(&mut out.mgr, &subsets[cur])?;
            let mut ordered: Vec<(u64, Vec<usize>, Bdd)> = pieces
                .into_iter()
                .map(|(set, label)| {
                    let bits = out.mgr.least_model(label).expect("own manager").expect("nonzero piece");
                    (super::letter_from_bits(&bits), set, label)
                })
                .collect();
            ordered.sort_unstable_by_key(|p| p.0);
            for (_, set, label) in ordered {
                let target = match index.get(&set) {
                    Some(&t) => t,
                    None => {
                        budget.check_states(subsets.len() + 1)?;
                        let t = out.add_state(set.iter().any(|&s| self.accepting[s]));
                        index.insert(set.clone(), t);
                        subsets.push(set);
                        queue.push_back(t);
                        t
                    }
                };
                out.add_edge(cur, target, label)?;
            }
        }
        Ok((out, subsets))
    }

    /// Partitions the alphabet by successor set: every letter falls in
    /// exactly one returned piece, labeled by a nonzero function.
    fn split_successors(&self, mgr: &mut BddManager, set: &[usize]) -> Result<Vec<(Vec<usize>, Bdd)>> {
        let mut by_target: Vec<(usize, Bdd)> = Vec::new();
        for &s in set {
            for &(t, l) in &self.edges[s] {
                match by_target.binary_search_by_key(&t, |e| e.0) {
                    Ok(i) => by_target[i].1 = mgr.or(by_target[i].1, l)?,
                    Err(i) => by_target.insert(i, (t, l)),
                }
            }
        }
        let mut pieces: Vec<(Vec<usize>, Bdd)> = vec![(Vec::new(), mgr.one())];
        for (t, l) in by_target {
            let nl = mgr.not(l)?;
            let mut next = Vec::with_capacity(pieces.len() * 2);
            for (set, g) in pieces {
                let inside = mgr.and(g, l)?;
                let outside = mgr.and(g, nl)?;
                if !inside.is_zero() {
                    let mut s2 = set.clone();
                    s2.push(t);
                    next.push((s2, inside));
                }
                if !outside.is_zero() {
                    next.push((set, outside));
                }
            }
            pieces = next;
        }
        Ok(pieces)
    }
}
