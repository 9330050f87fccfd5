use std::collections::VecDeque;

use super::Automaton;
use crate::bdd::{Bdd, BddManager, Var};
use crate::formula::PropSet;
use crate::Result;

impl Automaton {
    /// Structural isomorphism of two complete DFAs. Labels are compared as
    /// functions over the union of both alphabets, so DFAs over different
    /// propositions are isomorphic only if no label mentions a proposition
    /// the other side lacks.
    pub fn is_isomorphic(&self, other: &Automaton) -> Result<bool> {
        self.check_dfa()?;
        other.check_dfa()?;
        if self.num_states() != other.num_states() {
            return Ok(false);
        }
        let mut names: Vec<&str> = self.props.iter().collect();
        names.extend(other.props.iter().filter(|p| !self.props.contains(p)));
        let union = PropSet::new(names.iter().copied())?;
        let mut mgr = BddManager::with_vars(union.iter())?;
        let left = shared_edges(&mut mgr, &union, self)?;
        let right = shared_edges(&mut mgr, &union, other)?;

        let n = self.num_states();
        let (mut fwd, mut bwd) = (vec![usize::MAX; n], vec![usize::MAX; n]);
        let (a0, b0) = (self.initial[0], other.initial[0]);
        fwd[a0] = b0;
        bwd[b0] = a0;
        let mut queue = VecDeque::from([(a0, b0)]);
        while let Some((s, t)) = queue.pop_front() {
            if self.accepting[s] != other.accepting[t] || left[s].len() != right[t].len() {
                return Ok(false);
            }
            for (&(ls, ts), &(lt, tt)) in left[s].iter().zip(&right[t]) {
                if ls != lt {
                    return Ok(false);
                }
                match (fwd[ts], bwd[tt]) {
                    (usize::MAX, usize::MAX) => {
                        fwd[ts] = tt;
                        bwd[tt] = ts;
                        queue.push_back((ts, tt));
                    }
                    (x, y) if x == tt && y == ts => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }
}

/// Edges of `a` with labels moved into `mgr`, per state, ordered by the
/// least satisfying assignment of the label.
fn shared_edges(mgr: &mut BddManager, union: &PropSet, a: &Automaton) -> Result<Vec<Vec<(Bdd, usize)>>> {
    let map: Vec<Var> = a.props.iter().map(|p| Var(union.index_of(p).unwrap() as u32)).collect();
    let mut out = Vec::with_capacity(a.num_states());
    for s in 0..a.num_states() {
        let mut edges = Vec::with_capacity(a.edges[s].len());
        for &(t, l) in &a.edges[s] {
            let l2 = mgr.import(&a.mgr, l, |v| map[v.index()])?;
            let key = mgr.least_model(l2)?.expect("stored labels are satisfiable");
            edges.push((key, l2, t));
        }
        edges.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        out.push(edges.into_iter().map(|(_, l, t)| (l, t)).collect());
    }
    Ok(out)
}
