//! Weak Büchi encoding of co-DFAs with a fresh `alive` proposition, and
//! the decoding of its subset construction back into a DFA.
//!
//! A co-DFA accepting `L` becomes a wBA accepting the infinite words
//! `(ρ ∧ alive) · (¬alive)^ω` for `ρ ∈ L`. Determinizing the wBA and
//! decoding it gives the same automaton as determinizing the co-DFA.

use crate::automata::{Automaton, Kind, Subsets};
use crate::bdd::{Bdd, Var};
use crate::formula::PropSet;
use crate::{Error, Result};

pub const ALIVE: &str = "alive";

#[derive(Debug, Clone)]
pub struct WeakBuchiAutomaton {
    automaton: Automaton,
    sink: usize,
}

impl WeakBuchiAutomaton {
    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn into_automaton(self) -> Automaton {
        self.automaton
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn alive(&self) -> Var {
        alive_var(&self.automaton)
    }
}

fn alive_var(a: &Automaton) -> Var {
    let i = a.props().index_of(ALIVE).expect("wBA alphabet contains alive");
    a.prop_var(i)
}

/// Encodes `c`: every edge label gains `∧ alive`, and each accepting state
/// moves on `¬alive` to a new accepting `sink` that loops on `¬alive`.
pub fn codfa_to_wba(c: &Automaton) -> Result<WeakBuchiAutomaton> {
    if c.kind() != Kind::CoDfa {
        return Err(Error::WrongKind { expected: "codfa", found: c.kind() });
    }
    if c.props().contains(ALIVE) {
        return Err(Error::Invalid(format!("alphabet already contains `{ALIVE}`")));
    }
    let props = PropSet::new(c.props().iter().chain([ALIVE]))?;
    let mut w = Automaton::new(Kind::Wba, props);
    for _ in 0..c.num_states() {
        w.add_state(false);
    }
    w.set_initial(c.initial().to_vec());
    let alive = alive_var(&w);
    let mgr = w.manager_mut();
    let on = mgr.var(alive)?;
    let off = mgr.not(on)?;

    let mut edges = Vec::with_capacity(c.edge_count());
    for (s, l, t) in c.all_edges() {
        let mgr = w.manager_mut();
        let l = mgr.import(c.manager(), l, |v| v)?;
        edges.push((s, mgr.and(l, on)?, t));
    }
    for (s, l, t) in edges {
        w.add_edge(s, t, l)?;
    }
    let sink = w.add_state(true);
    for s in c.accepting_states() {
        w.add_edge(s, sink, off)?;
    }
    w.add_edge(sink, sink, off)?;
    Ok(WeakBuchiAutomaton { automaton: w, sink })
}

/// Decodes the subset construction `d` of an encoded co-DFA: drops the
/// accepting state `{sink}`, sets `alive` to true on every edge, and makes
/// accepting the states that moved to `{sink}`. The result is pruned,
/// completed and put in canonical order. Without a reachable `{sink}` the
/// language is empty and nothing is accepting.
pub fn wdba_to_dfa(d: &Automaton) -> Result<Automaton> {
    if !d.props().contains(ALIVE) {
        return Err(Error::Invalid(format!("alphabet has no `{ALIVE}` proposition")));
    }
    let sink = sink_state(d)?;
    let alive = alive_var(d);
    let props = PropSet::new(d.props().iter().filter(|&p| p != ALIVE))?;
    let mut out = Automaton::new(Kind::Dfa, props);

    let mut index = vec![usize::MAX; d.num_states()];
    for s in (0..d.num_states()).filter(|&s| Some(s) != sink) {
        let accepting = d.edges(s).iter().any(|&(t, _)| Some(t) == sink);
        index[s] = out.add_state(accepting);
    }
    out.set_initial(d.initial().iter().filter(|&&s| Some(s) != sink).map(|&s| index[s]).collect());

    let mut mgr = d.manager().clone();
    for (s, l, t) in d.all_edges() {
        if Some(s) == sink || Some(t) == sink {
            continue;
        }
        let l = mgr.cofactor(l, alive, true)?;
        if l.is_zero() {
            continue;
        }
        let l = out.manager_mut().import(&mgr, l, |v| v)?;
        out.add_edge(index[s], index[t], l)?;
    }
    Ok(out.reachable_prune().complete_with_sink()?.canonical())
}

/// The unique accepting state of an encoded automaton, if reachable.
fn sink_state(d: &Automaton) -> Result<Option<usize>> {
    match d.accepting_states()[..] {
        [] => Ok(None),
        [s] => Ok(Some(s)),
        _ => Err(Error::Invalid("more than one accepting state".into())),
    }
}

/// Co-DFA to DFA through the wBA encoding.
pub fn round_trip(c: &Automaton) -> Result<Automaton> {
    let w = codfa_to_wba(c)?;
    let d = w.automaton().determinize()?;
    wdba_to_dfa(&d)
}

/// Checks that `w` is exactly the encoding of `c`.
pub fn validate_encoding(c: &Automaton, w: &WeakBuchiAutomaton) -> Result<()> {
    let fail = |m: String| Err(Error::Invalid(m));
    let a = &w.automaton;
    let sink = w.sink;
    if a.kind() != Kind::Wba {
        return fail(format!("kind is {}, not wba", a.kind()));
    }
    if a.num_states() != c.num_states() + 1 || sink != c.num_states() {
        return fail("expected exactly one extra state".into());
    }
    if a.initial() != c.initial() {
        return fail("initial states changed".into());
    }
    if a.accepting_states() != [sink] {
        return fail("sink must be the unique accepting state".into());
    }
    let mut mgr = a.manager().clone();
    let on = mgr.var(w.alive())?;
    let off = mgr.not(on)?;
    if a.edges(sink) != [(sink, off)] {
        return fail("sink must have exactly one edge, a self-loop on !alive".into());
    }
    for s in 0..c.num_states() {
        let mut expected: Vec<(usize, Bdd)> = Vec::new();
        for &(t, l) in c.edges(s) {
            let l = mgr.import(c.manager(), l, |v| v)?;
            expected.push((t, mgr.and(l, on)?));
        }
        if c.is_accepting(s) {
            expected.push((sink, off));
        }
        if a.edges(s) != expected.as_slice() {
            return fail(format!("edges of state {s} do not match the encoding"));
        }
    }
    Ok(())
}

/// Checks the shape of the subset construction of an encoding: `{sink}`
/// is the only subset containing `sink` (or none is, when no subset holds
/// an accepting co-DFA state), it is the only accepting state,
/// it loops on `¬alive` and its other moves reach only the empty subset,
/// and every edge into it is labeled `¬alive` and leaves a subset holding
/// an accepting co-DFA state.
pub fn validate_determinized(w: &WeakBuchiAutomaton, d: &Automaton, subsets: &Subsets) -> Result<()> {
    let fail = |m: &str| Err(Error::Invalid(m.into()));
    let sink = w.sink;
    let holds_accepting = |s: usize| {
        subsets[s].iter().any(|&q| q != sink && w.automaton.edges(q).iter().any(|&(t, _)| t == sink))
    };
    let holders: Vec<usize> = (0..subsets.len()).filter(|&i| subsets[i].contains(&sink)).collect();
    let k = match holders[..] {
        [k] => k,
        [] if (0..subsets.len()).any(holds_accepting) => return fail("{sink} unreachable from an accepting subset"),
        [] => return match sink_state(d)? {
            None => Ok(()),
            Some(_) => fail("accepting state without a reachable {sink}"),
        },
        _ => return fail("more than one subset contains sink"),
    };
    if subsets[k] != [sink] {
        return fail("the subset containing sink must be {sink}");
    }
    if sink_state(d)? != Some(k) {
        return fail("{sink} must be the unique accepting state");
    }
    let mut mgr = d.manager().clone();
    let on = mgr.var(alive_var(d))?;
    let off = mgr.not(on)?;
    let empty = subsets.iter().position(|s| s.is_empty());
    let loops = d.edges(k).contains(&(k, off));
    if !loops || !d.edges(k).iter().all(|&(t, _)| t == k || Some(t) == empty) {
        return fail("{sink} must loop on !alive and otherwise only reach the empty subset");
    }
    for s in 0..d.num_states() {
        let into = d.edges(s).iter().find(|&&(t, _)| t == k);
        match into {
            Some(&(_, l)) if s != k && (l != off || !holds_accepting(s)) => {
                return fail("edges into {sink} must be !alive from accepting subsets");
            }
            None if holds_accepting(s) => return fail("accepting subset without an edge to {sink}"),
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::{pipeline_brzozowski_explicit, reverse_dfa, CompileOptions, PhaseTimes};
    use crate::formula::Formula;

    fn codfa(text: &str) -> (Formula, Automaton) {
        let f = Formula::parse(text).unwrap();
        let rev = reverse_dfa(&f, &CompileOptions::default(), &mut PhaseTimes::default()).unwrap();
        (f, rev.reverse())
    }

    #[test]
    fn encoding_adds_one_state() {
        let (_, c) = codfa("F a");
        let w = codfa_to_wba(&c).unwrap();
        assert_eq!(w.automaton().num_states(), c.num_states() + 1);
        validate_encoding(&c, &w).unwrap();
    }

    #[test]
    fn eventually_round_trip() {
        let (f, c) = codfa("F a");
        let w = codfa_to_wba(&c).unwrap();
        let (d, subsets) = w.automaton().determinize_within(&crate::Budget::unlimited()).unwrap();
        validate_determinized(&w, &d, &subsets).unwrap();
        let back = wdba_to_dfa(&d).unwrap();
        let (direct, _) = pipeline_brzozowski_explicit(&f, &CompileOptions::default()).unwrap();
        assert!(back.is_isomorphic(&direct).unwrap());
    }

    #[test]
    fn unsatisfiable_round_trip() {
        let (f, c) = codfa("F (a & !a)");
        assert!(c.initial().is_empty());
        let w = codfa_to_wba(&c).unwrap();
        let (d, subsets) = w.automaton().determinize_within(&crate::Budget::unlimited()).unwrap();
        validate_determinized(&w, &d, &subsets).unwrap();
        let back = wdba_to_dfa(&d).unwrap();
        let (direct, _) = pipeline_brzozowski_explicit(&f, &CompileOptions::default()).unwrap();
        assert_eq!(back.num_states(), 1);
        assert!(back.is_isomorphic(&direct).unwrap());
    }

    #[test]
    fn rejects_alive_in_alphabet() {
        let (_, c) = codfa("F alive");
        assert!(codfa_to_wba(&c).is_err());
    }

    #[test]
    fn rejects_dfa_input() {
        let (_, c) = codfa("a");
        assert!(codfa_to_wba(&c.reverse()).is_err());
    }

    #[test]
    fn tampered_encoding_fails_validation() {
        let (_, c) = codfa("a U b");
        let mut w = codfa_to_wba(&c).unwrap();
        let s = w.automaton.add_state(false);
        w.automaton.set_initial(vec![s]);
        assert!(validate_encoding(&c, &w).is_err());
    }
}
