//! Formula to minimal DFA pipelines.

mod nfa;
mod past;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::automata::Automaton;
use crate::bdd::Bdd;
use crate::formula::{reverse_connectives, Formula, PropSet};
use crate::limits::Budget;
use crate::symbolic::{reachable_states_fixpoint, symbolic_determinize_reversed, Partition, SymbolicDfa};
use crate::{Error, Result};

pub use nfa::ltlf_to_nfa;
pub use past::{pltlf_to_dfa, temporal_nodes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pipeline {
    Hopcroft,
    BrzExplicit,
    BrzSymbolic,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [Pipeline::Hopcroft, Pipeline::BrzExplicit, Pipeline::BrzSymbolic];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Hopcroft => "hopcroft",
            Pipeline::BrzExplicit => "brz-explicit",
            Pipeline::BrzSymbolic => "brz-symbolic",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown pipeline `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    pub parse: Duration,
    pub front_end: Duration,
    pub determinize: Duration,
    pub minimize: Duration,
    pub symbolic_encode: Duration,
}

impl PhaseTimes {
    pub fn sum(&self) -> Duration {
        self.parse + self.front_end + self.determinize + self.minimize + self.symbolic_encode
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub pipeline: Pipeline,
    /// States of the minimal reverse DFA; 0 for the Hopcroft pipeline.
    pub revdfa_states: usize,
    /// Explicit DFA states, or state variables for the symbolic pipeline.
    pub dfa_states_or_statevars: usize,
    pub phases: PhaseTimes,
    pub total: Duration,
}

impl PipelineReport {
    fn new(pipeline: Pipeline) -> Self {
        PipelineReport {
            pipeline,
            revdfa_states: 0,
            dfa_states_or_statevars: 0,
            phases: PhaseTimes::default(),
            total: Duration::ZERO,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CompileOptions {
    /// Alphabet of the result; defaults to the formula's atoms, sorted.
    pub alphabet: Option<PropSet>,
    pub budget: Budget,
}

impl CompileOptions {
    fn alphabet_for(&self, f: &Formula) -> Result<PropSet> {
        match &self.alphabet {
            None => Ok(f.props()),
            Some(a) => {
                if let Some(p) = f.props().iter().find(|p| !a.contains(p)) {
                    return Err(Error::UnknownProposition(p.to_string()));
                }
                Ok(a.clone())
            }
        }
    }
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f();
    *slot += start.elapsed();
    out
}

/// NFA, subset construction, partition refinement.
pub fn pipeline_hopcroft(f: &Formula, opts: &CompileOptions) -> Result<(Automaton, PipelineReport)> {
    let start = Instant::now();
    let alphabet = opts.alphabet_for(f)?;
    let mut rep = PipelineReport::new(Pipeline::Hopcroft);
    let budget = &opts.budget;
    let nfa = timed(&mut rep.phases.front_end, || ltlf_to_nfa(f, &alphabet, budget))?;
    let dfa = timed(&mut rep.phases.determinize, || Ok(nfa.determinize_within(budget)?.0))?;
    let min = timed(&mut rep.phases.minimize, || dfa.minimize_within(budget))?;
    rep.dfa_states_or_statevars = min.num_states();
    rep.total = start.elapsed();
    Ok((min, rep))
}

/// Minimal DFA for the reverse language of `f`, built from the past
/// formula obtained by reversing every connective.
pub fn reverse_dfa(f: &Formula, opts: &CompileOptions, phases: &mut PhaseTimes) -> Result<Automaton> {
    let alphabet = opts.alphabet_for(f)?;
    let budget = &opts.budget;
    let past = reverse_connectives(f)?;
    let raw = timed(&mut phases.front_end, || pltlf_to_dfa(&past, &alphabet, budget))?;
    timed(&mut phases.minimize, || raw.minimize_within(budget))
}

/// Minimal reverse DFA, then reverse, determinize and prune.
pub fn pipeline_brzozowski_explicit(f: &Formula, opts: &CompileOptions) -> Result<(Automaton, PipelineReport)> {
    let start = Instant::now();
    let mut rep = PipelineReport::new(Pipeline::BrzExplicit);
    let rev = reverse_dfa(f, opts, &mut rep.phases)?;
    rep.revdfa_states = rev.num_states();
    let budget = &opts.budget;
    let dfa = timed(&mut rep.phases.determinize, || {
        let (d, _) = rev.reverse().determinize_within(budget)?;
        Ok(d.reachable_prune().complete_with_sink()?.canonical())
    })?;
    rep.dfa_states_or_statevars = dfa.num_states();
    rep.total = start.elapsed();
    Ok((dfa, rep))
}

/// Minimal reverse DFA, then the symbolic subset construction of its
/// reverse. Returns the symbolic DFA and its reachable state set.
pub fn pipeline_brzozowski_symbolic(
    f: &Formula,
    partition: &Partition,
    opts: &CompileOptions,
) -> Result<(SymbolicDfa, Bdd, PipelineReport)> {
    let start = Instant::now();
    let mut rep = PipelineReport::new(Pipeline::BrzSymbolic);
    let rev = reverse_dfa(f, opts, &mut rep.phases)?;
    rep.revdfa_states = rev.num_states();
    let (d, r) = timed(&mut rep.phases.symbolic_encode, || {
        let mut d = symbolic_determinize_reversed(&rev, partition)?;
        let r = reachable_states_fixpoint(&mut d, &opts.budget)?;
        Ok((d, r.set))
    })?;
    rep.dfa_states_or_statevars = d.num_state_vars();
    rep.total = start.elapsed();
    Ok((d, r, rep))
}
