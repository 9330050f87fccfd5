use std::collections::BTreeSet;

use crate::automata::Automaton;
use crate::formula::{evaluate, Formula, PropSet, Trace};
use crate::symbolic::Partition;
use crate::{Error, Result};

const MAX_ORACLE_PROPS: usize = 4;
const MAX_ORACLE_LEN: usize = 6;

/// Every trace of length `1..=maxlen` over `props` that satisfies `f`, by
/// direct evaluation. Letters are bitmasks over `props`.
pub fn oracle_language(f: &Formula, props: &PropSet, maxlen: usize) -> Result<BTreeSet<Vec<u64>>> {
    if props.len() > MAX_ORACLE_PROPS || maxlen > MAX_ORACLE_LEN {
        return Err(Error::Invalid(format!(
            "oracle limited to {MAX_ORACLE_PROPS} propositions and length {MAX_ORACLE_LEN}"
        )));
    }
    if let Some(p) = f.props().iter().find(|p| !props.contains(p)) {
        return Err(Error::UnknownProposition(p.to_string()));
    }
    let letters = props.assignment_count();
    let mut out = BTreeSet::new();
    let mut trace = Vec::with_capacity(maxlen);
    for len in 1..=maxlen {
        for code in 0..letters.pow(len as u32) {
            trace.clear();
            let mut c = code;
            for _ in 0..len {
                trace.push(c % letters);
                c /= letters;
            }
            if evaluate(f, &Trace::new(props.clone(), trace.clone()))? {
                out.insert(trace.clone());
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleGame {
    pub realizable: bool,
    /// Winning states at the fixpoint.
    pub winning: Vec<bool>,
    /// First round whose winning set contains the initial state.
    pub rounds_to_win: Option<usize>,
}

/// Explicit backward induction on a complete DFA: `W_0` is the accepting
/// set and `W_{i+1}` adds every state with an output choice that leads into
/// `W_i` for all inputs.
pub fn oracle_game(dfa: &Automaton, partition: &Partition) -> Result<OracleGame> {
    dfa.check_dfa()?;
    partition.check_covers(dfa.props())?;
    let bit_of = |names: &PropSet, word: u64| -> u64 {
        names
            .iter()
            .enumerate()
            .filter(|&(i, _)| word >> i & 1 == 1)
            .filter_map(|(_, p)| dfa.props().index_of(p))
            .fold(0, |acc, j| acc | 1 << j)
    };
    let (ins, outs) = (partition.inputs(), partition.outputs());
    let n = dfa.num_states();
    // succ[s][y][x]
    let succ: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|s| {
            (0..outs.assignment_count())
                .map(|y| {
                    (0..ins.assignment_count())
                        .map(|x| dfa.step(&[s], bit_of(ins, x) | bit_of(outs, y))[0])
                        .collect()
                })
                .collect()
        })
        .collect();

    let init = dfa.initial()[0];
    let mut w: Vec<bool> = (0..n).map(|s| dfa.is_accepting(s)).collect();
    let mut rounds_to_win = w[init].then_some(0);
    let mut round = 0;
    loop {
        round += 1;
        let next: Vec<bool> =
            (0..n).map(|s| w[s] || succ[s].iter().any(|row| row.iter().all(|&t| w[t]))).collect();
        if next == w {
            break;
        }
        w = next;
        if rounds_to_win.is_none() && w[init] {
            rounds_to_win = Some(round);
        }
    }
    Ok(OracleGame { realizable: w[init], winning: w, rounds_to_win })
}
