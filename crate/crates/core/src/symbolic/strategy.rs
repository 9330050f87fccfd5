use std::fmt::Write as _;

use super::{GameResult, Partition, SymbolicDfa};
use crate::bdd::{parse_ite, Bdd, Var};
use crate::formula::PropSet;
use crate::{Error, Result};

/// A controller: one output function per output variable, over the state
/// variables of its symbolic DFA.
#[derive(Debug, Clone)]
pub struct Strategy {
    dfa: SymbolicDfa,
    outputs: Vec<Bdd>,
}

/// Outcome of playing a strategy against a fixed input sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    /// Letters over [`Partition::props`], one per step taken.
    pub trace: Vec<u64>,
    /// Length of the trace at the first accepting state, if any.
    pub accepted_len: Option<usize>,
}

impl Play {
    /// Index of the step after which the play was accepted.
    pub fn accepted_at(&self) -> Option<usize> {
        self.accepted_len.map(|n| n.saturating_sub(1))
    }
}

/// Lexicographically least winning output per state: output variables are
/// fixed in order, each to 0 whenever some completion of the remaining
/// outputs stays inside `t`.
pub fn extract_strategy(d: &SymbolicDfa, g: &GameResult) -> Result<Strategy> {
    if !g.realizable {
        return Err(Error::Unrealizable);
    }
    let mut dfa = d.clone();
    let outs = dfa.outputs.clone();
    let mgr = &mut dfa.mgr;
    let mut cur = g.t;
    let mut functions = Vec::with_capacity(outs.len());
    for (j, &y) in outs.iter().enumerate() {
        let rest = &outs[j + 1..];
        let c0 = mgr.cofactor(cur, y, false)?;
        let c1 = mgr.cofactor(cur, y, true)?;
        let e0 = mgr.exists(c0, rest)?;
        let e1 = mgr.exists(c1, rest)?;
        let ne0 = mgr.not(e0)?;
        let out = mgr.and(ne0, e1)?;
        cur = mgr.ite(out, c1, c0)?;
        functions.push(out);
    }
    Ok(Strategy { dfa, outputs: functions })
}

/// Plays `s` from the initial state. At each step the strategy commits its
/// outputs, then the next input (a bitmask over the input propositions) is
/// read. Stops at the first accepting state.
pub fn run_strategy(s: &Strategy, inputs: &[u64]) -> Result<Play> {
    let n_in = s.dfa.inputs.len();
    let mask = if n_in >= 64 { u64::MAX } else { (1u64 << n_in) - 1 };
    if let Some(bad) = inputs.iter().find(|&&x| x & !mask != 0) {
        return Err(Error::Invalid(format!("input assignment {bad:#b} sets a non-input proposition")));
    }
    let mut state = s.dfa.init.clone();
    let mut trace = Vec::new();
    for k in 0..=inputs.len() {
        if s.dfa.is_accepting(&state) {
            return Ok(Play { trace, accepted_len: Some(k) });
        }
        if k == inputs.len() {
            break;
        }
        let letter = inputs[k] | s.output_bits(&state) << n_in;
        state = s.dfa.step(&state, letter);
        trace.push(letter);
    }
    Ok(Play { trace, accepted_len: None })
}

impl Strategy {
    pub fn dfa(&self) -> &SymbolicDfa {
        &self.dfa
    }

    pub fn output_functions(&self) -> &[Bdd] {
        &self.outputs
    }

    /// Outputs chosen at `state`, as a bitmask over the output propositions.
    pub fn output_bits(&self, state: &[bool]) -> u64 {
        self.outputs
            .iter()
            .enumerate()
            .filter(|(_, &f)| self.dfa.eval(f, state, 0))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Encodes named true inputs as a bitmask over the input propositions.
    pub fn input_bits<S: AsRef<str>>(&self, names: &[S]) -> Result<u64> {
        let inputs = self.dfa.partition.inputs();
        names.iter().try_fold(0u64, |acc, n| {
            let i = inputs
                .index_of(n.as_ref())
                .ok_or_else(|| Error::Invalid(format!("`{}` is not an input proposition", n.as_ref())))?;
            Ok(acc | 1 << i)
        })
    }

    pub fn to_text(&self) -> String {
        let d = &self.dfa;
        let ite = |f: Bdd| d.mgr.to_ite_string(f).expect("own manager");
        let mut s = String::from("strategy\n");
        writeln!(s, "inputs: {}", d.partition.inputs()).unwrap();
        writeln!(s, "outputs: {}", d.partition.outputs()).unwrap();
        writeln!(s, "statevars: {}", d.state_names.join(" ")).unwrap();
        let init: String = d.init.iter().map(|&b| if b { '1' } else { '0' }).collect();
        writeln!(s, "init: {init}").unwrap();
        for (name, &f) in d.state_names.iter().zip(&d.delta) {
            writeln!(s, "delta {name}: {}", ite(f)).unwrap();
        }
        for (name, &f) in d.partition.outputs().iter().zip(&self.outputs) {
            writeln!(s, "out {name}: {}", ite(f)).unwrap();
        }
        writeln!(s, "accept: {}", ite(d.accept)).unwrap();
        s
    }

    pub fn from_text(text: &str) -> Result<Strategy> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |key: &str| -> Result<(usize, String)> {
            let (i, line) = lines.next().ok_or_else(|| Error::Parse { line: 0, message: format!("missing `{key}`") })?;
            let line = line.trim();
            let rest = line
                .strip_prefix(key)
                .ok_or_else(|| Error::Parse { line: i + 1, message: format!("expected `{key}`") })?;
            Ok((i + 1, rest.trim().to_string()))
        };
        next("strategy")?;
        let (_, inputs) = next("inputs:")?;
        let (_, outputs) = next("outputs:")?;
        let (_, statevars) = next("statevars:")?;
        let (init_line, init) = next("init:")?;
        let partition = Partition::new(
            PropSet::new(inputs.split_whitespace())?,
            PropSet::new(outputs.split_whitespace())?,
        )?;
        let names: Vec<String> = statevars.split_whitespace().map(str::to_string).collect();
        let mut dfa = SymbolicDfa::with_state_names(&partition, names.clone())?;
        if init.len() != names.len() || init.chars().any(|c| c != '0' && c != '1') {
            return Err(Error::Parse { line: init_line, message: "init must be one bit per state variable".into() });
        }
        dfa.init = init.chars().map(|c| c == '1').collect();
        let parse = |dfa: &mut SymbolicDfa, line: usize, text: &str| {
            parse_ite(&mut dfa.mgr, text).map_err(|e| Error::Parse { line, message: e.to_string() })
        };
        for (j, name) in names.iter().enumerate() {
            let (line, body) = next(&format!("delta {name}:"))?;
            dfa.delta[j] = parse(&mut dfa, line, &body)?;
        }
        let mut outputs_fns = Vec::new();
        for name in partition.outputs().iter() {
            let (line, body) = next(&format!("out {name}:"))?;
            outputs_fns.push(parse(&mut dfa, line, &body)?);
        }
        let (line, body) = next("accept:")?;
        dfa.accept = parse(&mut dfa, line, &body)?;
        let state: Vec<Var> = dfa.state.clone();
        for f in outputs_fns.iter().chain([&dfa.accept]) {
            let support = dfa.mgr.support(*f)?;
            if support.iter().any(|v| !state.contains(v)) {
                return Err(Error::Parse { line, message: "output and accept functions may only read state variables".into() });
            }
        }
        Ok(Strategy { dfa, outputs: outputs_fns })
    }
}
