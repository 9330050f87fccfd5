use std::fmt::Write as _;

use super::{Automaton, Kind};
use crate::formula::{parse_formula, Dialect, DialectHint, PropSet};
use crate::{Error, Result};

impl Automaton {
    /// Line-oriented text form, re-readable with [`Automaton::from_text`].
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        writeln!(s, "kind: {}", self.kind).unwrap();
        writeln!(s, "props: {}", self.props).unwrap();
        writeln!(s, "states: {}", self.num_states()).unwrap();
        writeln!(s, "initial: {}", join(&self.initial)).unwrap();
        writeln!(s, "accepting: {}", join(&self.accepting_states())).unwrap();
        for (src, l, dst) in self.all_edges() {
            writeln!(s, "trans: {src} -> {dst} [{}]", self.label_text(l)).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Automaton> {
        let mut kind = None;
        let mut props = None;
        let mut states = None;
        let mut initial = Vec::new();
        let mut accepting = Vec::new();
        let mut trans = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| err("expected `key: value`".into()))?;
            let value = value.trim();
            let indices = |v: &str| -> Result<Vec<usize>> {
                v.split_whitespace()
                    .map(|x| x.parse().map_err(|_| err(format!("bad state index `{x}`"))))
                    .collect()
            };
            match key.trim() {
                "kind" => {
                    kind = Some(match value {
                        "nfa" => Kind::Nfa,
                        "dfa" => Kind::Dfa,
                        "codfa" => Kind::CoDfa,
                        "wba" => Kind::Wba,
                        other => return Err(err(format!("unknown kind `{other}`"))),
                    })
                }
                "props" => props = Some(PropSet::new(value.split_whitespace())?),
                "states" => {
                    states = Some(value.parse::<usize>().map_err(|_| err(format!("bad state count `{value}`")))?)
                }
                "initial" => initial = indices(value)?,
                "accepting" => accepting = indices(value)?,
                "trans" => {
                    let (arrow, label) = value
                        .split_once('[')
                        .and_then(|(a, rest)| rest.strip_suffix(']').map(|l| (a, l)))
                        .ok_or_else(|| err("expected `src -> dst [label]`".into()))?;
                    let (src, dst) =
                        arrow.split_once("->").ok_or_else(|| err("expected `src -> dst [label]`".into()))?;
                    let src = indices(src)?;
                    let dst = indices(dst)?;
                    if src.len() != 1 || dst.len() != 1 {
                        return Err(err("expected one source and one target".into()));
                    }
                    trans.push((line_no, src[0], dst[0], label.to_string()));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let missing = |what: &str| Error::Parse { line: 0, message: format!("missing `{what}` line") };
        let mut a = Automaton::new(kind.ok_or_else(|| missing("kind"))?, props.ok_or_else(|| missing("props"))?);
        let n = states.ok_or_else(|| missing("states"))?;
        for _ in 0..n {
            a.add_state(false);
        }
        let check = |s: usize, line: usize| {
            if s < n {
                Ok(s)
            } else {
                Err(Error::Parse { line, message: format!("state {s} out of range") })
            }
        };
        for &s in &accepting {
            a.set_accepting(check(s, 0)?, true);
        }
        a.set_initial(initial.iter().map(|&s| check(s, 0)).collect::<Result<_>>()?);
        for (line, src, dst, label) in trans {
            let f = parse_formula(&label, DialectHint::Auto)
                .map_err(|e| Error::Parse { line, message: e.to_string() })?;
            if f.dialect() != Dialect::Propositional {
                return Err(Error::Parse { line, message: "temporal connective in label".into() });
            }
            let l = a.label(f.expr())?;
            a.add_edge(check(src, line)?, check(dst, line)?, l)?;
        }
        Ok(a)
    }

    /// Graphviz rendering, one edge per state pair.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            writeln!(s, "  {q} [shape={shape}];").unwrap();
        }
        for (i, &q) in self.initial.iter().enumerate() {
            writeln!(s, "  init{i} [shape=point];\n  init{i} -> {q};").unwrap();
        }
        for (src, l, dst) in self.all_edges() {
            let label = self.label_text(l).replace('"', "\\\"");
            writeln!(s, "  {src} -> {dst} [label=\"{label}\"];").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "kind: dfa
props: a b
states: 2
initial: 0
accepting: 1
trans: 0 -> 0 [!a & !b]
trans: 0 -> 1 [a | b]
trans: 1 -> 1 [true]
";

    #[test]
    fn round_trip() {
        let a = Automaton::from_text(SAMPLE).unwrap();
        a.check_dfa().unwrap();
        let b = Automaton::from_text(&a.to_text()).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.is_isomorphic(&b).unwrap());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SAMPLE.replace("trans: 1 -> 1 [true]", "trans: 1 -> 7 [true]");
        assert!(matches!(Automaton::from_text(&bad), Err(Error::Parse { line: 8, .. })));
        let bad = SAMPLE.replace("[a | b]", "[F a]");
        assert!(matches!(Automaton::from_text(&bad), Err(Error::Parse { line: 7, .. })));
        assert!(Automaton::from_text("props: a\n").is_err());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let a = Automaton::from_text(SAMPLE).unwrap();
        let dot = a.to_dot();
        assert!(dot.contains("0 -> 1"));
        assert!(dot.contains("doublecircle"));
    }
}
