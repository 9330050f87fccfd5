mod common;

use common::{future_formula, props, words};
use minsynth::automata::Automaton;
use minsynth::compile::{
    ltlf_to_nfa, pipeline_brzozowski_explicit, pipeline_brzozowski_symbolic, pipeline_hopcroft, reverse_dfa,
    temporal_nodes, CompileOptions, PhaseTimes,
};
use minsynth::formula::{reverse_connectives, Expr, Formula};
use minsynth::symbolic::Partition;
use minsynth::wba::round_trip;
use minsynth::Budget;
use proptest::prelude::*;

fn opts(n: usize) -> CompileOptions {
    CompileOptions { alphabet: Some(props(n)), ..Default::default() }
}

fn same_language(a: &Automaton, b: &Automaton, maxlen: usize) -> Result<(), Vec<u64>> {
    for w in words(a.props().assignment_count(), maxlen) {
        if a.accepts_letters(&w) != b.accepts_letters(&w) {
            return Err(w);
        }
    }
    Ok(())
}

fn edge_multiset(a: &Automaton) -> Vec<(usize, usize, u32)> {
    let mut v: Vec<_> = a.all_edges().map(|(s, l, t)| (s, t, l.id())).collect();
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinize_and_minimize_preserve_language(f in future_formula(3, 4)) {
        let nfa = ltlf_to_nfa(&f, &props(3), &Budget::default()).unwrap();
        let dfa = nfa.determinize().unwrap();
        dfa.check_dfa().unwrap();
        let min = dfa.minimize().unwrap();
        prop_assert!(min.num_states() <= dfa.num_states());
        prop_assert_eq!(same_language(&nfa, &dfa, 5), Ok(()), "{}", f);
        prop_assert_eq!(same_language(&dfa, &min, 5), Ok(()), "{}", f);
    }

    #[test]
    fn three_pipelines_agree(f in future_formula(3, 4)) {
        let (h, _) = pipeline_hopcroft(&f, &opts(3)).unwrap();
        let (b, _) = pipeline_brzozowski_explicit(&f, &opts(3)).unwrap();
        let p = Partition::split_half(&props(3));
        let (s, _, _) = pipeline_brzozowski_symbolic(&f, &p, &opts(3)).unwrap();
        prop_assert!(h.is_isomorphic(&b).unwrap(), "{}", f);
        for w in words(8, 5) {
            prop_assert_eq!(h.accepts_letters(&w), s.accepts_letters(&w), "{} on {:?}", f, w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn minimize_is_idempotent(f in future_formula(3, 4)) {
        let (h, _) = pipeline_hopcroft(&f, &opts(3)).unwrap();
        let again = h.minimize().unwrap();
        prop_assert_eq!(again.num_states(), h.num_states());
        prop_assert!(again.is_isomorphic(&h).unwrap());
        prop_assert_eq!(again.to_text(), h.to_text());
    }

    #[test]
    fn double_reverse_keeps_edges(f in future_formula(3, 4)) {
        let nfa = ltlf_to_nfa(&f, &props(3), &Budget::default()).unwrap();
        let back = nfa.reverse().reverse();
        prop_assert_eq!(edge_multiset(&back), edge_multiset(&nfa));
        prop_assert_eq!(back.initial(), nfa.initial());
        prop_assert_eq!(back.accepting_states(), nfa.accepting_states());
    }

    #[test]
    fn reverse_dfa_size_bound(f in future_formula(3, 5)) {
        let rev = reverse_dfa(&f, &opts(3), &mut PhaseTimes::default()).unwrap();
        let past = reverse_connectives(&f).unwrap();
        let cells = temporal_nodes(past.expr());
        // the formula's own value needs a bit unless a cell already stores it
        let own = matches!(past.expr(), Expr::Since(..) | Expr::Trigger(..) | Expr::Once(_) | Expr::Historically(_));
        let extra = usize::from(!own);
        prop_assert!(rev.num_states() <= 1 + (1usize << (cells.len() + extra)), "{}", f);
    }

    #[test]
    fn text_round_trip(f in future_formula(3, 4)) {
        let (h, _) = pipeline_hopcroft(&f, &opts(3)).unwrap();
        let back = Automaton::from_text(&h.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), h.to_text());
        prop_assert!(back.is_isomorphic(&h).unwrap());
    }

    #[test]
    fn wba_round_trip_language(f in future_formula(3, 4)) {
        let codfa = reverse_dfa(&f, &opts(3), &mut PhaseTimes::default()).unwrap().reverse();
        let back = round_trip(&codfa).unwrap();
        prop_assert_eq!(same_language(&back, &codfa, 4), Ok(()), "{}", f);
    }
}

#[test]
fn kv_reverse_dfa_within_cell_bound() {
    for m in 1..=3 {
        let f: Formula = minsynth::bench::gen_kv(m).unwrap();
        let rev = reverse_dfa(&f, &CompileOptions::default(), &mut PhaseTimes::default()).unwrap();
        let past = reverse_connectives(&f).unwrap();
        let cells = temporal_nodes(past.expr());
        assert!(cells.contains(&past.expr()));
        assert!(rev.num_states() <= 1 + (1 << cells.len()));
    }
}
