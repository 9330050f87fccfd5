//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use minsynth::automata::Automaton;
use minsynth::bench::{
    oracle_game, oracle_language, random_corpus, run_harness, BenchInstance, HarnessConfig, Status,
};
use minsynth::compile::{
    pipeline_brzozowski_explicit, pipeline_brzozowski_symbolic, pipeline_hopcroft, reverse_dfa, temporal_nodes,
    CompileOptions, PhaseTimes, Pipeline,
};
use minsynth::formula::{evaluate, reverse_connectives, PropSet, Trace};
use minsynth::symbolic::{extract_strategy, run_strategy, solve_game, Prune};
use minsynth::wba::{codfa_to_wba, validate_determinized, validate_encoding, wdba_to_dfa};
use minsynth::{par, Budget};

type Outcome = Result<String, String>;

fn opts_for(inst: &BenchInstance) -> CompileOptions {
    CompileOptions { alphabet: Some(inst.partition.props()), ..Default::default() }
}

/// Every word of length `1..=maxlen` over `letters` letters.
fn words(letters: u64, maxlen: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..maxlen {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Collects per-item failures into one outcome.
fn all_ok(label: &str, results: Vec<Result<(), String>>) -> Outcome {
    let n = results.len();
    let bad: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    match bad.first() {
        None => Ok(format!("{n} {label}")),
        Some(first) => Err(format!("{} of {n} {label} failed; first: {first}", bad.len())),
    }
}

fn language_corpus() -> Vec<BenchInstance> {
    random_corpus(200, 1, 3, 10).expect("corpus")
}

fn game_corpus() -> Vec<BenchInstance> {
    random_corpus(100, 5000, 4, 10).expect("corpus")
}

fn criterion_1(corpus: &[BenchInstance]) -> Outcome {
    let results = par::map(corpus, |inst| {
        let props = inst.partition.props();
        let (dfa, _) = pipeline_hopcroft(&inst.formula, &opts_for(inst)).map_err(|e| e.to_string())?;
        let oracle = oracle_language(&inst.formula, &props, 5).map_err(|e| e.to_string())?;
        if dfa.accepts_letters(&[]) {
            return Err(format!("{}: accepts the empty trace", inst.formula));
        }
        for w in words(props.assignment_count(), 5) {
            if dfa.accepts_letters(&w) != oracle.contains(&w) {
                return Err(format!("{}: disagrees on {w:?}", inst.formula));
            }
        }
        Ok(())
    });
    all_ok("formulas match the oracle on traces up to length 5", results)
}

fn criterion_2(corpus: &[BenchInstance]) -> Outcome {
    let results = par::map(corpus, |inst| {
        let (h, _) = pipeline_hopcroft(&inst.formula, &opts_for(inst)).map_err(|e| e.to_string())?;
        let (b, _) = pipeline_brzozowski_explicit(&inst.formula, &opts_for(inst)).map_err(|e| e.to_string())?;
        match h.is_isomorphic(&b) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("{}: {} vs {} states, not isomorphic", inst.formula, h.num_states(), b.num_states())),
            Err(e) => Err(e.to_string()),
        }
    });
    all_ok("Hopcroft/Brzozowski pairs isomorphic", results)
}

fn criterion_3(corpus: &[BenchInstance]) -> Outcome {
    let results = par::map(&corpus[..50], |inst| {
        let props: PropSet = inst.partition.props();
        let rev = reverse_connectives(&inst.formula).map_err(|e| e.to_string())?;
        for w in words(props.assignment_count(), 5) {
            let t = Trace::new(props.clone(), w);
            let a = evaluate(&inst.formula, &t).map_err(|e| e.to_string())?;
            let b = evaluate(&rev, &t.reversed()).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("{} on {t}", inst.formula));
            }
        }
        Ok(())
    });
    all_ok("formulas agree with their reversal on reversed traces up to length 5", results)
}

fn criterion_4(corpus: &[BenchInstance]) -> Outcome {
    let results = par::map(&corpus[..100], |inst| {
        let err = |e: minsynth::Error| e.to_string();
        let opts = opts_for(inst);
        let (h, _) = pipeline_hopcroft(&inst.formula, &opts).map_err(err)?;
        let codfa = reverse_dfa(&inst.formula, &opts, &mut PhaseTimes::default()).map_err(err)?.reverse();
        let (d, _, _) = pipeline_brzozowski_symbolic(&inst.formula, &inst.partition, &opts).map_err(err)?;
        for w in words(inst.partition.props().assignment_count(), 4) {
            let (s, c, e) = (d.accepts_letters(&w), codfa.accepts_letters(&w), h.accepts_letters(&w));
            if s != c || s != e {
                return Err(format!("{} on {w:?}: symbolic {s}, co-DFA {c}, Hopcroft {e}", inst.formula));
            }
        }
        Ok(())
    });
    all_ok("symbolic DFAs agree with co-DFA simulation and Hopcroft up to length 4", results)
}

fn criterion_5() -> Outcome {
    let mut ratios = Vec::new();
    let mut report = Vec::new();
    for m in 1..=3usize {
        let inst = BenchInstance::kv(m).map_err(|e| e.to_string())?;
        let opts = CompileOptions { budget: Budget::unlimited(), ..opts_for(&inst) };
        let (dfa, _) = pipeline_hopcroft(&inst.formula, &opts).map_err(|e| e.to_string())?;
        let rev = reverse_dfa(&inst.formula, &opts, &mut PhaseTimes::default()).map_err(|e| e.to_string())?;
        let past = reverse_connectives(&inst.formula).map_err(|e| e.to_string())?;
        let t = temporal_nodes(past.expr()).len();
        let (n, r) = (dfa.num_states(), rev.num_states());
        report.push(format!("m={m}: dfa {n}, reverse {r}, |T| {t}"));
        if n < 1 << (1 << m) {
            return Err(format!("m={m}: minimal DFA has {n} < 2^(2^{m}) states"));
        }
        if r < 1 << m {
            return Err(format!("m={m}: reverse DFA has {r} < 2^{m} states"));
        }
        if r > 1 + (1usize << t) {
            return Err(format!("m={m}: reverse DFA has {r} > 1 + 2^{t} states"));
        }
        ratios.push(r as f64 / n as f64);
    }
    if !ratios.windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("ratio not strictly decreasing: {ratios:?}"));
    }
    Ok(report.join("; "))
}

struct GameCase {
    realizable: bool,
    failures: Vec<String>,
    strategy_checked: bool,
}

fn criterion_6_and_7(corpus: &[BenchInstance]) -> (Outcome, Outcome) {
    let cases = par::map(corpus, |inst| -> Result<GameCase, String> {
        let err = |e: minsynth::Error| e.to_string();
        let opts = opts_for(inst);
        let (dfa, _) = pipeline_hopcroft(&inst.formula, &opts).map_err(err)?;
        let oracle = oracle_game(&dfa, &inst.partition).map_err(err)?;
        let (d, r, _) = pipeline_brzozowski_symbolic(&inst.formula, &inst.partition, &opts).map_err(err)?;
        let mut failures = Vec::new();
        let mut strategy_checked = false;
        for prune in Prune::ALL {
            let mut d = d.clone();
            let g = solve_game(&mut d, prune, Some(r), &Budget::unlimited()).map_err(err)?;
            if g.realizable != oracle.realizable {
                failures.push(format!("{} ({prune}): symbolic {} vs oracle {}", inst.formula, g.realizable, oracle.realizable));
                continue;
            }
            if !g.realizable || inst.partition.inputs().len() > 2 {
                continue;
            }
            let s = extract_strategy(&d, &g).map_err(err)?;
            let n_in = inst.partition.inputs().assignment_count();
            for seq in words(n_in, g.iterations).into_iter().filter(|w| w.len() == g.iterations) {
                let play = run_strategy(&s, &seq).map_err(err)?;
                if !play.accepted_len.is_some_and(|k| k < g.iterations) {
                    failures.push(format!("{} ({prune}): strategy loses against {seq:?}", inst.formula));
                    break;
                }
            }
            strategy_checked = true;
        }
        Ok(GameCase { realizable: oracle.realizable, failures, strategy_checked })
    });
    let mut game_fail = Vec::new();
    let mut strat_fail = Vec::new();
    let (mut yes, mut checked) = (0, 0);
    for c in cases {
        match c {
            Err(e) => game_fail.push(e),
            Ok(c) => {
                yes += c.realizable as usize;
                checked += c.strategy_checked as usize;
                for f in c.failures {
                    if f.contains("strategy") {
                        strat_fail.push(f)
                    } else {
                        game_fail.push(f)
                    }
                }
            }
        }
    }
    let six = match game_fail.first() {
        None => Ok(format!("{} instances, {yes} realizable, all prune modes agree with the oracle", corpus.len())),
        Some(f) => Err(format!("{} mismatches; first: {f}", game_fail.len())),
    };
    let seven = match strat_fail.first() {
        None if checked == yes && yes > 0 => Ok(format!("{checked} realizable instances win against every input sequence")),
        None => Err(format!("only {checked} of {yes} realizable instances had a strategy checked")),
        Some(f) => Err(format!("{} losing strategies; first: {f}", strat_fail.len())),
    };
    (six, seven)
}

fn criterion_8(corpus: &[BenchInstance]) -> Outcome {
    let results = par::map(&corpus[..50], |inst| {
        let err = |e: minsynth::Error| e.to_string();
        let opts = opts_for(inst);
        let codfa: Automaton = reverse_dfa(&inst.formula, &opts, &mut PhaseTimes::default()).map_err(err)?.reverse();
        let w = codfa_to_wba(&codfa).map_err(err)?;
        validate_encoding(&codfa, &w).map_err(err)?;
        let (d, subsets) = w.automaton().determinize_within(&Budget::default()).map_err(err)?;
        validate_determinized(&w, &d, &subsets).map_err(err)?;
        let back = wdba_to_dfa(&d).map_err(err)?;
        let (direct, _) = pipeline_brzozowski_explicit(&inst.formula, &opts).map_err(err)?;
        match back.is_isomorphic(&direct) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("{}: round trip not isomorphic", inst.formula)),
            Err(e) => Err(e.to_string()),
        }
    });
    all_ok("wBA round trips valid and isomorphic", results)
}

fn criterion_9(corpus: &[BenchInstance]) -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("acceptance_scatter.csv");
    let rows = run_harness(corpus, &Pipeline::ALL, &HarnessConfig::default(), Some(&path)).map_err(|e| e.to_string())?;
    let mut smaller = 0;
    let mut not_smaller = 0;
    for r in rows.iter().filter(|r| r.pipeline == Pipeline::BrzExplicit && r.status == Status::Ok) {
        let (rev, dfa) = (r.revdfa_states.unwrap(), r.dfa_states_or_statevars.unwrap());
        if rev < dfa {
            smaller += 1;
        } else {
            not_smaller += 1;
        }
    }
    let msg = format!("reverse < DFA on {smaller}, reverse >= DFA on {not_smaller}; CSV at {}", path.display());
    if smaller >= 1 && not_smaller >= 1 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let language = language_corpus();
    let games = game_corpus();
    let mut failed = 0;
    let mut report = |n: &str, start: Instant, o: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match o {
            Ok(m) => println!("criterion {n}: PASS ({secs:.1}s) {m}"),
            Err(m) => {
                failed += 1;
                println!("criterion {n}: FAIL ({secs:.1}s) {m}");
            }
        }
    };
    let t = Instant::now();
    report("1", t, criterion_1(&language));
    let t = Instant::now();
    report("2", t, criterion_2(&language));
    let t = Instant::now();
    report("3", t, criterion_3(&language));
    let t = Instant::now();
    report("4", t, criterion_4(&language));
    let t = Instant::now();
    report("5", t, criterion_5());
    let t = Instant::now();
    let (six, seven) = criterion_6_and_7(&games);
    report("6", t, six);
    report("7", t, seven);
    let t = Instant::now();
    report("8", t, criterion_8(&language));
    let t = Instant::now();
    report("9", t, criterion_9(&language));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
