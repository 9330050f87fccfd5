use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use minsynth::automata::Automaton;
use minsynth::bench::{self, oracle_language, run_harness, BenchInstance, HarnessConfig, Status};
use minsynth::compile::{
    pipeline_brzozowski_explicit, pipeline_brzozowski_symbolic, pipeline_hopcroft, CompileOptions, Pipeline,
};
use minsynth::limits::DEFAULT_STATE_CAP;
use minsynth::symbolic::{
    encode_explicit_dfa, extract_strategy, reachable_states_fixpoint, run_strategy, solve_game, Partition, Prune,
    Strategy,
};
use minsynth::{Budget, Formula, PropSet};

use crate::{Command, FormulaSource, Limits};

pub const OK: u8 = 0;
pub const UNREALIZABLE: u8 = 1;
pub const USAGE: u8 = 2;
pub const RESOURCE: u8 = 3;
pub const MISMATCH: u8 = 4;

pub const STATE_CAP_ENV: &str = "MINSYNTH_STATE_CAP";

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<minsynth::Error>() {
        Some(err) if err.is_resource() => RESOURCE,
        _ => USAGE,
    }
}

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Compile { formula, props, pipeline, output, dot, limits } => {
            compile(&formula, props, pipeline, output.as_deref(), dot.as_deref(), limits)
        }
        Command::Synthesize { formula, inputs, outputs, pipeline, prune, output, limits } => {
            synthesize(&formula, &inputs, &outputs, pipeline, prune, output.as_deref(), limits)
        }
        Command::Check { formula, dfa, maxlen } => check(&formula, &dfa, maxlen),
        Command::Bench { family, count, seed, nprops, max_connectives, kv_max, file, pipelines, prune, output, limits } => {
            let mut instances = Vec::new();
            if matches!(family.as_str(), "kv" | "all") {
                for m in 1..=kv_max {
                    instances.push(BenchInstance::kv(m)?);
                }
            }
            if matches!(family.as_str(), "random" | "all") {
                instances.extend(bench::random_corpus(count, seed, nprops, max_connectives)?);
            }
            if !matches!(family.as_str(), "kv" | "random" | "all" | "none") {
                bail!("unknown family `{family}` (expected kv, random, all or none)");
            }
            if let Some(path) = file {
                let text = read(&path)?;
                instances.extend(bench::parse_instances(&text, "file")?);
            }
            let cfg = HarnessConfig {
                timeout: Some(Duration::from_secs_f64(limits.timeout.unwrap_or(60.0))),
                state_cap: state_cap(limits)?,
                prune,
            };
            let rows = run_harness(&instances, &pipelines, &cfg, Some(&output))?;
            let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
            println!(
                "{} rows: {} ok, {} timeout, {} resource; written to {}",
                rows.len(),
                count(Status::Ok),
                count(Status::Timeout),
                count(Status::Resource),
                output.display()
            );
            Ok(OK)
        }
        Command::Play { strategy, inputs } => play(&strategy, inputs.as_deref()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_formula(src: &FormulaSource) -> Result<Formula> {
    let text = match (&src.text, &src.file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => bail!("a formula is required"),
    };
    Formula::parse(text.trim()).map_err(|e| minsynth::Error::from(e).into())
}

fn prop_set(names: &[String]) -> Result<PropSet> {
    Ok(PropSet::new(names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()))?)
}

/// Flag, then environment, then the built-in default.
fn state_cap(limits: Limits) -> Result<usize> {
    if let Some(cap) = limits.state_cap {
        return Ok(cap);
    }
    match std::env::var(STATE_CAP_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{STATE_CAP_ENV} must be a number, got `{v}`")),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn budget(limits: Limits) -> Result<Budget> {
    let mut b = Budget::default().with_state_cap(state_cap(limits)?);
    if let Some(t) = limits.timeout {
        if !(t.is_finite() && t >= 0.0) {
            bail!("timeout must be a non-negative number of seconds");
        }
        b = b.with_timeout(Duration::from_secs_f64(t));
    }
    Ok(b)
}

fn compile(
    src: &FormulaSource,
    props: Option<Vec<String>>,
    pipeline: Pipeline,
    output: Option<&Path>,
    dot: Option<&Path>,
    limits: Limits,
) -> Result<u8> {
    let f = load_formula(src)?;
    let alphabet = props.map(|p| prop_set(&p)).transpose()?;
    let opts = CompileOptions { alphabet, budget: budget(limits)? };
    let dfa = match pipeline {
        Pipeline::Hopcroft => pipeline_hopcroft(&f, &opts)?.0,
        Pipeline::BrzExplicit => pipeline_brzozowski_explicit(&f, &opts)?.0,
        Pipeline::BrzSymbolic => bail!("compile writes an explicit DFA; use hopcroft or brz-explicit"),
    };
    match output {
        Some(p) => write(p, &dfa.to_text())?,
        None => print!("{}", dfa.to_text()),
    }
    if let Some(p) = dot {
        write(p, &dfa.to_dot())?;
    }
    Ok(OK)
}

fn synthesize(
    src: &FormulaSource,
    inputs: &[String],
    outputs: &[String],
    pipeline: Pipeline,
    prune: Prune,
    output: Option<&Path>,
    limits: Limits,
) -> Result<u8> {
    let f = load_formula(src)?;
    let partition = Partition::new(prop_set(inputs)?, prop_set(outputs)?)?;
    partition.check_covers(&f.props())?;
    let budget = budget(limits)?;
    let opts = CompileOptions { alphabet: Some(partition.props()), budget };
    let (mut d, reach) = match pipeline {
        Pipeline::BrzSymbolic => {
            let (d, r, _) = pipeline_brzozowski_symbolic(&f, &partition, &opts)?;
            (d, r)
        }
        Pipeline::Hopcroft | Pipeline::BrzExplicit => {
            let dfa = if pipeline == Pipeline::Hopcroft {
                pipeline_hopcroft(&f, &opts)?.0
            } else {
                pipeline_brzozowski_explicit(&f, &opts)?.0
            };
            let mut d = encode_explicit_dfa(&dfa, &partition)?;
            let r = reachable_states_fixpoint(&mut d, &budget)?.set;
            (d, r)
        }
    };
    let reach = (prune != Prune::None).then_some(reach);
    let g = solve_game(&mut d, prune, reach, &budget)?;
    if !g.realizable {
        println!("UNREALIZABLE");
        return Ok(UNREALIZABLE);
    }
    println!("REALIZABLE");
    if let Some(p) = output {
        let s = extract_strategy(&d, &g)?;
        write(p, &s.to_text())?;
    }
    Ok(OK)
}

fn check(src: &FormulaSource, dfa_path: &Path, maxlen: usize) -> Result<u8> {
    let f = load_formula(src)?;
    let dfa = Automaton::from_text(&read(dfa_path)?)?;
    let props = dfa.props().clone();
    let accepted = oracle_language(&f, &props, maxlen)?;
    let mut total = 0u64;
    let letters = props.assignment_count();
    let mut word = Vec::with_capacity(maxlen);
    for len in 1..=maxlen {
        for code in 0..letters.pow(len as u32) {
            word.clear();
            let mut c = code;
            for _ in 0..len {
                word.push(c % letters);
                c /= letters;
            }
            total += 1;
            let want = accepted.contains(&word);
            if dfa.accepts_letters(&word) != want {
                let steps: Vec<String> =
                    word.iter().map(|&l| format!("{{{}}}", props.true_names(l).join(","))).collect();
                println!("MISMATCH on {}: formula {}, DFA {}", steps.join(""), want, !want);
                return Ok(MISMATCH);
            }
        }
    }
    println!("OK: DFA agrees with the formula on {total} traces up to length {maxlen}");
    Ok(OK)
}

fn play(strategy: &Path, inputs: Option<&Path>) -> Result<u8> {
    let s = Strategy::from_text(&read(strategy)?)?;
    let lines: Vec<String> = match inputs {
        Some(p) => read(p)?.lines().map(str::to_string).collect(),
        None => io::stdin().lock().lines().collect::<io::Result<_>>()?,
    };
    let mut seq = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        let names: Vec<&str> =
            line.split(|c: char| c == ',' || c.is_whitespace()).filter(|n| !n.is_empty() && *n != "-").collect();
        seq.push(s.input_bits(&names).with_context(|| format!("input line {}", i + 1))?);
    }
    let play = run_strategy(&s, &seq)?;
    let p = s.dfa().partition().props();
    let mut out = io::stdout().lock();
    for (k, &letter) in play.trace.iter().enumerate() {
        writeln!(out, "step {k}: {{{}}}", p.true_names(letter).join(", "))?;
    }
    match play.accepted_len {
        Some(n) => writeln!(out, "accepted after {n} steps")?,
        None => writeln!(out, "not accepted after {} steps", play.trace.len())?,
    }
    Ok(OK)
}
