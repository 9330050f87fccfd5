use std::collections::{BTreeSet, VecDeque};

use rustc_hash::FxHashMap;

use crate::automata::{Automaton, Kind};
use crate::bdd::{Bdd, BddManager, Var};
use crate::formula::{negation_normal_form, xnf_expand, Expr, Formula, PropSet, Xnf};
use crate::limits::Budget;
use crate::{Error, Result};

/// A next-step obligation: the body must hold at the next position, which
/// must exist when `strong`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Obligation {
    strong: bool,
    body: Expr,
}

/// NFA for a future formula. States are sets of NNF formulas still to be
/// satisfied from the current position, plus one accepting `end` state
/// entered on the last letter of a trace.
pub fn ltlf_to_nfa(f: &Formula, alphabet: &PropSet, budget: &Budget) -> Result<Automaton> {
    let g = negation_normal_form(f)?.into_expr();
    if let Some(p) = g.atoms().into_iter().find(|p| !alphabet.contains(p)) {
        return Err(Error::UnknownProposition(p));
    }
    let obligations = collect_obligations(&g);
    let k = obligations.len();
    let slot: FxHashMap<&Obligation, usize> = obligations.iter().enumerate().map(|(i, o)| (o, i)).collect();

    // obligation variables first, so every path fixes them before the letter
    let mut scratch = BddManager::new();
    for i in 0..k {
        scratch.add_var(format!("#o{i}"))?;
    }
    for p in alphabet.iter() {
        scratch.add_var(p)?;
    }
    let x_false_n_true: Vec<(Var, Bdd)> = obligations
        .iter()
        .enumerate()
        .map(|(i, o)| (Var(i as u32), scratch.constant(!o.strong)))
        .collect();

    let mut a = Automaton::new(Kind::Nfa, alphabet.clone());
    let start = a.add_state(false);
    let end = a.add_state(true);
    a.set_initial(vec![start]);

    let mut xnf_cache: FxHashMap<Expr, Bdd> = FxHashMap::default();
    let mut index: FxHashMap<BTreeSet<Expr>, usize> = FxHashMap::default();
    let Some(init) = normalize([g]) else {
        return Ok(a);
    };
    index.insert(init.clone(), start);
    let mut sets = vec![Some(init), None];
    let mut queue = VecDeque::from([start]);

    while let Some(s) = queue.pop_front() {
        budget.check_time()?;
        let psi = sets[s].clone().expect("only formula states are queued");
        let mut chi = scratch.one();
        for e in &psi {
            let b = match xnf_cache.get(e) {
                Some(&b) => b,
                None => {
                    let b = xnf_to_bdd(&mut scratch, &xnf_expand(e)?, &slot, alphabet, k)?;
                    xnf_cache.insert(e.clone(), b);
                    b
                }
            };
            chi = scratch.and(chi, b)?;
        }

        let last = scratch.compose(chi, &x_false_n_true)?;
        let label = a.manager_mut().import(&scratch, last, |v| Var(v.0 - k as u32))?;
        a.add_edge(s, end, label)?;

        let mut paths = Vec::new();
        obligation_paths(&scratch, chi, k, &mut Vec::new(), &mut paths)?;
        for (chosen, letters) in paths {
            let Some(next) = normalize(chosen.iter().map(|&i| obligations[i].body.clone())) else {
                continue;
            };
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    budget.check_states(a.num_states() + 1)?;
                    let t = a.add_state(false);
                    index.insert(next.clone(), t);
                    sets.push(Some(next));
                    queue.push_back(t);
                    t
                }
            };
            let label = a.manager_mut().import(&scratch, letters, |v| Var(v.0 - k as u32))?;
            a.add_edge(s, t, label)?;
        }
    }
    Ok(a)
}

/// Drops `true` members; `None` when the set contains `false`.
fn normalize(items: impl IntoIterator<Item = Expr>) -> Option<BTreeSet<Expr>> {
    let mut out = BTreeSet::new();
    for e in items {
        match e {
            Expr::True => {}
            Expr::False => return None,
            e => {
                out.insert(e);
            }
        }
    }
    Some(out)
}

fn collect_obligations(g: &Expr) -> Vec<Obligation> {
    let mut out: Vec<Obligation> = Vec::new();
    g.walk(&mut |e| {
        let ob = match e {
            Expr::Next(a) => Obligation { strong: true, body: (**a).clone() },
            Expr::WeakNext(a) => Obligation { strong: false, body: (**a).clone() },
            Expr::Until(..) | Expr::Eventually(_) => Obligation { strong: true, body: e.clone() },
            Expr::Release(..) | Expr::Globally(_) => Obligation { strong: false, body: e.clone() },
            _ => return,
        };
        if !out.contains(&ob) {
            out.push(ob);
        }
    });
    out
}

fn xnf_to_bdd(
    m: &mut BddManager,
    x: &Xnf,
    slot: &FxHashMap<&Obligation, usize>,
    alphabet: &PropSet,
    k: usize,
) -> Result<Bdd> {
    let rec = |m: &mut BddManager, y: &Xnf| xnf_to_bdd(m, y, slot, alphabet, k);
    let ob = |strong: bool, body: &Expr| Var(slot[&Obligation { strong, body: body.clone() }] as u32);
    Ok(match x {
        Xnf::True => m.one(),
        Xnf::False => m.zero(),
        Xnf::Lit { prop, positive } => {
            let i = alphabet.index_of(prop).expect("atoms checked against the alphabet");
            m.literal(Var((k + i) as u32), *positive)?
        }
        Xnf::Next(e) => m.var(ob(true, e))?,
        Xnf::WeakNext(e) => m.var(ob(false, e))?,
        Xnf::And(a, b) => {
            let (p, q) = (rec(m, a)?, rec(m, b)?);
            m.and(p, q)?
        }
        Xnf::Or(a, b) => {
            let (p, q) = (rec(m, a)?, rec(m, b)?);
            m.or(p, q)?
        }
    })
}

/// Enumerates paths through the obligation levels of `f`. Each yields the
/// obligations set to 1 and the remaining function over the letter.
fn obligation_paths(
    m: &BddManager,
    f: Bdd,
    k: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Bdd)>,
) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    match m.node(f)? {
        Some((v, lo, hi)) if v.index() < k => {
            obligation_paths(m, lo, k, chosen, out)?;
            chosen.push(v.index());
            obligation_paths(m, hi, k, chosen, out)?;
            chosen.pop();
        }
        _ => out.push((chosen.clone(), f)),
    }
    Ok(())
}
