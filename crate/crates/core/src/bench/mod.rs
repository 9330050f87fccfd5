//! Benchmark families, brute-force oracles and the comparison harness.

mod harness;
mod oracle;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Dialect, Expr, Formula, PropSet};
use crate::symbolic::Partition;
use crate::{Error, Result};

pub use harness::{run_harness, write_csv, HarnessConfig, HarnessRow, Realizable, Status, CSV_HEADER};
pub use oracle::{oracle_game, oracle_language, OracleGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Kv,
    Random,
    External,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Kv => "kv",
            Family::Random => "random",
            Family::External => "external",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kv" => Ok(Family::Kv),
            "random" => Ok(Family::Random),
            "external" => Ok(Family::External),
            _ => Err(Error::Invalid(format!("unknown family `{s}`"))),
        }
    }
}

/// Parameters an instance was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Params {
    Kv { m: usize },
    Random(RandomParams),
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomParams {
    pub seed: u64,
    pub nprops: usize,
    pub nconjuncts: usize,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub id: String,
    pub family: Family,
    pub formula: Formula,
    pub partition: Partition,
    pub params: Params,
}

impl BenchInstance {
    /// `KV(m)` over `p1..pm`, first half of the propositions as inputs.
    pub fn kv(m: usize) -> Result<Self> {
        let formula = gen_kv(m)?;
        let partition = Partition::split_half(&kv_props(m)?);
        Ok(BenchInstance { id: format!("kv-{m}"), family: Family::Kv, formula, partition, params: Params::Kv { m } })
    }

    /// A random conjunction over `p1..pn`, first half as inputs.
    pub fn random(p: RandomParams) -> Result<Self> {
        let formula = gen_random(p.seed, p.nprops, p.nconjuncts, p.depth)?;
        let partition = Partition::split_half(&kv_props(p.nprops)?);
        Ok(BenchInstance {
            id: format!("random-{}", p.seed),
            family: Family::Random,
            formula,
            partition,
            params: Params::Random(p),
        })
    }

    /// Rebuilds the formula from the family and parameters.
    pub fn regenerate(&self) -> Result<Formula> {
        match self.params {
            Params::Kv { m } => gen_kv(m),
            Params::Random(p) => gen_random(p.seed, p.nprops, p.nconjuncts, p.depth),
            Params::External => Ok(self.formula.clone()),
        }
    }
}

fn kv_props(n: usize) -> Result<PropSet> {
    Ok(PropSet::new((1..=n).map(|i| format!("p{i}")))?)
}

/// `F(X true ∧ ⋀_{i=1..m} (p_i ↔ F(p_i ∧ N false)))`: the assignment at the
/// last position already occurred at some earlier position.
pub fn gen_kv(m: usize) -> Result<Formula> {
    if m == 0 {
        return Err(Error::Invalid("KV(m) needs m >= 1".into()));
    }
    let clause = |i: usize| {
        let p = Expr::atom(format!("p{i}"));
        Expr::iff(p.clone(), Expr::eventually(Expr::and(p, Expr::weak_next(Expr::False))))
    };
    let body = Expr::and(Expr::next(Expr::True), Expr::conjunction((1..=m).map(clause)));
    Ok(Formula::new(Expr::eventually(body), Dialect::Future)?)
}

/// Random conjunction of `nconjuncts` templates, each picked uniformly from
///
/// `F g`, `G g`, `g1 U g2`, `X g`, `G(g1 -> X g2)`, `F(g1 & N g2)`
///
/// where every `g` is a propositional formula of depth at most `depth` over
/// `p1..p{nprops}`. A depth-1 leaf is an atom or a negated atom with equal
/// probability; deeper nodes are a leaf with probability 1/3, otherwise `&`
/// or `|` of two subtrees one level shallower.
pub fn gen_random(seed: u64, nprops: usize, nconjuncts: usize, depth: usize) -> Result<Formula> {
    if nprops == 0 || nconjuncts == 0 || depth == 0 {
        return Err(Error::Invalid("random formula parameters must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conjuncts: Vec<Expr> = (0..nconjuncts)
        .map(|_| {
            let t = prop_tree(&mut rng, nprops, depth);
            match rng.gen_range(0..6) {
                0 => Expr::eventually(t),
                1 => Expr::globally(t),
                2 => Expr::until(t, prop_tree(&mut rng, nprops, depth)),
                3 => Expr::next(t),
                4 => Expr::globally(Expr::implies(t, Expr::next(prop_tree(&mut rng, nprops, depth)))),
                _ => Expr::eventually(Expr::and(t, Expr::weak_next(prop_tree(&mut rng, nprops, depth)))),
            }
        })
        .collect();
    Ok(Formula::new(Expr::conjunction(conjuncts), Dialect::Future)?)
}

fn prop_tree(rng: &mut ChaCha8Rng, nprops: usize, depth: usize) -> Expr {
    if depth <= 1 || rng.gen_ratio(1, 3) {
        let a = Expr::atom(format!("p{}", rng.gen_range(1..=nprops)));
        return if rng.gen_bool(0.5) { a } else { Expr::not(a) };
    }
    let l = prop_tree(rng, nprops, depth - 1);
    let r = prop_tree(rng, nprops, depth - 1);
    if rng.gen_bool(0.5) {
        Expr::and(l, r)
    } else {
        Expr::or(l, r)
    }
}

/// `count` random instances with seeds from `first_seed` on. Each seed draws
/// 1..=3 conjuncts and depth 1..=2 over `nprops` propositions; formulas with
/// more than `max_connectives` connectives are skipped.
pub fn random_corpus(count: usize, first_seed: u64, nprops: usize, max_connectives: usize) -> Result<Vec<BenchInstance>> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    while out.len() < count {
        let nconjuncts = 1 + (seed % 3) as usize;
        let depth = 1 + (seed / 3 % 2) as usize;
        let inst = BenchInstance::random(RandomParams { seed, nprops, nconjuncts, depth })?;
        if inst.formula.expr().connective_count() <= max_connectives {
            out.push(inst);
        }
        seed += 1;
    }
    Ok(out)
}

/// Reads instances from text, one per line: `formula` or
/// `formula ; inputs ; outputs` with space-separated proposition names.
/// Blank lines and lines starting with `#` are skipped. Without an explicit
/// partition the sorted atoms are split in half, inputs first.
pub fn parse_instances(text: &str, prefix: &str) -> Result<Vec<BenchInstance>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let parts: Vec<&str> = line.split(';').map(str::trim).collect();
        let formula = Formula::parse(parts[0]).map_err(|e| err(e.to_string()))?;
        if !formula.is_future_like() {
            return Err(err("expected a future formula".into()));
        }
        let partition = match parts[..] {
            [_] => Partition::split_half(&formula.props()),
            [_, ins, outs] => Partition::new(
                PropSet::new(ins.split_whitespace()).map_err(|e| err(e.to_string()))?,
                PropSet::new(outs.split_whitespace()).map_err(|e| err(e.to_string()))?,
            )
            .map_err(|e| err(e.to_string()))?,
            _ => return Err(err("expected `formula` or `formula ; inputs ; outputs`".into())),
        };
        partition.check_covers(&formula.props()).map_err(|e| err(e.to_string()))?;
        out.push(BenchInstance {
            id: format!("{prefix}-{}", out.len() + 1),
            family: Family::External,
            formula,
            partition,
            params: Params::External,
        });
    }
    Ok(out)
}
