use super::{Expr, Formula, FormulaError, Trace};

/// Truth of `f` on `trace`: future and propositional formulas are evaluated
/// at position 0, past formulas at the last position.
pub fn evaluate(f: &Formula, trace: &Trace) -> Result<bool, FormulaError> {
    if trace.is_empty() {
        return Err(FormulaError::EmptyTrace);
    }
    let props = trace.props();
    let mut bits = Vec::new();
    let atoms = f.expr().atoms();
    for a in &atoms {
        match props.index_of(a) {
            Some(i) => bits.push((a.as_str(), i)),
            None => return Err(FormulaError::UnknownProposition(a.clone())),
        }
    }
    let lookup = |name: &str| bits.iter().find(|(n, _)| *n == name).map(|(_, i)| *i).unwrap();
    let values = truth(f.expr(), trace.steps(), &lookup);
    Ok(if f.is_future_like() { values[0] } else { values[trace.len() - 1] })
}

/// Value of `e` at every position, straight from the quantifier-style
/// definitions of the connectives.
fn truth(e: &Expr, steps: &[u64], bit: &dyn Fn(&str) -> usize) -> Vec<bool> {
    let n = steps.len();
    let un = |a: &Expr| truth(a, steps, bit);
    match e {
        Expr::True => vec![true; n],
        Expr::False => vec![false; n],
        Expr::Atom(a) => {
            let i = bit(a);
            steps.iter().map(|s| s >> i & 1 == 1).collect()
        }
        Expr::Not(a) => un(a).into_iter().map(|v| !v).collect(),
        Expr::And(a, b) => zip(&un(a), &un(b), |x, y| x && y),
        Expr::Or(a, b) => zip(&un(a), &un(b), |x, y| x || y),
        Expr::Implies(a, b) => zip(&un(a), &un(b), |x, y| !x || y),
        Expr::Iff(a, b) => zip(&un(a), &un(b), |x, y| x == y),
        Expr::Next(a) => {
            let va = un(a);
            (0..n).map(|i| i + 1 < n && va[i + 1]).collect()
        }
        Expr::WeakNext(a) => {
            let va = un(a);
            (0..n).map(|i| i + 1 >= n || va[i + 1]).collect()
        }
        Expr::Until(a, b) => {
            let (va, vb) = (un(a), un(b));
            (0..n).map(|i| (i..n).any(|j| vb[j] && (i..j).all(|k| va[k]))).collect()
        }
        Expr::Release(a, b) => {
            // a R b: for every j >= i, b holds at j unless a held somewhere in [i, j)
            let (va, vb) = (un(a), un(b));
            (0..n).map(|i| (i..n).all(|j| vb[j] || (i..j).any(|k| va[k]))).collect()
        }
        Expr::Eventually(a) => {
            let va = un(a);
            (0..n).map(|i| (i..n).any(|j| va[j])).collect()
        }
        Expr::Globally(a) => {
            let va = un(a);
            (0..n).map(|i| (i..n).all(|j| va[j])).collect()
        }
        Expr::Yesterday(a) => {
            let va = un(a);
            (0..n).map(|i| i > 0 && va[i - 1]).collect()
        }
        Expr::WeakYesterday(a) => {
            let va = un(a);
            (0..n).map(|i| i == 0 || va[i - 1]).collect()
        }
        Expr::Since(a, b) => {
            let (va, vb) = (un(a), un(b));
            (0..n).map(|i| (0..=i).any(|j| vb[j] && (j + 1..=i).all(|k| va[k]))).collect()
        }
        Expr::Trigger(a, b) => {
            let (va, vb) = (un(a), un(b));
            (0..n).map(|i| (0..=i).all(|j| vb[j] || (j + 1..=i).any(|k| va[k]))).collect()
        }
        Expr::Once(a) => {
            let va = un(a);
            (0..n).map(|i| (0..=i).any(|j| va[j])).collect()
        }
        Expr::Historically(a) => {
            let va = un(a);
            (0..n).map(|i| (0..=i).all(|j| va[j])).collect()
        }
    }
}

fn zip(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect()
}
