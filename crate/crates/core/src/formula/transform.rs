use std::fmt;

use super::{Dialect, Expr, Formula, FormulaError};

/// Pushes negations down to atoms using the dualities `!X = N!`, `!U = R`,
/// `!F = G!` and De Morgan. `->` and `<->` are expanded.
pub fn negation_normal_form(f: &Formula) -> Result<Formula, FormulaError> {
    f.require_future()?;
    Ok(Formula { expr: nnf(f.expr(), false), dialect: f.dialect() })
}

fn nnf(e: &Expr, neg: bool) -> Expr {
    use Expr::*;
    let pos = |a: &Expr| nnf(a, false);
    let ng = |a: &Expr| nnf(a, true);
    match (e, neg) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(_), false) => e.clone(),
        (Atom(_), true) => Expr::not(e.clone()),
        (Not(a), _) => nnf(a, !neg),
        (And(a, b), false) => Expr::and(pos(a), pos(b)),
        (And(a, b), true) => Expr::or(ng(a), ng(b)),
        (Or(a, b), false) => Expr::or(pos(a), pos(b)),
        (Or(a, b), true) => Expr::and(ng(a), ng(b)),
        (Implies(a, b), false) => Expr::or(ng(a), pos(b)),
        (Implies(a, b), true) => Expr::and(pos(a), ng(b)),
        (Iff(a, b), false) => Expr::or(Expr::and(pos(a), pos(b)), Expr::and(ng(a), ng(b))),
        (Iff(a, b), true) => Expr::or(Expr::and(pos(a), ng(b)), Expr::and(ng(a), pos(b))),
        (Next(a), false) => Expr::next(pos(a)),
        (Next(a), true) => Expr::weak_next(ng(a)),
        (WeakNext(a), false) => Expr::weak_next(pos(a)),
        (WeakNext(a), true) => Expr::next(ng(a)),
        (Until(a, b), false) => Expr::until(pos(a), pos(b)),
        (Until(a, b), true) => Expr::release(ng(a), ng(b)),
        (Release(a, b), false) => Expr::release(pos(a), pos(b)),
        (Release(a, b), true) => Expr::until(ng(a), ng(b)),
        (Eventually(a), false) => Expr::eventually(pos(a)),
        (Eventually(a), true) => Expr::globally(ng(a)),
        (Globally(a), false) => Expr::globally(pos(a)),
        (Globally(a), true) => Expr::eventually(ng(a)),
        // require_future rules these out
        (Yesterday(_) | WeakYesterday(_) | Since(..) | Trigger(..) | Once(_) | Historically(_), _) => {
            unreachable!("past connective in future formula")
        }
    }
}

pub(crate) fn is_nnf(e: &Expr) -> bool {
    match e {
        Expr::Not(a) => matches!(**a, Expr::Atom(_)),
        Expr::Implies(..) | Expr::Iff(..) => false,
        e if e.is_past_connective() => false,
        e => e.children().into_iter().all(is_nnf),
    }
}

/// Maps every future connective to its past counterpart, giving a past
/// formula whose language is the reverse of the input's.
pub fn reverse_connectives(f: &Formula) -> Result<Formula, FormulaError> {
    f.require_future()?;
    Ok(Formula { expr: swap_direction(f.expr()), dialect: Dialect::Past })
}

/// Inverse of [`reverse_connectives`].
pub fn reverse_past_connectives(f: &Formula) -> Result<Formula, FormulaError> {
    f.require_past()?;
    Ok(Formula { expr: swap_direction(f.expr()), dialect: Dialect::Future })
}

fn swap_direction(e: &Expr) -> Expr {
    use Expr::*;
    let s = |a: &Expr| swap_direction(a);
    match e {
        True | False | Atom(_) => e.clone(),
        Not(a) => Expr::not(s(a)),
        And(a, b) => Expr::and(s(a), s(b)),
        Or(a, b) => Expr::or(s(a), s(b)),
        Implies(a, b) => Expr::implies(s(a), s(b)),
        Iff(a, b) => Expr::iff(s(a), s(b)),
        Next(a) => Expr::yesterday(s(a)),
        WeakNext(a) => Expr::weak_yesterday(s(a)),
        Until(a, b) => Expr::since(s(a), s(b)),
        Release(a, b) => Expr::trigger(s(a), s(b)),
        Eventually(a) => Expr::once(s(a)),
        Globally(a) => Expr::historically(s(a)),
        Yesterday(a) => Expr::next(s(a)),
        WeakYesterday(a) => Expr::weak_next(s(a)),
        Since(a, b) => Expr::until(s(a), s(b)),
        Trigger(a, b) => Expr::release(s(a), s(b)),
        Once(a) => Expr::eventually(s(a)),
        Historically(a) => Expr::globally(s(a)),
    }
}

/// One-step unfolding of an NNF future formula: a propositional formula over
/// literals of the current step and obligations on the next step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Xnf {
    True,
    False,
    Lit { prop: String, positive: bool },
    /// Strong obligation: a next step exists and satisfies the formula.
    Next(Expr),
    /// Weak obligation: if a next step exists it satisfies the formula.
    WeakNext(Expr),
    And(Box<Xnf>, Box<Xnf>),
    Or(Box<Xnf>, Box<Xnf>),
}

impl Xnf {
    fn and(a: Xnf, b: Xnf) -> Xnf {
        Xnf::And(Box::new(a), Box::new(b))
    }

    fn or(a: Xnf, b: Xnf) -> Xnf {
        Xnf::Or(Box::new(a), Box::new(b))
    }

    /// Evaluates with `lit(prop)` for the current step and `obligation(strong, body)`
    /// for next-step atoms.
    pub fn eval(&self, lit: &dyn Fn(&str) -> bool, obligation: &dyn Fn(bool, &Expr) -> bool) -> bool {
        match self {
            Xnf::True => true,
            Xnf::False => false,
            Xnf::Lit { prop, positive } => lit(prop) == *positive,
            Xnf::Next(e) => obligation(true, e),
            Xnf::WeakNext(e) => obligation(false, e),
            Xnf::And(a, b) => a.eval(lit, obligation) && b.eval(lit, obligation),
            Xnf::Or(a, b) => a.eval(lit, obligation) || b.eval(lit, obligation),
        }
    }
}

impl fmt::Display for Xnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Xnf::True => f.write_str("true"),
            Xnf::False => f.write_str("false"),
            Xnf::Lit { prop, positive: true } => f.write_str(prop),
            Xnf::Lit { prop, positive: false } => write!(f, "!{prop}"),
            Xnf::Next(e) => write!(f, "X[{e}]"),
            Xnf::WeakNext(e) => write!(f, "N[{e}]"),
            Xnf::And(a, b) => write!(f, "({a} & {b})"),
            Xnf::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// Unfolds `e` (future, NNF) one step.
pub fn xnf_expand(e: &Expr) -> Result<Xnf, FormulaError> {
    if !is_nnf(e) {
        return Err(FormulaError::NotNnf);
    }
    Ok(xnf(e))
}

fn xnf(e: &Expr) -> Xnf {
    use Expr::*;
    match e {
        True => Xnf::True,
        False => Xnf::False,
        Atom(p) => Xnf::Lit { prop: p.clone(), positive: true },
        Not(a) => match &**a {
            Atom(p) => Xnf::Lit { prop: p.clone(), positive: false },
            _ => unreachable!("checked by is_nnf"),
        },
        And(a, b) => Xnf::and(xnf(a), xnf(b)),
        Or(a, b) => Xnf::or(xnf(a), xnf(b)),
        Next(a) => Xnf::Next((**a).clone()),
        WeakNext(a) => Xnf::WeakNext((**a).clone()),
        Until(a, b) => Xnf::or(xnf(b), Xnf::and(xnf(a), Xnf::Next(e.clone()))),
        Release(a, b) => Xnf::and(xnf(b), Xnf::or(xnf(a), Xnf::WeakNext(e.clone()))),
        // F a = true U a and G a = false R a, with the constant folded away
        Eventually(a) => Xnf::or(xnf(a), Xnf::Next(e.clone())),
        Globally(a) => Xnf::and(xnf(a), Xnf::WeakNext(e.clone())),
        _ => unreachable!("checked by is_nnf"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, DialectHint};

    fn f(s: &str) -> Formula {
        parse_formula(s, DialectHint::Auto).unwrap()
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(negation_normal_form(&f("!(a U b)")).unwrap(), f("!a R !b"));
        assert_eq!(negation_normal_form(&f("!X a")).unwrap(), f("N !a"));
        assert_eq!(negation_normal_form(&f("!!a")).unwrap(), f("a"));
        assert_eq!(negation_normal_form(&f("!F a")).unwrap(), f("G !a"));
        assert_eq!(negation_normal_form(&f("!(a -> G b)")).unwrap(), f("a & F !b"));
    }

    #[test]
    fn nnf_rejects_past() {
        assert!(negation_normal_form(&f("Y a")).is_err());
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse_connectives(&f("X(a U b)")).unwrap().expr(), f("Y(a S b)").expr());
        assert_eq!(reverse_connectives(&f("F a")).unwrap().expr(), f("O a").expr());
        assert_eq!(reverse_connectives(&f("G(a -> X b)")).unwrap().expr(), f("H(a -> Y b)").expr());
        assert_eq!(reverse_connectives(&f("N a R b")).unwrap().expr(), f("Z a T b").expr());
        assert_eq!(reverse_connectives(&f("a")).unwrap().dialect(), Dialect::Past);
    }

    #[test]
    fn xnf_examples() {
        let e = f("a U b").into_expr();
        assert_eq!(
            xnf_expand(&e).unwrap(),
            Xnf::or(
                Xnf::Lit { prop: "b".into(), positive: true },
                Xnf::and(Xnf::Lit { prop: "a".into(), positive: true }, Xnf::Next(e.clone()))
            )
        );
        let r = f("a R b").into_expr();
        assert_eq!(
            xnf_expand(&r).unwrap(),
            Xnf::and(
                Xnf::Lit { prop: "b".into(), positive: true },
                Xnf::or(Xnf::Lit { prop: "a".into(), positive: true }, Xnf::WeakNext(r.clone()))
            )
        );
        assert_eq!(xnf_expand(&Expr::atom("a")).unwrap(), Xnf::Lit { prop: "a".into(), positive: true });
        assert_eq!(xnf_expand(&f("!(a & b)").into_expr()), Err(FormulaError::NotNnf));
    }
}
