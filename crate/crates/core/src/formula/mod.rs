//! LTLf / PLTLf formulas over finite traces.
//!
//! A [`Formula`] pairs an expression tree with a [`Dialect`]. The dialect
//! decides the evaluation point: future (and purely propositional) formulas
//! are evaluated at the first position of a trace, past formulas at the last.

mod eval;
mod parse;
mod transform;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use eval::evaluate;
pub use parse::{parse_formula, DialectHint};
pub use transform::{
    negation_normal_form, reverse_connectives, reverse_past_connectives, xnf_expand, Xnf,
};

/// Maximum number of propositions in a [`PropSet`]; assignments are `u64` bitmasks.
pub const MAX_PROPS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("formula mixes future and past connectives")]
    MixedDialect,
    #[error("expected a {expected} formula, found {found}")]
    WrongDialect { expected: &'static str, found: Dialect },
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error("cannot evaluate on the empty trace")]
    EmptyTrace,
    #[error("proposition `{0}` is not in the trace alphabet")]
    UnknownProposition(String),
    #[error("invalid proposition name `{0}`")]
    InvalidPropName(String),
    #[error("duplicate proposition `{0}`")]
    DuplicateProp(String),
    #[error("too many propositions ({0}, at most {MAX_PROPS})")]
    TooManyProps(usize),
}

/// Which temporal direction a formula talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    Future,
    Past,
    Propositional,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Future => "future",
            Dialect::Past => "past",
            Dialect::Propositional => "propositional",
        })
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "true", "false", "X", "N", "F", "G", "Y", "Z", "O", "H", "U", "R", "S", "T",
];

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered set of proposition names. The position of a name is its bit
/// in an assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PropSet(Vec<String>);

impl PropSet {
    pub fn new<I, S>(names: I) -> Result<Self, FormulaError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if !is_identifier(&name) || KEYWORDS.contains(&name.as_str()) {
                return Err(FormulaError::InvalidPropName(name));
            }
            if out.contains(&name) {
                return Err(FormulaError::DuplicateProp(name));
            }
            out.push(name);
        }
        if out.len() > MAX_PROPS {
            return Err(FormulaError::TooManyProps(out.len()));
        }
        Ok(PropSet(out))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    /// Number of assignments over this set, `2^len`.
    pub fn assignment_count(&self) -> u64 {
        1u64 << self.0.len()
    }

    /// Builds the bitmask for the given true propositions.
    pub fn assignment<S: AsRef<str>>(&self, true_props: &[S]) -> Result<u64, FormulaError> {
        let mut bits = 0u64;
        for p in true_props {
            let i = self
                .index_of(p.as_ref())
                .ok_or_else(|| FormulaError::UnknownProposition(p.as_ref().to_string()))?;
            bits |= 1 << i;
        }
        Ok(bits)
    }

    /// Names of the propositions set in `bits`.
    pub fn true_names(&self, bits: u64) -> Vec<&str> {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, n)| n.as_str())
            .collect()
    }
}

impl fmt::Display for PropSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// A finite trace: one assignment (bitmask over `props`) per step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trace {
    props: PropSet,
    steps: Vec<u64>,
}

impl Trace {
    pub fn new(props: PropSet, steps: Vec<u64>) -> Self {
        let mask = if props.len() == 64 { u64::MAX } else { (1u64 << props.len()) - 1 };
        debug_assert!(steps.iter().all(|s| s & !mask == 0));
        Trace { props, steps }
    }

    /// Trace from per-step lists of true proposition names.
    pub fn from_names<S: AsRef<str>>(props: &PropSet, steps: &[&[S]]) -> Result<Self, FormulaError> {
        let steps = steps
            .iter()
            .map(|s| props.assignment(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Trace { props: props.clone(), steps })
    }

    pub fn props(&self) -> &PropSet {
        &self.props
    }

    pub fn steps(&self) -> &[u64] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> Trace {
        let mut steps = self.steps.clone();
        steps.reverse();
        Trace { props: self.props.clone(), steps }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            write!(f, "{{{}}}", self.props.true_names(*step).join(","))?;
        }
        Ok(())
    }
}

/// Formula syntax tree. Derived connectives are kept as nodes so that
/// parsed text prints back unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    True,
    False,
    Atom(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Next(Box<Expr>),
    WeakNext(Box<Expr>),
    Until(Box<Expr>, Box<Expr>),
    Release(Box<Expr>, Box<Expr>),
    Eventually(Box<Expr>),
    Globally(Box<Expr>),
    Yesterday(Box<Expr>),
    WeakYesterday(Box<Expr>),
    Since(Box<Expr>, Box<Expr>),
    Trigger(Box<Expr>, Box<Expr>),
    Once(Box<Expr>),
    Historically(Box<Expr>),
}

macro_rules! unary_ctor {
    ($($name:ident => $variant:ident),* $(,)?) => {
        $(pub fn $name(e: Expr) -> Expr { Expr::$variant(Box::new(e)) })*
    };
}

macro_rules! binary_ctor {
    ($($name:ident => $variant:ident),* $(,)?) => {
        $(pub fn $name(a: Expr, b: Expr) -> Expr { Expr::$variant(Box::new(a), Box::new(b)) })*
    };
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn atom(name: impl Into<String>) -> Expr {
        Expr::Atom(name.into())
    }

    unary_ctor! {
        not => Not, next => Next, weak_next => WeakNext, eventually => Eventually,
        globally => Globally, yesterday => Yesterday, weak_yesterday => WeakYesterday,
        once => Once, historically => Historically,
    }

    binary_ctor! {
        and => And, or => Or, implies => Implies, iff => Iff, until => Until,
        release => Release, since => Since, trigger => Trigger,
    }

    /// Conjunction of all items, left-nested; `true` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Expr>) -> Expr {
        items
            .into_iter()
            .reduce(Expr::and)
            .unwrap_or(Expr::True)
    }

    pub fn children(&self) -> Vec<&Expr> {
        use Expr::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Globally(a) | Yesterday(a)
            | WeakYesterday(a) | Once(a) | Historically(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b)
            | Since(a, b) | Trigger(a, b) => vec![a, b],
        }
    }

    pub fn is_future_connective(&self) -> bool {
        matches!(
            self,
            Expr::Next(_)
                | Expr::WeakNext(_)
                | Expr::Until(..)
                | Expr::Release(..)
                | Expr::Eventually(_)
                | Expr::Globally(_)
        )
    }

    pub fn is_past_connective(&self) -> bool {
        matches!(
            self,
            Expr::Yesterday(_)
                | Expr::WeakYesterday(_)
                | Expr::Since(..)
                | Expr::Trigger(..)
                | Expr::Once(_)
                | Expr::Historically(_)
        )
    }

    /// Pre-order walk over all nodes.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Expr)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Atom(a) = e {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Number of operator nodes (everything except constants and atoms).
    pub fn connective_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |e| {
            if !matches!(e, Expr::True | Expr::False | Expr::Atom(_)) {
                n += 1;
            }
        });
        n
    }

    /// Syntactic dialect of the tree.
    pub fn dialect(&self) -> Result<Dialect, FormulaError> {
        let (mut fut, mut past) = (false, false);
        self.walk(&mut |e| {
            fut |= e.is_future_connective();
            past |= e.is_past_connective();
        });
        match (fut, past) {
            (true, true) => Err(FormulaError::MixedDialect),
            (true, false) => Ok(Dialect::Future),
            (false, true) => Ok(Dialect::Past),
            (false, false) => Ok(Dialect::Propositional),
        }
    }

    fn is_binary(&self) -> bool {
        self.children().len() == 2
    }

    fn keyword(&self) -> &'static str {
        use Expr::*;
        match self {
            True => "true",
            False => "false",
            Atom(_) => "",
            Not(_) => "!",
            And(..) => "&",
            Or(..) => "|",
            Implies(..) => "->",
            Iff(..) => "<->",
            Next(_) => "X",
            WeakNext(_) => "N",
            Until(..) => "U",
            Release(..) => "R",
            Eventually(_) => "F",
            Globally(_) => "G",
            Yesterday(_) => "Y",
            WeakYesterday(_) => "Z",
            Since(..) => "S",
            Trigger(..) => "T",
            Once(_) => "O",
            Historically(_) => "H",
        }
    }

    fn fmt_nested(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    /// Binary sub-terms are always parenthesized, so the output re-parses to
    /// the same tree regardless of precedence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::True | Expr::False => f.write_str(self.keyword()),
            Expr::Atom(a) => f.write_str(a),
            Expr::Not(a) => {
                f.write_str("!")?;
                a.fmt_nested(f)
            }
            _ => {
                let ch = self.children();
                if ch.len() == 1 {
                    write!(f, "{} ", self.keyword())?;
                    ch[0].fmt_nested(f)
                } else {
                    ch[0].fmt_nested(f)?;
                    write!(f, " {} ", self.keyword())?;
                    ch[1].fmt_nested(f)
                }
            }
        }
    }
}

/// An expression together with its dialect.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    expr: Expr,
    dialect: Dialect,
}

impl Formula {
    /// Wraps `expr`, checking that its connectives fit `dialect`. A
    /// propositional tree may be declared future or past.
    pub fn new(expr: Expr, dialect: Dialect) -> Result<Self, FormulaError> {
        let syntactic = expr.dialect()?;
        if syntactic != Dialect::Propositional && syntactic != dialect {
            return Err(FormulaError::WrongDialect {
                expected: match dialect {
                    Dialect::Future => "future",
                    Dialect::Past => "past",
                    Dialect::Propositional => "propositional",
                },
                found: syntactic,
            });
        }
        Ok(Formula { expr, dialect })
    }

    /// Wraps `expr` with its syntactic dialect.
    pub fn infer(expr: Expr) -> Result<Self, FormulaError> {
        let dialect = expr.dialect()?;
        Ok(Formula { expr, dialect })
    }

    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        parse_formula(text, DialectHint::Auto)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn into_expr(self) -> Expr {
        self.expr
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    /// True for future and propositional formulas (evaluated at position 0).
    pub fn is_future_like(&self) -> bool {
        self.dialect != Dialect::Past
    }

    /// Atoms of the formula, sorted by name.
    pub fn props(&self) -> PropSet {
        PropSet(self.expr.atoms().into_iter().collect())
    }

    pub(crate) fn require_future(&self) -> Result<(), FormulaError> {
        if self.is_future_like() {
            Ok(())
        } else {
            Err(FormulaError::WrongDialect { expected: "future", found: self.dialect })
        }
    }

    pub(crate) fn require_past(&self) -> Result<(), FormulaError> {
        if self.dialect == Dialect::Past {
            Ok(())
        } else {
            Err(FormulaError::WrongDialect { expected: "past", found: self.dialect })
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}
