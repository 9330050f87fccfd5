//! Compile LTLf specifications into minimal DFAs and solve the resulting
//! reachability games.
//!
//! Three pipelines produce the same canonical automaton:
//!
//! * [`compile::pipeline_hopcroft`]: formula to NFA, subset construction,
//!   partition refinement.
//! * [`compile::pipeline_brzozowski_explicit`]: reverse the formula, build
//!   and minimize a DFA for the reverse language, then reverse and
//!   determinize it.
//! * [`compile::pipeline_brzozowski_symbolic`]: as above, but the second
//!   subset construction is done symbolically, one state variable per state
//!   of the reverse DFA.
//!
//! [`symbolic::solve_game`] decides realizability on the symbolic DFA and
//! [`symbolic::extract_strategy`] turns the fixpoint into a controller.

pub mod automata;
pub mod bdd;
pub mod bench;
pub mod compile;
pub mod formula;
pub mod limits;
pub mod par;
pub mod symbolic;
pub mod wba;

use thiserror::Error;

pub use automata::{Automaton, Kind};
pub use bdd::{Bdd, BddError, BddManager, Var};
pub use formula::{Dialect, Expr, Formula, FormulaError, PropSet, Trace};
pub use limits::{Budget, LimitError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Bdd(#[from] BddError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("automaton is not deterministic at state {0}")]
    NotDeterministic(usize),
    #[error("automaton is not complete at state {0}")]
    Incomplete(usize),
    #[error("expected a {expected} automaton, found {found}")]
    WrongKind { expected: &'static str, found: Kind },
    #[error("proposition `{0}` is not in the alphabet")]
    UnknownProposition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid proposition partition: {0}")]
    Partition(String),
    #[error("specification is unrealizable")]
    Unrealizable,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for state-cap and timeout failures.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Limit(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
